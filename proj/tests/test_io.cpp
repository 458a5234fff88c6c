#include <catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"
#include "symframe/frame_builder.hpp"
#include "symframe/io/serialize.hpp"
#include "symframe/mask_builder.hpp"

using namespace symframe;
using namespace symframe::io;

TEST_CASE("polynomial JSON round trip keeps cyclotomic values", "[io]") {
  LaurentPoly t(2);
  t.set({0, 0}, Scalar(make_rational(1, 3)));
  t.set({-2, 1}, Scalar::root_of_unity(3, 1));
  t.set({4, -1}, Scalar(make_rational(-7, 12)));
  const auto back = poly_from_json(parse_json(poly_to_json(t).dump()));
  CHECK(back == t);
}

TEST_CASE("polynomial JSON errors", "[io]") {
  CHECK_THROWS_AS(poly_from_json(parse_json(R"({"dim":2})")), ParseError);
  CHECK_THROWS_AS(poly_from_json(parse_json(R"({"dim":2,"terms":[{"k":[0],"v":"1"}]})")), ParseError);
  CHECK_THROWS_AS(
      poly_from_json(parse_json(R"({"dim":1,"terms":[{"k":[0],"v":"1"},{"k":[0],"v":"2"}]})")), ParseError);
  CHECK_THROWS_AS(poly_from_json(parse_json(R"({"dim":1,"terms":[{"k":[0],"v":"1/0"}]})")), Error);
}

TEST_CASE("JSON syntax errors report line and column", "[io]") {
  try {
    parse_json("{\n  \"dim\": 2,\n  \"terms\": [,]\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("dense tables round trip through the formatter", "[io]") {
  for (const char* rel : {"hexagonal/m0.txt", "hexagonal/m1.txt", "hexagonal/m1_dual.txt", "axis/m0_dual.txt",
                          "axis/m3.txt"}) {
    const auto t = fixtures::table(rel);
    CHECK(parse_dense_table(format_dense_table(t)) == t);
  }
}

TEST_CASE("dense table orientation", "[io]") {
  // Columns increase k1 to the right, rows decrease k2 downwards.
  const auto t = parse_dense_table("# comment line\n1 2 3\n4 5* 6\n7 8 9\n");
  CHECK(t.coeff({0, 0}) == Scalar(5));
  CHECK(t.coeff({1, 0}) == Scalar(6));
  CHECK(t.coeff({-1, 1}) == Scalar(1));
  CHECK(t.coeff({0, -1}) == Scalar(8));
  CHECK(t.coeff({1, -1}) == Scalar(9));
}

TEST_CASE("dense table errors carry positions", "[io]") {
  auto position = [](const std::string& text) {
    try {
      parse_dense_table(text);
    } catch (const ParseError& e) {
      return std::pair{e.line(), e.column()};
    }
    return std::pair<std::size_t, std::size_t>{99, 99};
  };
  CHECK(position("1 2*\n3 4 5\n") == std::pair<std::size_t, std::size_t>{2, 1});
  CHECK(position("1 2*\n3 4*\n") == std::pair<std::size_t, std::size_t>{2, 3});
  CHECK(position("1 2*\n3 x\n") == std::pair<std::size_t, std::size_t>{2, 3});
  CHECK_THROWS_AS(parse_dense_table("1 2\n3 4\n"), ParseError);
  CHECK_THROWS_AS(parse_dense_table("# nothing\n"), ParseError);
}

TEST_CASE("mask JSON round trip with metadata", "[io]") {
  const Mask m = build_interpolatory_mask(groups::hexagonal(), fixtures::hexagonal::dilation(), 3);
  const Mask back = mask_from_json(parse_json(mask_to_json(m).dump()));
  CHECK(back.poly == m.poly);
  CHECK(back.dilation == m.dilation);
  CHECK(back.group == m.group);
  CHECK(back.order == 3);
  CHECK(back.role == MaskRole::primal_refinable);
  CHECK_THROWS_AS(mask_from_json(parse_json(poly_to_json(m.poly).dump())), ParseError);
}

TEST_CASE("bank JSON round trip preserves MEP and symmetrizer", "[io]") {
  const auto h = groups::axis(2);
  const Mask m0 = make_mask(fixtures::axis::m0(), fixtures::axis::dilation(), &h);
  const Mask m0d = make_mask(fixtures::axis::m0_dual(), fixtures::axis::dilation(), &h, MaskRole::dual_refinable);
  const FilterBank b = symmetrized_extension(m0, m0d, Normalization::exact_paraunitary);
  const FilterBank back = bank_from_json(parse_json(bank_to_json(b).dump()));
  REQUIRE(back.size() == b.size());
  for (std::size_t nu = 0; nu < b.size(); ++nu) {
    CHECK(back.primal[nu] == b.primal[nu]);
    CHECK(back.dual[nu] == b.dual[nu]);
  }
  CHECK(back.digits.digits() == b.digits.digits());
  CHECK(check_mep(back).pass);
  REQUIRE(back.symmetrizer);
  CHECK(back.symmetrizer->w == b.symmetrizer->w);
  CHECK(bank_to_json(back).dump() == bank_to_json(b).dump());
}

TEST_CASE("SWSG signals encode and decode bit-exactly", "[io]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  SignalFile s{IntMatrix{{2, -1}, {1, 1}}, 3, {}};
  for (int i = 0; i < 27; ++i) s.values.push_back(u(rng));
  const std::string bytes = encode_signal(s);
  CHECK(bytes.substr(0, 4) == "SWSG");
  CHECK(bytes.size() == 4 + 12 + 4 * 8 + 27 * 8);
  const SignalFile back = decode_signal(bytes);
  CHECK(back.dilation == s.dilation);
  CHECK(back.levels == 3);
  CHECK(back.values == s.values);

  CHECK_THROWS_AS(decode_signal("SWSX" + bytes.substr(4)), ParseError);
  CHECK_THROWS_AS(decode_signal(bytes.substr(0, bytes.size() - 8)), ParseError);
  CHECK_THROWS_AS(decode_signal(bytes.substr(0, 10)), ParseError);
}

TEST_CASE("CSV layout", "[io]") {
  const auto csv = format_csv({{0, 1}, {-2, 3}}, {0.5, -1.25}, {"k1", "k2"});
  CHECK(csv == "k1,k2,value\n0,1,0.5\n-2,3,-1.25\n");
}

TEST_CASE("build configuration parsing", "[io]") {
  const auto c = parse_config(R"(
dimension = 2
dilation = [[3, 0], [0, 2]]
group = "axis"
order = 1
dual_order = 1
mode = "symmetrized"
normalization = "unitary"
[output]
dir = "out"
name = "axis"
)");
  CHECK(c.dilation == IntMatrix::diagonal({3, 2}));
  CHECK(c.group().size() == groups::axis(2).size());
  CHECK(c.mode == "symmetrized");
  CHECK(c.normalization == "unitary");
  CHECK(c.scalar_mode == "rational");
  CHECK(c.name == "axis");

  const auto g = parse_config(R"(
dilation = [[2, -1], [1, 1]]
order = 3
[group]
generators = [[[0, -1], [1, -1]], [[0, 1], [1, 0]], [[-1, 0], [0, -1]]]
)");
  CHECK(g.group().size() == 12);
  CHECK(g.dual_order == 3);
  CHECK(g.mode == "mutual");
}

TEST_CASE("configuration errors name the field", "[io]") {
  auto message = [](const std::string& text) -> std::string {
    try {
      parse_config(text);
    } catch (const ParseError& e) {
      return e.what();
    }
    return "";
  };
  CHECK_THAT(message("group = \"id\"\n"), Catch::Matchers::ContainsSubstring("'dilation'"));
  CHECK_THAT(message("dilation = [[1,0],[0,1]]\ngroup = \"id\"\n"), Catch::Matchers::ContainsSubstring("'dilation'"));
  CHECK_THAT(message("dilation = [[2]]\n"), Catch::Matchers::ContainsSubstring("'group'"));
  CHECK_THAT(message("dilation = [[2]]\ngroup = \"id\"\norder = 0\n"), Catch::Matchers::ContainsSubstring("'order'"));
  CHECK_THAT(message("dilation = [[2]]\ngroup = \"id\"\nmode = \"other\"\n"),
             Catch::Matchers::ContainsSubstring("'mode'"));
  CHECK_THAT(message("dilation = [[2]]\ngroup = \"id\"\nmode = \"custom\"\n"),
             Catch::Matchers::ContainsSubstring("'custom.file'"));
  CHECK_THAT(message("dilation = [[2]]\ngroup = \"id\"\ncenter = [\"1/2\"]\n"),
             Catch::Matchers::ContainsSubstring("'center'"));
  CHECK_THAT(message("dimension = 3\ndilation = [[2]]\ngroup = \"id\"\n"),
             Catch::Matchers::ContainsSubstring("'dimension'"));
  // The 90 degree rotation does not commute with diag(3,2) up to the group.
  CHECK_THAT(message("dilation = [[3,0],[0,2]]\n[group]\ngenerators = [[[0,-1],[1,0]]]\n"),
             Catch::Matchers::ContainsSubstring("'group'"));
  CHECK(message("dilation = [[2]\n") != "");
}
