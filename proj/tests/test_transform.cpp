#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "symframe/frame_builder.hpp"
#include "symframe/transform.hpp"

using namespace symframe;

namespace {

Mask plain_mask(LaurentPoly t, const IntMatrix& m) {
  Mask mask;
  mask.poly = std::move(t);
  mask.dilation = m;
  mask.center = RatVec(m.dim(), Rational(0));
  return mask;
}

FilterBank hexagonal_reference_bank() {
  const IntMatrix e = fixtures::hexagonal::second_wavelet_map();
  const LaurentPoly m1 = fixtures::hexagonal::m1(), d1 = fixtures::hexagonal::m1_dual();
  return bank_from_masks(fixtures::hexagonal::dilation(), {fixtures::hexagonal::m0(), m1, m1.substitute_linear(e)},
                         {fixtures::hexagonal::m0_dual(), d1, d1.substitute_linear(e)});
}

FilterBank hat_bank() {
  const Mask m0 = build_interpolatory_mask(groups::id(1), IntMatrix{{2}}, 2);
  return mutual_extension(m0, build_dual_mask(m0));
}

PeriodicSignal random_signal(const IntMatrix& m, unsigned levels, std::mt19937& rng) {
  PeriodicSignal s;
  s.dilation = m;
  s.levels = levels;
  const LatticeCodec codec(m, levels);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  s.values.resize(codec.size());
  for (auto& v : s.values) v = u(rng);
  return s;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

bool integral(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.get_den() == 1; });
}

}  // namespace

TEST_CASE("codec for M = 2 is binary indexing", "[transform]") {
  const LatticeCodec c(IntMatrix{{2}}, 3);
  REQUIRE(c.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(c.point(i) == IntVec{static_cast<std::int64_t>(i)});
    CHECK(c.index(c.point(i)) == i);
    CHECK(c.index(IntVec{static_cast<std::int64_t>(i) - 8}) == i);
  }
}

TEST_CASE("one-level codec enumerates the digits", "[transform]") {
  const IntMatrix m = IntMatrix::scalar(2, 2);
  const LatticeCodec c(m, 1);
  const auto digits = default_digits(m).digits();
  REQUIRE(c.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(c.point(i) == digits[i]);
}

TEST_CASE("codec representatives are pairwise incongruent modulo M^J", "[transform][property]") {
  for (const IntMatrix& m : {IntMatrix{{2, -1}, {1, 1}}, IntMatrix::diagonal({3, 2}), IntMatrix{{1, 1}, {1, -1}},
                             IntMatrix{{1, -1}, {1, 1}}}) {
    for (unsigned levels : {1u, 2u, 3u}) {
      const LatticeCodec c(m, levels);
      IntMatrix mj = IntMatrix::identity(2);
      for (unsigned j = 0; j < levels; ++j) mj = mj * m;
      const RatMatrix inv = inverse(mj);
      std::vector<IntVec> pts;
      for (std::size_t i = 0; i < c.size(); ++i) {
        pts.push_back(c.point(i));
        CHECK(c.index(pts.back()) == i);
      }
      for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) REQUIRE_FALSE(integral(inv * (pts[a] - pts[b])));
    }
  }
  CHECK(LatticeCodec(IntMatrix{{2, -1}, {1, 1}}, 2).size() == 9);
}

TEST_CASE("codec reduces arbitrary points modulo M^J", "[transform][property]") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> u(-40, 40);
  const IntMatrix m{{2, -1}, {1, 1}};
  const LatticeCodec c(m, 3);
  const IntMatrix m3 = m * m * m;
  for (int t = 0; t < 200; ++t) {
    const IntVec a{u(rng), u(rng)};
    const IntVec g{u(rng) / 8, u(rng) / 8};
    CHECK(c.index(a) == c.index(a + m3 * g));
    CHECK(integral(inverse(m3) * (c.point(c.index(a)) - a)));
  }
}

TEST_CASE("constant signals give vanishing wavelet bands", "[transform]") {
  const FilterBank b = hexagonal_reference_bank();
  PeriodicSignal s;
  s.dilation = b.dilation;
  s.levels = 3;
  s.values.assign(27, 2.5);
  const auto p = analyze(s, b, 2);
  for (const auto& level : p.details)
    for (const auto& band : level.bands)
      for (const auto& v : band) CHECK(std::abs(v) <= 1e-12);
  for (const auto& v : p.coarse) CHECK(std::abs(v - Complex(2.5 * 9)) <= 1e-12);
  CHECK(p.sample_count() == 27);
}

TEST_CASE("delta response is the conjugated dual filter folded onto cosets", "[transform]") {
  const FilterBank b = hexagonal_reference_bank();
  const IntMatrix& m = b.dilation;
  PeriodicSignal s;
  s.dilation = m;
  s.levels = 2;
  s.values.assign(9, 0.0);
  s.values[0] = 1.0;
  const auto p = analyze(s, b, 1);
  const LatticeCodec fine(m, 2), coarse(m, 1);
  // y_nu[beta] = 3 sum_k conj(h~_k) [M beta + k = 0 mod M^2].
  for (std::size_t nu = 0; nu < 3; ++nu)
    for (std::size_t beta = 0; beta < 3; ++beta) {
      Complex want = 0;
      for (const auto& [k, v] : b.dual[nu].terms())
        if (fine.index(m * coarse.point(beta) + k) == 0) want += 3.0 * std::conj(v.to_complex());
      const Complex got = nu == 0 ? p.coarse[beta] : p.details[0].bands[nu - 1][beta];
      CHECK(std::abs(got - want) <= 1e-14);
    }
}

TEST_CASE("wavelet bands annihilate linear polynomials away from the seam", "[transform]") {
  const Mask m0 = build_interpolatory_mask(groups::id(2), IntMatrix::scalar(2, 2), 2);
  const FilterBank b = mutual_extension(m0, build_dual_mask(m0));
  const unsigned levels = 4;
  const LatticeCodec codec(b.dilation, levels), coarse(b.dilation, levels - 1);
  PeriodicSignal s;
  s.dilation = b.dilation;
  s.levels = levels;
  for (std::size_t i = 0; i < codec.size(); ++i) {
    const IntVec a = codec.point(i);
    s.values.push_back(0.25 + 0.5 * static_cast<double>(a[0]) - 0.75 * static_cast<double>(a[1]));
  }
  const auto p = analyze(s, b, 1);
  std::size_t interior = 0;
  for (std::size_t beta = 0; beta < coarse.size(); ++beta) {
    const IntVec base = b.dilation * coarse.point(beta);
    bool clean = true;
    for (std::size_t nu = 1; nu < b.size() && clean; ++nu)
      for (const auto& [k, v] : b.dual[nu].terms())
        if (codec.point(codec.index(base + k)) != base + k) clean = false;
    if (!clean) continue;
    ++interior;
    for (const auto& band : p.details[0].bands) CHECK(std::abs(band[beta]) <= 1e-9);
  }
  CHECK(interior > 0);
}

TEST_CASE("perfect reconstruction on random signals", "[transform]") {
  std::mt19937 rng(17);
  const Mask axis0 = build_interpolatory_mask(groups::axis(2), fixtures::axis::dilation(), 2);
  std::vector<FilterBank> banks{hexagonal_reference_bank(), hat_bank(),
                                symmetrized_extension(axis0, build_dual_mask(axis0))};
  for (const auto& b : banks) {
    const TransformPlan plan(b, 3);
    for (int t = 0; t < 20; ++t) {
      const auto s = random_signal(b.dilation, 3, rng);
      for (unsigned levels : {1u, 2u, 3u}) {
        const auto p = analyze(s, plan, levels);
        CHECK(p.sample_count() == s.values.size());
        CHECK(max_abs_diff(synthesize(p, plan).values, s.values) <= 1e-10);
      }
    }
  }
}

TEST_CASE("perfect reconstruction in three dimensions", "[transform]") {
  std::mt19937 rng(23);
  const Mask m0 = build_interpolatory_mask(groups::id(3), IntMatrix::scalar(3, 2), 2);
  const FilterBank b = mutual_extension(m0, build_dual_mask(m0));
  const TransformPlan plan(b, 2);
  const auto s = random_signal(b.dilation, 2, rng);
  CHECK(max_abs_diff(synthesize(analyze(s, plan, 2), plan).values, s.values) <= 1e-10);
}

TEST_CASE("trivial pyramids", "[transform]") {
  const FilterBank b = hat_bank();
  const TransformPlan plan(b, 3);
  SubbandPyramid zero;
  zero.dilation = b.dilation;
  zero.levels = 3;
  zero.coarse.assign(2, Complex(0));
  zero.details.resize(2);
  zero.details[0].bands = {std::vector<Complex>(4)};
  zero.details[1].bands = {std::vector<Complex>(2)};
  for (double v : synthesize(zero, plan).values) CHECK(v == 0.0);

  PeriodicSignal c;
  c.dilation = b.dilation;
  c.levels = 3;
  c.values.assign(8, -1.25);
  auto p = analyze(c, plan, 2);
  for (auto& level : p.details)
    for (auto& band : level.bands) std::fill(band.begin(), band.end(), Complex(0));
  CHECK(max_abs_diff(synthesize(p, plan).values, c.values) <= 1e-12);
}

TEST_CASE("transform argument errors", "[transform]") {
  const FilterBank b = hat_bank();
  PeriodicSignal s;
  s.dilation = IntMatrix{{3}};
  s.levels = 2;
  s.values.assign(9, 0.0);
  CHECK_THROWS_AS(analyze(s, b, 1), InvalidArgument);
  s.dilation = IntMatrix{{2}};
  s.values.assign(4, 0.0);
  CHECK_THROWS_AS(analyze(s, b, 3), InvalidArgument);
  s.values.assign(5, 0.0);
  CHECK_THROWS_AS(analyze(s, b, 1), InvalidArgument);
}

TEST_CASE("hat mask subdivision converges to the hat function", "[transform]") {
  const Mask hat = build_interpolatory_mask(groups::id(1), IntMatrix{{2}}, 2);
  const auto r = render_refinable(hat, 10);
  CHECK(r.samples.size() == 2047);
  CHECK(std::abs(r.samples.at(IntVec{0}) - 1.0) <= 1e-6);
  // phi(x) = 1 - |x| at every dyadic sample.
  double err = 0;
  for (const auto& [k, v] : r.samples) {
    const double x = static_cast<double>(k[0]) / 1024.0;
    err = std::max(err, std::abs(v - (1.0 - std::abs(x))));
  }
  CHECK(err <= 1e-12);
  CHECK(std::abs(normalized_mass(r) - 1.0) <= 1e-12);
  CHECK(partition_of_unity_error(r) <= 1e-12);
  CHECK(r.position(IntVec{512}) == RatVec{make_rational(1, 2)});
}

TEST_CASE("Haar subdivision keeps an indicator", "[transform]") {
  LaurentPoly haar(1);
  haar.set({0}, Scalar(make_rational(1, 2)));
  haar.set({1}, Scalar(make_rational(1, 2)));
  const auto r = render_refinable(plain_mask(haar, IntMatrix{{2}}), 6);
  CHECK(r.samples.size() == 64);
  for (const auto& [k, v] : r.samples) {
    CHECK(v >= 0.0);
    CHECK(v == 1.0);
  }
  CHECK(partition_of_unity_error(r) == 0.0);
}

TEST_CASE("exact subdivision mass is exactly one", "[transform]") {
  const auto r = render_refinable_exact(plain_mask(fixtures::hexagonal::m0(), fixtures::hexagonal::dilation()), 3);
  CHECK(normalized_mass(r) == Scalar(1));
  const auto f = render_refinable(plain_mask(fixtures::hexagonal::m0(), fixtures::hexagonal::dilation()), 3);
  CHECK(f.samples.size() == r.samples.size());
  for (const auto& [k, v] : r.samples) CHECK(std::abs(f.samples.at(k) - v.to_complex().real()) <= 1e-13);
}

TEST_CASE("partition of unity at every refinement level", "[transform]") {
  const Mask m0 = plain_mask(fixtures::hexagonal::m0(), fixtures::hexagonal::dilation());
  for (unsigned j = 1; j <= 5; ++j) {
    const auto r = render_refinable(m0, j);
    CHECK(partition_of_unity_error(r) <= 1e-10);
    CHECK(std::abs(normalized_mass(r) - 1.0) <= 1e-12);
  }
  const Mask axis0 = plain_mask(fixtures::axis::m0(), fixtures::axis::dilation());
  for (unsigned j = 1; j <= 4; ++j) CHECK(partition_of_unity_error(render_refinable(axis0, j)) <= 1e-10);
}
