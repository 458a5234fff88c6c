#pragma once

// Text and binary formats: scalars and polynomials as JSON, dense 2-d
// coefficient tables, filter banks, orbit structures, verification reports,
// SWSG signal files, CSV, and the TOML build configuration.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <toml.hpp>

#include "symframe/error.hpp"
#include "symframe/exact_scalar.hpp"
#include "symframe/lattice.hpp"
#include "symframe/laurent.hpp"
#include "symframe/mask.hpp"
#include "symframe/verify.hpp"

namespace symframe::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Small helpers

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line/column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string("JSON: ") + e.what(), line, col);
  }
}

inline json matrix_to_json(const IntMatrix& m) { return json(m.rows()); }

inline IntMatrix matrix_from_json(const json& j, const std::string& field) {
  try {
    return IntMatrix::from_rows(j.get<std::vector<std::vector<std::int64_t>>>());
  } catch (const json::exception& e) {
    throw ParseError("field '" + field + "': expected a square integer matrix (" + e.what() + ")");
  } catch (const InvalidArgument& e) {
    throw ParseError("field '" + field + "': " + e.what());
  }
}

inline json ratvec_to_json(const RatVec& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

inline RatVec ratvec_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError("field '" + field + "': expected an array");
  RatVec v;
  for (const auto& x : j) {
    if (x.is_number_integer()) v.emplace_back(x.get<long>());
    else if (x.is_string()) v.push_back(parse_rational(x.get<std::string>()));
    else throw ParseError("field '" + field + "': entries must be integers or rational strings");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Scalars and polynomials

inline json scalar_to_json(const Scalar& s) { return s.str(); }

inline Scalar scalar_from_json(const json& j) {
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (!j.is_string()) throw ParseError("scalar must be a string such as \"1/3\" or \"zeta(4):[0,1]\"");
  return Scalar::parse(j.get<std::string>());
}

inline json poly_to_json(const LaurentPoly& t) {
  json terms = json::array();
  for (const auto& [k, v] : t.terms()) terms.push_back({{"k", k}, {"v", v.str()}});
  return {{"dim", t.dim()}, {"terms", terms}};
}

inline LaurentPoly poly_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("terms"))
    throw ParseError("polynomial JSON needs 'dim' and 'terms'");
  const auto d = j.at("dim").get<std::size_t>();
  LaurentPoly t(d);
  for (const auto& term : j.at("terms")) {
    IntVec k;
    try {
      k = term.at("k").get<IntVec>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("polynomial term offset: ") + e.what());
    }
    if (k.size() != d) throw ParseError("polynomial term " + to_string(k) + " has wrong dimension");
    if (!term.contains("v")) throw ParseError("polynomial term " + to_string(k) + " has no value");
    if (t.terms().count(k)) throw ParseError("duplicate polynomial term " + to_string(k));
    t.set(k, scalar_from_json(term.at("v")));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Dense 2-d tables. Columns run over k1 (left to right increasing), rows over
// k2 (top to bottom decreasing). The k = 0 entry carries a trailing '*'.

inline LaurentPoly parse_dense_table(const std::string& text) {
  struct Cell {
    std::string token;
    std::size_t line, column;
  };
  std::vector<std::vector<Cell>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::vector<Cell> row;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (std::isspace(static_cast<unsigned char>(line[i])) || line[i] == ',')) ++i;
      if (i >= line.size()) break;
      const std::size_t start = i;
      int depth = 0;  // commas inside "zeta(L):[...]" belong to the token
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && (line[i] != ',' || depth > 0)) {
        if (line[i] == '[') ++depth;
        if (line[i] == ']') --depth;
        ++i;
      }
      row.push_back({line.substr(start, i - start), line_no, start + 1});
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("dense table is empty");
  const std::size_t width = rows[0].size();
  std::optional<std::pair<std::size_t, std::size_t>> anchor;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width)
      throw ParseError("dense table rows must have equal length", rows[r][0].line, rows[r][0].column);
    for (std::size_t c = 0; c < width; ++c) {
      auto& cell = rows[r][c];
      if (!cell.token.empty() && cell.token.back() == '*') {
        if (anchor) throw ParseError("dense table has more than one '*' anchor", cell.line, cell.column);
        anchor = {r, c};
        cell.token.pop_back();
      }
    }
  }
  if (!anchor) throw ParseError("dense table needs exactly one entry marked with '*' (the k = 0 coefficient)");
  LaurentPoly t(2);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < width; ++c) {
      const auto& cell = rows[r][c];
      Scalar v;
      try {
        v = Scalar::parse(cell.token);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), cell.line, cell.column);
      }
      const IntVec k{static_cast<std::int64_t>(c) - static_cast<std::int64_t>(anchor->second),
                     static_cast<std::int64_t>(anchor->first) - static_cast<std::int64_t>(r)};
      t.set(k, v);
    }
  return t;
}

inline std::string format_dense_table(const LaurentPoly& t) {
  if (t.dim() != 2) throw InvalidArgument("dense tables exist only for d = 2");
  auto [lo, hi] = t.bounding_box();
  for (std::size_t j = 0; j < 2; ++j) {
    lo[j] = std::min<std::int64_t>(lo[j], 0);
    hi[j] = std::max<std::int64_t>(hi[j], 0);
  }
  std::vector<std::vector<std::string>> cells;
  std::size_t w = 1;
  for (std::int64_t y = hi[1]; y >= lo[1]; --y) {
    std::vector<std::string> row;
    for (std::int64_t x = lo[0]; x <= hi[0]; ++x) {
      std::string s = t.coeff({x, y}).str();
      if (x == 0 && y == 0) s += '*';
      w = std::max(w, s.size());
      row.push_back(s);
    }
    cells.push_back(row);
  }
  std::string out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ' ';
      out += std::string(w - row[c].size(), ' ') + row[c];
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Masks and banks

inline json mask_to_json(const Mask& m) {
  json j = poly_to_json(m.poly);
  j["metadata"] = {{"group", m.group},
                   {"dilation", matrix_to_json(m.dilation)},
                   {"center", ratvec_to_json(m.center.empty() ? RatVec(m.dim(), Rational(0)) : m.center)},
                   {"order", m.order},
                   {"role", to_string(m.role)}};
  return j;
}

inline Mask mask_from_json(const json& j) {
  Mask m;
  m.poly = poly_from_json(j);
  if (!j.contains("metadata") || !j.at("metadata").contains("dilation"))
    throw ParseError("mask JSON needs metadata.dilation");
  const auto& meta = j.at("metadata");
  m.dilation = matrix_from_json(meta.at("dilation"), "metadata.dilation");
  if (m.dilation.dim() != m.poly.dim()) throw ParseError("mask dimension differs from its dilation matrix");
  m.group = meta.value("group", std::string("trivial"));
  m.center = meta.contains("center") ? ratvec_from_json(meta.at("center"), "metadata.center")
                                     : RatVec(m.dim(), Rational(0));
  m.order = meta.value("order", 0);
  m.role = parse_mask_role(meta.value("role", std::string("primal-refinable")));
  return m;
}

/// Mask from either the JSON form or, for d = 2, a dense table with an
/// explicit dilation.
inline Mask load_mask(const std::string& path, const std::optional<IntMatrix>& dilation = std::nullopt) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return mask_from_json(parse_json(text));
  if (!dilation) throw ParseError("dense table '" + path + "' needs a dilation matrix");
  Mask m;
  m.poly = parse_dense_table(text);
  m.dilation = *dilation;
  m.center = RatVec(2, Rational(0));
  return m;
}

inline json scalar_matrix_to_json(const std::vector<std::vector<Scalar>>& a) {
  json rows = json::array();
  for (const auto& r : a) {
    json row = json::array();
    for (const auto& v : r) row.push_back(v.str());
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<std::vector<Scalar>> scalar_matrix_from_json(const json& j) {
  std::vector<std::vector<Scalar>> a;
  for (const auto& r : j) {
    std::vector<Scalar> row;
    for (const auto& v : r) row.push_back(scalar_from_json(v));
    a.push_back(row);
  }
  return a;
}

inline json poly_matrix_to_json(const PolyMatrix& a) {
  json rows = json::array();
  for (const auto& r : a) {
    json row = json::array();
    for (const auto& p : r) row.push_back(poly_to_json(p));
    rows.push_back(row);
  }
  return rows;
}

inline PolyMatrix poly_matrix_from_json(const json& j) {
  PolyMatrix a;
  for (const auto& r : j) {
    std::vector<LaurentPoly> row;
    for (const auto& p : r) row.push_back(poly_from_json(p));
    a.push_back(row);
  }
  return a;
}

inline json bank_to_json(const FilterBank& b) {
  json j;
  j["dilation"] = matrix_to_json(b.dilation);
  j["mode"] = b.mode;
  j["group"] = b.group;
  j["digits"] = b.digits.digits();
  json labels = json::array();
  for (const auto& l : b.labels) labels.push_back({l.orbit, l.index});
  j["channels"] = labels;
  json primal = json::array(), dual = json::array();
  for (const auto& p : b.primal) primal.push_back(poly_to_json(p));
  for (const auto& p : b.dual) dual.push_back(poly_to_json(p));
  j["primal"] = primal;
  j["dual"] = dual;
  if (b.symmetrizer) {
    json w = json::array(), wd = json::array();
    for (const auto& blk : b.symmetrizer->w) w.push_back(scalar_matrix_to_json(blk));
    for (const auto& blk : b.symmetrizer->w_dual) wd.push_back(scalar_matrix_to_json(blk));
    j["symmetrizer"] = {{"normalization", b.symmetrizer->normalization}, {"W", w}, {"W_dual", wd}};
  }
  return j;
}

inline FilterBank bank_from_json(const json& j) {
  for (const char* f : {"dilation", "primal", "dual"})
    if (!j.contains(f)) throw ParseError(std::string("filter bank JSON needs '") + f + "'");
  const IntMatrix m = matrix_from_json(j.at("dilation"), "dilation");
  std::vector<LaurentPoly> primal, dual;
  for (const auto& p : j.at("primal")) primal.push_back(poly_from_json(p));
  for (const auto& p : j.at("dual")) dual.push_back(poly_from_json(p));
  DigitSystem digits = default_digits(m);
  if (j.contains("digits")) {
    try {
      digits = DigitSystem(m, j.at("digits").get<std::vector<IntVec>>());
    } catch (const InvalidArgument& e) {
      throw ParseError(std::string("filter bank digits: ") + e.what());
    }
  }
  FilterBank b = bank_from_masks(m, std::move(primal), std::move(dual), digits);
  b.mode = j.value("mode", std::string("custom"));
  b.group = j.value("group", std::string("trivial"));
  if (j.contains("channels")) {
    b.labels.clear();
    for (const auto& l : j.at("channels")) b.labels.push_back({l.at(0).get<std::size_t>(), l.at(1).get<std::size_t>()});
  }
  if (j.contains("symmetrizer")) {
    Symmetrizer s;
    s.normalization = j.at("symmetrizer").value("normalization", std::string("exact-paraunitary"));
    for (const auto& blk : j.at("symmetrizer").at("W")) s.w.push_back(scalar_matrix_from_json(blk));
    for (const auto& blk : j.at("symmetrizer").at("W_dual")) s.w_dual.push_back(scalar_matrix_from_json(blk));
    b.symmetrizer = s;
  }
  return b;
}

inline json orbit_structure_to_json(const OrbitStructure& os) {
  json orbits = json::array();
  const auto& h = os.group();
  for (std::size_t p = 0; p < os.orbit_count(); ++p) {
    const auto& o = os.orbit(p);
    json trans = json::array();
    for (auto e : o.transversal) trans.push_back(matrix_to_json(h[e]));
    json jmap = json::array();
    for (std::size_t i = 0; i < o.size(); ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < h.size(); ++k) row.push_back(os.jmap(p, i, k));
      jmap.push_back(row);
    }
    orbits.push_back({{"representative", o.representative},
                      {"digits", o.digits},
                      {"stabilizer", o.stabilizer},
                      {"transversal", trans},
                      {"stabilizer_shifts", o.stabilizer_shift},
                      {"jmap", jmap}});
  }
  json elements = json::array();
  for (const auto& e : h.elements()) elements.push_back(matrix_to_json(e));
  return {{"group", h.name()},
          {"elements", elements},
          {"dilation", matrix_to_json(os.dilation())},
          {"center", ratvec_to_json(os.center())},
          {"orbits", orbits}};
}

inline json report_to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json x = {{"name", c.name}, {"pass", c.pass}};
    if (!c.witness.empty()) x["witness"] = c.witness;
    if (c.value) x["value"] = *c.value;
    checks.push_back(x);
  }
  return {{"pass", r.all_pass()}, {"checks", checks}};
}

inline std::string format_report_table(const VerificationReport& r) {
  std::string out;
  for (const auto& c : r.checks) {
    out += (c.pass ? "ok    " : "FAIL  ") + c.name;
    if (c.value) out += " = " + std::to_string(*c.value);
    if (!c.witness.empty()) out += "  [" + c.witness + "]";
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Signals: "SWSG" magic, u32 version, u32 d, u32 J, d*d i64 entries of M
// row-major, then m^J little-endian f64 samples in codec order.

struct SignalFile {
  IntMatrix dilation;
  unsigned levels = 0;
  std::vector<double> values;
};

namespace detail {

template <class T>
void put_le(std::string& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw ParseError("SWSG file truncated at byte " + std::to_string(pos));
  unsigned char b[sizeof(T)];
  std::memcpy(b, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  pos += sizeof(T);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace detail

constexpr std::uint32_t kSignalVersion = 1;

inline std::string encode_signal(const SignalFile& s) {
  std::string out = "SWSG";
  detail::put_le<std::uint32_t>(out, kSignalVersion);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.dilation.dim()));
  detail::put_le<std::uint32_t>(out, s.levels);
  for (auto v : s.dilation.entries()) detail::put_le<std::int64_t>(out, v);
  for (double v : s.values) detail::put_le<double>(out, v);
  return out;
}

inline SignalFile decode_signal(const std::string& in) {
  if (in.size() < 4 || in.compare(0, 4, "SWSG") != 0) throw ParseError("not an SWSG signal file (bad magic)");
  std::size_t pos = 4;
  const auto version = detail::get_le<std::uint32_t>(in, pos);
  if (version != kSignalVersion) throw ParseError("unsupported SWSG version " + std::to_string(version));
  const auto d = detail::get_le<std::uint32_t>(in, pos);
  const auto levels = detail::get_le<std::uint32_t>(in, pos);
  if (d == 0 || d > 8) throw ParseError("SWSG dimension " + std::to_string(d) + " out of range");
  SignalFile s;
  s.dilation = IntMatrix(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s.dilation(i, j) = detail::get_le<std::int64_t>(in, pos);
  s.levels = levels;
  const auto m = static_cast<std::uint64_t>(std::llabs(s.dilation.det()));
  if (m < 2) throw ParseError("SWSG dilation matrix is not expanding");
  std::uint64_t count = 1;
  for (unsigned j = 0; j < levels; ++j) count *= m;
  if (in.size() - pos != count * sizeof(double))
    throw ParseError("SWSG payload holds " + std::to_string((in.size() - pos) / sizeof(double)) + " samples, expected " +
                     std::to_string(count));
  s.values.resize(count);
  for (auto& v : s.values) v = detail::get_le<double>(in, pos);
  return s;
}

inline void save_signal(const std::string& path, const SignalFile& s) { write_text_file(path, encode_signal(s)); }
inline SignalFile load_signal(const std::string& path) { return decode_signal(read_text_file(path)); }

/// CSV with one row per sample: lattice coordinates then value.
inline std::string format_csv(const std::vector<IntVec>& points, const std::vector<double>& values,
                              const std::vector<std::string>& coordinate_names) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& n : coordinate_names) out << n << ',';
  out << "value\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (auto x : points[i]) out << x << ',';
    out << values[i] << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Build configuration

struct BuildConfig {
  std::size_t dimension = 0;
  IntMatrix dilation;
  std::string group_name;              // named group, or empty when generators are given
  std::vector<IntMatrix> generators;
  RatVec center;
  int order = 1;
  int dual_order = 0;                  // 0: same as order
  std::string mode = "mutual";         // mutual | symmetrized | custom
  std::string scalar_mode = "rational";
  std::string normalization = "exact-paraunitary";
  std::string custom_file;             // U, U~ for mode = custom
  std::string out_dir = ".";
  std::string name = "bank";

  SymmetryGroup group() const {
    if (!group_name.empty()) return groups::by_name(group_name, dimension);
    auto h = validate_group(generators);
    return h;
  }
};

namespace detail {

inline ParseError config_error(const std::string& field, const std::string& what) {
  return ParseError("config field '" + field + "': " + what);
}

inline IntMatrix toml_matrix(const toml::node* node, const std::string& field) {
  const auto* arr = node ? node->as_array() : nullptr;
  if (!arr) throw config_error(field, "expected an integer matrix like [[2,0],[0,2]]");
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& r : *arr) {
    const auto* row = r.as_array();
    if (!row) throw config_error(field, "expected an array of rows");
    std::vector<std::int64_t> vals;
    for (const auto& x : *row) {
      const auto v = x.value<std::int64_t>();
      if (!v) throw config_error(field, "matrix entries must be integers");
      vals.push_back(*v);
    }
    rows.push_back(vals);
  }
  try {
    return IntMatrix::from_rows(rows);
  } catch (const InvalidArgument& e) {
    throw config_error(field, e.what());
  }
}

}  // namespace detail

inline BuildConfig parse_config(const std::string& text, const std::string& base_dir = ".") {
  toml::table t;
  try {
    t = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ParseError(std::string("config: ") + std::string(e.description()), e.source().begin.line,
                     e.source().begin.column);
  }
  BuildConfig c;
  c.dilation = detail::toml_matrix(t.get("dilation"), "dilation");
  c.dimension = static_cast<std::size_t>(t["dimension"].value_or<std::int64_t>(static_cast<std::int64_t>(c.dilation.dim())));
  if (c.dimension != c.dilation.dim()) throw detail::config_error("dimension", "does not match the dilation matrix");
  if (!is_dilation(c.dilation)) throw detail::config_error("dilation", c.dilation.str() + " is not a dilation matrix");

  const auto* group = t.get("group");
  if (!group) throw detail::config_error("group", "missing");
  if (const auto name = group->value<std::string>()) {
    c.group_name = *name;
  } else if (const auto* gt = group->as_table()) {
    if (const auto name2 = (*gt)["name"].value<std::string>()) c.group_name = *name2;
    if (const auto* gens = gt->get("generators")) {
      const auto* arr = gens->as_array();
      if (!arr) throw detail::config_error("group.generators", "expected an array of matrices");
      for (std::size_t i = 0; i < arr->size(); ++i)
        c.generators.push_back(detail::toml_matrix(arr->get(i), "group.generators[" + std::to_string(i) + "]"));
    }
    if (c.group_name.empty() && c.generators.empty())
      throw detail::config_error("group", "give either name or generators");
  } else {
    throw detail::config_error("group", "expected a name or a table");
  }
  try {
    const auto h = c.group();
    if (h.dim() != c.dimension) throw InvalidArgument("group acts in another dimension");
    if (!check_dilation_compatibility(h, c.dilation))
      throw IncompatibleGroup(h.name() + " is not a symmetry group with respect to " + c.dilation.str());
  } catch (const Error& e) {
    throw detail::config_error("group", e.what());
  }

  c.center = RatVec(c.dimension, Rational(0));
  if (const auto* center = t.get("center")) {
    const auto* arr = center->as_array();
    if (!arr || arr->size() != c.dimension) throw detail::config_error("center", "expected a vector of length d");
    for (std::size_t i = 0; i < c.dimension; ++i) {
      const auto* x = arr->get(i);
      if (auto v = x->value<std::int64_t>()) c.center[i] = Rational(static_cast<long>(*v));
      else if (auto s = x->value<std::string>()) c.center[i] = parse_rational(*s);
      else throw detail::config_error("center", "entries must be integers or rational strings");
    }
  }
  for (const auto& q : c.center)
    if (q != 0) throw detail::config_error("center", "constructions use the symmetry center 0");

  c.order = static_cast<int>(t["order"].value_or<std::int64_t>(1));
  if (c.order < 1) throw detail::config_error("order", "must be >= 1");
  c.dual_order = static_cast<int>(t["dual_order"].value_or<std::int64_t>(c.order));
  if (c.dual_order < 1) throw detail::config_error("dual_order", "must be >= 1");
  c.mode = t["mode"].value_or<std::string>("mutual");
  if (c.mode != "mutual" && c.mode != "symmetrized" && c.mode != "custom")
    throw detail::config_error("mode", "must be mutual, symmetrized or custom");
  c.scalar_mode = t["scalar_mode"].value_or<std::string>("rational");
  if (c.scalar_mode != "rational" && c.scalar_mode != "cyclotomic")
    throw detail::config_error("scalar_mode", "must be rational or cyclotomic");
  c.normalization = t["normalization"].value_or<std::string>("exact-paraunitary");
  if (c.normalization != "exact-paraunitary" && c.normalization != "unitary")
    throw detail::config_error("normalization", "must be exact-paraunitary or unitary");
  if (const auto f = t["custom"]["file"].value<std::string>()) {
    c.custom_file = (*f).empty() || (*f)[0] == '/' ? *f : base_dir + "/" + *f;
  }
  if (c.mode == "custom" && c.custom_file.empty())
    throw detail::config_error("custom.file", "mode = custom needs a file with U and U_dual");
  c.out_dir = t["output"]["dir"].value_or<std::string>(".");
  c.name = t["output"]["name"].value_or<std::string>("bank");
  return c;
}

inline BuildConfig load_config(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return parse_config(read_text_file(path), slash == std::string::npos ? "." : path.substr(0, slash));
}

}  // namespace symframe::io
