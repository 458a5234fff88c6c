#pragma once

// The command layer behind tools/symframe: build, verify, transform, render
// and export. Each command writes its files, prints to the given stream and
// returns the process exit code.

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "symframe/frame_builder.hpp"
#include "symframe/io/serialize.hpp"
#include "symframe/mask_builder.hpp"
#include "symframe/transform.hpp"
#include "symframe/verify.hpp"

namespace symframe::cli {

enum ExitCode : int { exit_ok = 0, exit_verification = 1, exit_usage = 2 };

enum class Format { json, table, csv };

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "table") return Format::table;
  if (s == "csv") return Format::csv;
  throw InvalidArgument("unknown format '" + s + "' (json, table or csv)");
}

/// Maps an exception escaping a command to an exit code and a message.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    return exit_verification;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

namespace detail {

inline std::string dump(const io::json& j) { return j.dump(2) + "\n"; }

inline IntMatrix parse_matrix_arg(const std::string& text, const std::string& flag) {
  try {
    return io::matrix_from_json(io::json::parse(text), flag);
  } catch (const io::json::exception& e) {
    throw ParseError(flag + ": expected an integer matrix like [[2,0],[0,2]] (" + e.what() + ")");
  }
}

inline void print_report(std::ostream& out, const VerificationReport& rep, Format f) {
  if (f == Format::json) {
    out << dump(io::report_to_json(rep));
  } else {
    out << io::format_report_table(rep) << (rep.all_pass() ? "PASS\n" : "FAIL\n");
  }
}

inline bool all_rational(const LaurentPoly& t) {
  for (const auto& [k, v] : t.terms())
    if (!v.is_rational()) return false;
  return true;
}

inline bool all_rational(const FilterBank& b) {
  for (const auto* side : {&b.primal, &b.dual})
    for (const auto& t : *side)
      if (!all_rational(t)) return false;
  return true;
}

inline PolyMatrix custom_matrix(const io::json& j, std::size_t d, const std::string& field) {
  if (!j.is_array()) throw ParseError("custom file: '" + field + "' must be a matrix");
  PolyMatrix a;
  for (const auto& r : j) {
    if (!r.is_array()) throw ParseError("custom file: '" + field + "' rows must be arrays");
    std::vector<LaurentPoly> row;
    for (const auto& x : r) row.push_back(x.is_object() ? io::poly_from_json(x) : LaurentPoly::constant(d, io::scalar_from_json(x)));
    a.push_back(row);
  }
  return a;
}

inline std::string channel_tables(const FilterBank& b) {
  std::string out;
  for (std::size_t nu = 0; nu < b.size(); ++nu) {
    out += "# m" + std::to_string(nu) + "\n" + io::format_dense_table(b.primal[nu]) + "\n";
    out += "# m" + std::to_string(nu) + "_dual\n" + io::format_dense_table(b.dual[nu]) + "\n";
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// build

struct BuildResult {
  Mask m0, m0_dual;
  FilterBank bank;
  VerificationReport report;
};

/// Runs the construction a configuration asks for and collects the
/// verification report. Construction errors propagate.
inline BuildResult build_bank(const io::BuildConfig& c, int n_max = kDefaultOrderCap) {
  const SymmetryGroup h = c.group();
  if (c.dual_order > c.order)
    throw ParseError("config field 'dual_order': must not exceed order (" + std::to_string(c.order) + ")");
  n_max = std::max({n_max, c.order, c.dual_order});

  BuildResult r;
  r.m0 = build_interpolatory_mask(h, c.dilation, c.order);
  r.m0_dual = c.dual_order == c.order ? build_dual_mask(r.m0) : build_dual_mask_low_order(r.m0, h, c.dual_order);
  if (c.mode == "mutual") {
    r.bank = mutual_extension(r.m0, r.m0_dual);
  } else if (c.mode == "symmetrized") {
    r.bank = symmetrized_extension(r.m0, r.m0_dual, parse_normalization(c.normalization));
  } else {
    const io::json j = io::parse_json(io::read_text_file(c.custom_file));
    if (!j.contains("U") || !j.contains("U_dual")) throw ParseError("custom file needs 'U' and 'U_dual'");
    r.bank = custom_extension(r.m0, r.m0_dual, detail::custom_matrix(j.at("U"), c.dimension, "U"),
                              detail::custom_matrix(j.at("U_dual"), c.dimension, "U_dual"));
  }
  r.bank.group = h.name();

  if (c.scalar_mode == "rational" && !detail::all_rational(r.bank))
    throw ParseError(
        "config field 'scalar_mode': the bank has coefficients outside Q; set scalar_mode = \"cyclotomic\"");

  r.report.add(check_interpolatory(r.m0.poly, r.m0.dilation));
  auto sr = check_sum_rule(r.m0.poly, c.dilation, n_max, c.order);
  sr.name = "sum_rule_order_primal";
  r.report.add(sr);
  auto srd = check_sum_rule(r.m0_dual.poly, c.dilation, n_max, c.dual_order);
  srd.name = "sum_rule_order_dual";
  r.report.add(srd);
  for (auto& chk : verify_bank(r.bank, n_max, &h).checks) r.report.add(chk);
  if (c.mode == "symmetrized") r.report.add(check_bank_generalized_symmetry(r.bank, h));
  return r;
}

struct BuildOptions {
  std::string config;
  std::optional<std::string> out_dir;
  int n_max = kDefaultOrderCap;
  Format format = Format::table;
};

inline int cmd_build(const BuildOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const io::BuildConfig c = io::load_config(opt.config);
    const BuildResult r = build_bank(c, opt.n_max);
    const std::filesystem::path dir = opt.out_dir.value_or(c.out_dir);
    std::filesystem::create_directories(dir);
    const auto file = [&](const std::string& suffix) { return (dir / (c.name + suffix)).string(); };
    io::write_text_file(file(".m0.json"), detail::dump(io::mask_to_json(r.m0)));
    io::write_text_file(file(".m0_dual.json"), detail::dump(io::mask_to_json(r.m0_dual)));
    io::write_text_file(file(".bank.json"), detail::dump(io::bank_to_json(r.bank)));
    io::write_text_file(file(".report.json"), detail::dump(io::report_to_json(r.report)));
    if (c.dimension == 2) io::write_text_file(file(".tables.txt"), detail::channel_tables(r.bank));
    detail::print_report(out, r.report, opt.format);
    return r.report.all_pass() ? exit_ok : exit_verification;
  });
}

// ---------------------------------------------------------------------------
// verify

/// A requested check: a name and an optional required order ("sum_rule:3").
struct CheckRequest {
  std::string name;
  int required = 1;
};

inline std::vector<CheckRequest> parse_checks(const std::string& list) {
  std::vector<CheckRequest> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    CheckRequest r;
    const auto colon = item.find(':');
    r.name = item.substr(0, colon);
    if (colon != std::string::npos) {
      try {
        r.required = std::stoi(item.substr(colon + 1));
      } catch (const std::exception&) {
        throw ParseError("--checks: bad order in '" + item + "'");
      }
    }
    out.push_back(r);
  }
  return out;
}

struct VerifyOptions {
  std::vector<std::string> files;
  std::optional<std::string> dual_of;
  std::optional<std::string> dilation;  // for dense tables
  std::optional<std::string> group;
  std::string checks;
  int n_max = kDefaultOrderCap;
  Format format = Format::table;
};

inline VerificationReport verify_mask(const Mask& mask, const std::vector<CheckRequest>& requested,
                                      const std::optional<Mask>& primal, const SymmetryGroup* h, int n_max) {
  std::vector<CheckRequest> checks = requested;
  if (checks.empty()) {
    const bool wavelet = mask.role == MaskRole::primal_wavelet || mask.role == MaskRole::dual_wavelet;
    if (wavelet) {
      checks.push_back({"vm"});
    } else {
      checks.push_back({"sum_rule"});
      if (!primal && mask.role == MaskRole::primal_refinable) checks.push_back({"interpolatory"});
    }
    if (primal) checks.push_back({"duality"});
    if (h) checks.push_back({"h_symmetric"});
  }
  VerificationReport rep;
  const RatVec zero(mask.dim(), Rational(0));
  for (const auto& c : checks) {
    const int cap = std::max(n_max, c.required);
    if (c.name == "interpolatory") {
      rep.add(check_interpolatory(mask.poly, mask.dilation));
    } else if (c.name == "sum_rule") {
      rep.add(check_sum_rule(mask.poly, mask.dilation, cap, c.required));
    } else if (c.name == "vm") {
      rep.add(check_vanishing_moments(mask.poly, cap, c.required));
    } else if (c.name == "linear_phase") {
      rep.add(check_linear_phase_moments(mask.poly, mask.center.empty() ? zero : mask.center, cap, c.required));
    } else if (c.name == "h_symmetric" || c.name == "polyphase_symmetry") {
      if (!h) throw InvalidArgument("check '" + c.name + "' needs --group");
      if (c.name == "h_symmetric") {
        rep.add(check_h_symmetric(mask.poly, *h, zero));
      } else {
        const OrbitStructure os = orbit_decomposition(*h, mask.dilation);
        rep.add(check_polyphase_symmetry(polyphase_split(mask.poly, os.digit_system()), os));
      }
    } else if (c.name == "duality") {
      if (!primal) throw InvalidArgument("check 'duality' needs --dual-of");
      if (primal->dilation != mask.dilation) throw InvalidArgument("--dual-of mask uses another dilation");
      rep.add(check_duality(primal->poly, mask.poly, mask.dilation));
    } else {
      throw InvalidArgument("unknown mask check '" + c.name + "'");
    }
  }
  return rep;
}

inline VerificationReport verify_bank_file(const FilterBank& bank, const std::vector<CheckRequest>& checks,
                                           const SymmetryGroup* h, int n_max) {
  if (checks.empty()) {
    auto rep = verify_bank(bank, n_max, h);
    // Mutual banks only map channels onto each other under H, so the per-channel
    // symmetry is checked for symmetrized banks alone.
    if (h && bank.mode == "symmetrized") rep.add(check_bank_generalized_symmetry(bank, *h));
    return rep;
  }
  VerificationReport rep;
  for (const auto& c : checks) {
    const int cap = std::max(n_max, c.required);
    if (c.name == "mep") {
      rep.add(check_mep(bank));
    } else if (c.name == "polyphase_consistency") {
      rep.add(check_polyphase_consistency(bank));
    } else if (c.name == "interpolatory") {
      rep.add(check_interpolatory(bank.primal[0], bank.dilation));
    } else if (c.name == "sum_rule") {
      auto a = check_sum_rule(bank.primal[0], bank.dilation, cap, c.required);
      a.name = "sum_rule_primal";
      rep.add(a);
      auto b = check_sum_rule(bank.dual[0], bank.dilation, cap, c.required);
      b.name = "sum_rule_dual";
      rep.add(b);
    } else if (c.name == "vm") {
      for (const auto* side : {&bank.primal, &bank.dual}) {
        const int vm = min_wavelet_vm(*side, cap);
        const std::string name = side == &bank.primal ? "vm_primal_wavelets" : "vm_dual_wavelets";
        rep.add(vm >= c.required ? passed(name, vm)
                                 : failed(name, "minimum order " + std::to_string(vm) + " < " +
                                                    std::to_string(c.required), vm));
      }
    } else if (c.name == "h_symmetric" || c.name == "generalized_symmetry") {
      if (!h) throw InvalidArgument("check '" + c.name + "' needs --group");
      if (c.name == "generalized_symmetry") {
        rep.add(check_bank_generalized_symmetry(bank, *h));
      } else {
        const RatVec zero(bank.dim(), Rational(0));
        auto a = check_h_symmetric(bank.primal[0], *h, zero);
        a.name = "h_symmetric_primal";
        rep.add(a);
        auto b = check_h_symmetric(bank.dual[0], *h, zero);
        b.name = "h_symmetric_dual";
        rep.add(b);
      }
    } else {
      throw InvalidArgument("unknown bank check '" + c.name + "'");
    }
  }
  return rep;
}

/// A filter file is a bank when its JSON has "primal", a mask otherwise.
inline bool is_bank_file(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return false;
  return io::parse_json(text).contains("primal");
}

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.files.empty()) throw InvalidArgument("verify needs at least one filter file");
    const auto checks = parse_checks(opt.checks);
    std::optional<IntMatrix> m;
    if (opt.dilation) m = detail::parse_matrix_arg(*opt.dilation, "--dilation");
    std::optional<Mask> primal;
    if (opt.dual_of) primal = io::load_mask(*opt.dual_of, m);

    io::json all = io::json::array();
    bool pass = true;
    for (const auto& path : opt.files) {
      const std::string text = io::read_text_file(path);
      VerificationReport rep;
      std::optional<SymmetryGroup> h;
      if (is_bank_file(text)) {
        const FilterBank bank = io::bank_from_json(io::parse_json(text));
        if (opt.group) h = groups::by_name(*opt.group, bank.dim());
        rep = verify_bank_file(bank, checks, h ? &*h : nullptr, opt.n_max);
      } else {
        std::optional<IntMatrix> dil = m;
        if (!dil && primal) dil = primal->dilation;
        Mask mask = io::load_mask(path, dil);
        if (primal) mask.role = MaskRole::dual_refinable;
        if (opt.group) h = groups::by_name(*opt.group, mask.dim());
        rep = verify_mask(mask, checks, primal, h ? &*h : nullptr, opt.n_max);
      }
      pass = pass && rep.all_pass();
      if (opt.format == Format::json) {
        all.push_back({{"file", path}, {"report", io::report_to_json(rep)}});
      } else {
        if (opt.files.size() > 1) out << "== " << path << '\n';
        detail::print_report(out, rep, opt.format);
      }
    }
    if (opt.format == Format::json) out << detail::dump({{"pass", pass}, {"files", all}});
    return pass ? exit_ok : exit_verification;
  });
}

// ---------------------------------------------------------------------------
// transform

struct TransformOptions {
  std::string bank;
  std::optional<std::string> signal;
  unsigned random_levels = 0;  // used when no signal file is given
  std::uint64_t seed = 1;
  unsigned levels = 1;
  std::optional<std::string> out_dir;
  double tolerance = 1e-10;
};

inline io::json pyramid_to_json(const SubbandPyramid& p) {
  auto band = [](const std::vector<Complex>& v) {
    io::json a = io::json::array();
    for (const auto& z : v) a.push_back({z.real(), z.imag()});
    return a;
  };
  io::json details = io::json::array();
  for (const auto& l : p.details) {
    io::json bands = io::json::array();
    for (const auto& b : l.bands) bands.push_back(band(b));
    details.push_back(bands);
  }
  return {{"dilation", io::matrix_to_json(p.dilation)},
          {"levels", p.levels},
          {"details", details},
          {"coarse", band(p.coarse)}};
}

inline int cmd_transform(const TransformOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const FilterBank bank = io::bank_from_json(io::parse_json(io::read_text_file(opt.bank)));
    PeriodicSignal s;
    if (opt.signal) {
      const io::SignalFile f = io::load_signal(*opt.signal);
      s = {f.dilation, f.levels, f.values};
    } else {
      if (opt.random_levels == 0) throw InvalidArgument("transform needs --signal or --random J");
      s.dilation = bank.dilation;
      s.levels = opt.random_levels;
      const LatticeCodec codec(bank.dilation, s.levels);
      std::mt19937_64 rng(opt.seed);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      s.values.resize(codec.size());
      for (auto& v : s.values) v = u(rng);
    }
    if (s.dilation != bank.dilation)
      throw InvalidArgument("signal dilation " + s.dilation.str() + " differs from the bank's " +
                            bank.dilation.str());
    const TransformPlan plan(bank, s.levels);
    const SubbandPyramid p = analyze(s, plan, opt.levels);
    const PeriodicSignal back = synthesize(p, plan);
    double err_max = 0;
    for (std::size_t i = 0; i < s.values.size(); ++i) err_max = std::max(err_max, std::abs(back.values[i] - s.values[i]));

    if (opt.out_dir) {
      const std::filesystem::path dir = *opt.out_dir;
      std::filesystem::create_directories(dir);
      io::write_text_file((dir / "pyramid.json").string(), detail::dump(pyramid_to_json(p)));
      io::save_signal((dir / "reconstruction.swsg").string(), {back.dilation, back.levels, back.values});
      if (!opt.signal) io::save_signal((dir / "input.swsg").string(), {s.dilation, s.levels, s.values});
    }
    std::ostringstream line;
    line.precision(3);
    line << std::scientific << "max_pr_error = " << err_max;
    out << "samples = " << s.values.size() << "\nsubband_coefficients = " << p.sample_count() << '\n'
        << line.str() << '\n';
    return err_max <= opt.tolerance ? exit_ok : exit_verification;
  });
}

// ---------------------------------------------------------------------------
// render

struct RenderOptions {
  std::string mask;
  std::optional<std::string> dilation;
  unsigned levels = 6;
  std::optional<std::string> output;  // CSV path; stdout when absent
};

/// One row per nonzero sample: lattice index alpha, position M^{-J} alpha, value.
inline std::string render_csv(const Subdivision<double>& s) {
  std::ostringstream csv;
  csv.precision(17);
  const std::size_t d = s.dilation.dim();
  for (std::size_t i = 0; i < d; ++i) csv << 'k' << i + 1 << ',';
  for (std::size_t i = 0; i < d; ++i) csv << 'x' << i + 1 << ',';
  csv << "value\n";
  for (const auto& [alpha, v] : s.samples) {
    for (auto a : alpha) csv << a << ',';
    for (const auto& x : s.position(alpha)) csv << x.get_d() << ',';
    csv << v << '\n';
  }
  return csv.str();
}

inline int cmd_render(const RenderOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::optional<IntMatrix> m;
    if (opt.dilation) m = detail::parse_matrix_arg(*opt.dilation, "--dilation");
    const Mask mask = io::load_mask(opt.mask, m);
    const auto s = render_refinable(mask, opt.levels);
    const std::string csv = render_csv(s);
    if (opt.output) {
      io::write_text_file(*opt.output, csv);
      std::ostringstream line;
      line.precision(3);
      line << std::scientific << "partition_of_unity_error = " << partition_of_unity_error(s);
      out << "samples = " << s.samples.size() << '\n' << line.str() << '\n';
    } else {
      out << csv;
    }
    return exit_ok;
  });
}

// ---------------------------------------------------------------------------
// export

struct ExportOptions {
  std::string file;
  std::optional<std::string> dilation;
  Format format = Format::table;
};

inline std::string coefficient_csv(const std::vector<std::pair<std::string, LaurentPoly>>& filters) {
  std::string out = "filter";
  const std::size_t d = filters.empty() ? 0 : filters[0].second.dim();
  for (std::size_t i = 0; i < d; ++i) out += ",k" + std::to_string(i + 1);
  out += ",value\n";
  for (const auto& [name, t] : filters)
    for (const auto& [k, v] : t.terms()) {
      out += name;
      for (auto x : k) out += ',' + std::to_string(x);
      out += ',' + v.str() + '\n';
    }
  return out;
}

inline int cmd_export(const ExportOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string text = io::read_text_file(opt.file);
    std::vector<std::pair<std::string, LaurentPoly>> filters;
    if (is_bank_file(text)) {
      const FilterBank bank = io::bank_from_json(io::parse_json(text));
      if (opt.format == Format::json) {
        out << detail::dump(io::bank_to_json(bank));
        return exit_ok;
      }
      for (std::size_t nu = 0; nu < bank.size(); ++nu) filters.emplace_back("m" + std::to_string(nu), bank.primal[nu]);
      for (std::size_t nu = 0; nu < bank.size(); ++nu)
        filters.emplace_back("m" + std::to_string(nu) + "_dual", bank.dual[nu]);
    } else {
      std::optional<IntMatrix> m;
      if (opt.dilation) m = detail::parse_matrix_arg(*opt.dilation, "--dilation");
      const Mask mask = io::load_mask(opt.file, m);
      if (opt.format == Format::json) {
        out << detail::dump(io::mask_to_json(mask));
        return exit_ok;
      }
      filters.emplace_back(std::filesystem::path(opt.file).stem().string(), mask.poly);
    }
    if (opt.format == Format::csv) {
      out << coefficient_csv(filters);
    } else {
      for (const auto& [name, t] : filters) out << "# " << name << '\n' << io::format_dense_table(t) << '\n';
    }
    return exit_ok;
  });
}

}  // namespace symframe::cli
