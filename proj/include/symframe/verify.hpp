#pragma once

// Exact property checks for masks and filter banks. Every failing check
// carries a witness that pins down where the identity breaks.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symframe/lattice.hpp"
#include "symframe/laurent.hpp"
#include "symframe/mask.hpp"

namespace symframe {

constexpr int kDefaultOrderCap = 8;

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string witness;         // empty on success
  std::optional<long> value;   // computed order, when the check reports one

  explicit operator bool() const noexcept { return pass; }
};

inline CheckResult passed(std::string name, std::optional<long> value = std::nullopt) {
  return {std::move(name), true, "", value};
}
inline CheckResult failed(std::string name, std::string witness, std::optional<long> value = std::nullopt) {
  return {std::move(name), false, std::move(witness), value};
}

struct VerificationReport {
  std::vector<CheckResult> checks;

  void add(CheckResult c) { checks.push_back(std::move(c)); }
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Single-mask checks

/// h_{M beta} = delta_{beta,0} / m.
inline CheckResult check_interpolatory(const LaurentPoly& t, const IntMatrix& m) {
  const CosetIndexer idx(m);
  const IntVec zero(m.dim(), 0);
  const Scalar expected(make_rational(1, std::llabs(m.det())));
  if (t.coeff(zero) != expected)
    return failed("interpolatory", "h at 0 is " + t.coeff(zero).str() + ", expected " + expected.str());
  for (const auto& [k, v] : t.terms())
    if (k != zero && idx.key(k) == idx.key(zero))
      return failed("interpolatory", "nonzero coefficient " + v.str() + " on M Z^d at " + to_string(k));
  return passed("interpolatory");
}

inline bool is_interpolatory(const LaurentPoly& t, const IntMatrix& m) { return check_interpolatory(t, m).pass; }
inline bool is_interpolatory(const Mask& mask) { return is_interpolatory(mask.poly, mask.dilation); }

/// Largest n <= n_max for which the sum rule of order n holds, through the
/// polyphase criterion: for every digit s_k and beta in Delta_n,
///   moment_beta(nu_k) = sum_{alpha <= beta} C(beta, alpha) lambda_alpha (-M^{-1} s_k)^{beta - alpha}
/// with lambda_alpha = dilated_moment(t, M, alpha).
inline CheckResult check_sum_rule(const LaurentPoly& t, const IntMatrix& m, int n_max = kDefaultOrderCap,
                                  int required = 0) {
  const DigitSystem digits = default_digits(m);
  const PolyphaseRow row = polyphase_split(t, digits);
  const RatMatrix minv = inverse(m);
  std::vector<RatVec> targets;
  for (const auto& s : digits.digits()) {
    RatVec x = minv * s;
    for (auto& v : x) v = -v;
    targets.push_back(x);
  }
  std::map<MultiIndex, Scalar> lambda;
  int order = n_max;
  std::string witness;
  for (const auto& beta : multi_indices(m.dim(), n_max)) {
    lambda.emplace(beta, t.dilated_moment(m, beta));
    bool ok = true;
    for (std::size_t k = 0; k < digits.size() && ok; ++k) {
      Scalar rhs(0);
      for (const auto& alpha : lower_indices(beta)) {
        MultiIndex rest(beta.size());
        for (std::size_t j = 0; j < beta.size(); ++j) rest[j] = beta[j] - alpha[j];
        rhs += lambda.at(alpha) * Scalar(Rational(multi_binomial(beta, alpha)) * power(targets[k], rest));
      }
      if (row[k].moment(beta) != rhs) {
        ok = false;
        witness = "beta=" + to_string(beta) + " digit=" + to_string(digits[k]);
      }
    }
    if (!ok) {
      order = static_cast<int>(order_of(beta));
      break;
    }
  }
  if (order < required)
    return failed("sum_rule", witness + " (order " + std::to_string(order) + " < " + std::to_string(required) + ")",
                  order);
  return passed("sum_rule", order);
}

inline int sum_rule_order(const LaurentPoly& t, const IntMatrix& m, int n_max = kDefaultOrderCap) {
  return static_cast<int>(*check_sum_rule(t, m, n_max).value);
}
inline int sum_rule_order(const Mask& mask, int n_max = kDefaultOrderCap) {
  return sum_rule_order(mask.poly, mask.dilation, n_max);
}

/// Largest n <= n_max with moment_beta(t) = c^beta for all beta in Delta_n.
inline CheckResult check_linear_phase_moments(const LaurentPoly& t, const RatVec& c, int n_max = kDefaultOrderCap,
                                              int required = 0) {
  for (const auto& beta : multi_indices(c.size(), n_max)) {
    if (t.moment(beta) != Scalar(power(c, beta))) {
      const int order = static_cast<int>(order_of(beta));
      if (order < required)
        return failed("linear_phase_moments", "beta=" + to_string(beta), order);
      return passed("linear_phase_moments", order);
    }
  }
  return passed("linear_phase_moments", n_max);
}

inline int linear_phase_moment_order(const LaurentPoly& t, const RatVec& c, int n_max = kDefaultOrderCap) {
  return static_cast<int>(*check_linear_phase_moments(t, c, n_max).value);
}

/// Largest n <= n_max with moment_beta(t) = 0 for all beta in Delta_n.
inline CheckResult check_vanishing_moments(const LaurentPoly& t, int n_max = kDefaultOrderCap, int required = 0) {
  const std::size_t d = t.dim() ? t.dim() : 1;
  for (const auto& beta : multi_indices(d, n_max)) {
    if (!t.moment(beta).is_zero()) {
      const int order = static_cast<int>(order_of(beta));
      if (order < required)
        return failed("vanishing_moments", "beta=" + to_string(beta) + " moment=" + t.moment(beta).str(), order);
      return passed("vanishing_moments", order);
    }
  }
  return passed("vanishing_moments", n_max);
}

inline int vanishing_moment_order(const LaurentPoly& t, int n_max = kDefaultOrderCap) {
  return static_cast<int>(*check_vanishing_moments(t, n_max).value);
}

/// h_k = h_{E(k - c) + c} for every E in H.
inline CheckResult check_h_symmetric(const LaurentPoly& t, const SymmetryGroup& h, const RatVec& c) {
  if (auto bad = center_violation(h, c))
    return failed("h_symmetric", "c - Ec not integral for E=" + h[*bad].str());
  for (std::size_t e = 0; e < h.size(); ++e) {
    const IntVec shift = center_shift(h[e], c);
    for (const auto& [k, v] : t.terms()) {
      const IntVec image = h[e] * k + shift;
      if (t.coeff(image) != v)
        return failed("h_symmetric", "E=" + h[e].str() + " k=" + to_string(k) + " maps to " + to_string(image));
    }
  }
  return passed("h_symmetric");
}

inline bool is_h_symmetric(const LaurentPoly& t, const SymmetryGroup& h, const RatVec& c) {
  return check_h_symmetric(t, h, c).pass;
}

struct GeneralizedSymmetry {
  Scalar epsilon;
  IntVec shift;
};

/// Finds (epsilon, r) with t(E^* xi) = epsilon e^{2 pi i (r, xi)} t(xi) and
/// |epsilon| = 1, if they exist.
inline std::optional<GeneralizedSymmetry> check_generalized_symmetry(const LaurentPoly& t, const IntMatrix& e) {
  if (t.is_zero()) return std::nullopt;
  const LaurentPoly s = t.substitute_linear(e);
  // A modulation is a translation of the support, so lexicographic minima align.
  const auto& [kt, vt] = *t.terms().begin();
  const auto& [ks, vs] = *s.terms().begin();
  const IntVec r = ks - kt;
  const Scalar eps = vs / vt;
  if (eps * eps.conj() != Scalar(1)) return std::nullopt;
  if (s != t.modulate(r) * eps) return std::nullopt;
  return GeneralizedSymmetry{eps, r};
}

/// Polyphase form of H-symmetry over the orbit-ordered digits:
///   nu_{p,i}((M^{-1} K M)^* xi) = e^{-2 pi i (r^K_{p,i}, xi)} nu_{p,j(p,i,K)}(xi).
inline CheckResult check_polyphase_symmetry(const PolyphaseRow& row, const OrbitStructure& os) {
  if (row.digits.digits() != os.digit_system().digits())
    return failed("polyphase_symmetry", "row is not over the orbit-ordered digit system");
  const auto& h = os.group();
  for (std::size_t p = 0; p < os.orbit_count(); ++p)
    for (std::size_t i = 0; i < os.orbit(p).size(); ++i)
      for (std::size_t k = 0; k < h.size(); ++k) {
        const IntMatrix& kc = h[os.conjugate(k)];
        const std::size_t j = os.jmap(p, i, k);
        const LaurentPoly lhs = row[os.flat_index(p, i)].substitute_linear(kc);
        const LaurentPoly rhs = row[os.flat_index(p, j)].modulate(-os.rvec(p, i, k));
        if (lhs != rhs)
          return failed("polyphase_symmetry",
                        "K=" + h[k].str() + " p=" + std::to_string(p) + " i=" + std::to_string(i));
      }
  return passed("polyphase_symmetry");
}

/// sum_k nu_k conj(nu~_k) = m for the scaled polyphase rows of m0 and m~0.
inline CheckResult check_duality(const LaurentPoly& m0, const LaurentPoly& m0_dual, const IntMatrix& m) {
  const DigitSystem digits = default_digits(m);
  const auto a = polyphase_split(m0, digits);
  const auto b = polyphase_split(m0_dual, digits);
  LaurentPoly sum(m.dim());
  for (std::size_t k = 0; k < digits.size(); ++k) sum += a[k] * b[k].conjugate_reflect();
  const LaurentPoly expected = LaurentPoly::constant(m.dim(), Scalar(static_cast<long>(digits.size())));
  if (sum != expected) {
    const LaurentPoly diff = sum - expected;
    const auto& [k, v] = *diff.terms().begin();
    return failed("duality", "offset " + to_string(k) + " off by " + v.str());
  }
  return passed("duality");
}

// ---------------------------------------------------------------------------
// Bank checks

/// N^* N~ = m I for polyphase matrices recomputed from the masks.
inline CheckResult check_mep(const FilterBank& bank) {
  const std::size_t count = static_cast<std::size_t>(std::llabs(bank.dilation.det()));
  if (bank.primal.size() != count || bank.dual.size() != count)
    return failed("mep", "bank has " + std::to_string(bank.primal.size()) + " primal and " +
                             std::to_string(bank.dual.size()) + " dual masks, expected " + std::to_string(count));
  const DigitSystem digits = default_digits(bank.dilation);
  PolyMatrix n, nd;
  for (std::size_t nu = 0; nu < count; ++nu) {
    n.push_back(polyphase_split(bank.primal[nu], digits).components);
    nd.push_back(polyphase_split(bank.dual[nu], digits).components);
  }
  const PolyMatrix prod = adjoint(n) * nd;
  const std::size_t d = bank.dim();
  for (std::size_t k = 0; k < count; ++k)
    for (std::size_t l = 0; l < count; ++l) {
      const LaurentPoly expected =
          k == l ? LaurentPoly::constant(d, Scalar(static_cast<long>(count))) : LaurentPoly(d);
      if (prod[k][l] != expected)
        return failed("mep", "entry (" + std::to_string(k) + "," + std::to_string(l) + ") = " + prod[k][l].str());
    }
  return passed("mep");
}

inline bool mep_holds(const FilterBank& bank) { return check_mep(bank).pass; }

/// The bank's stored polyphase matrices agree with its masks.
inline CheckResult check_polyphase_consistency(const FilterBank& bank) {
  for (std::size_t nu = 0; nu < bank.size(); ++nu) {
    if (polyphase_split(bank.primal[nu], bank.digits).components != bank.n[nu])
      return failed("polyphase_consistency", "primal channel " + std::to_string(nu));
    if (polyphase_split(bank.dual[nu], bank.digits).components != bank.n_dual[nu])
      return failed("polyphase_consistency", "dual channel " + std::to_string(nu));
  }
  return passed("polyphase_consistency");
}

/// Minimum vanishing-moment order over the wavelet channels of one side.
inline int min_wavelet_vm(const std::vector<LaurentPoly>& masks, int n_max = kDefaultOrderCap) {
  int best = n_max;
  for (std::size_t nu = 1; nu < masks.size(); ++nu) best = std::min(best, vanishing_moment_order(masks[nu], n_max));
  return best;
}

/// Every wavelet on both sides has the H-symmetry property for every K.
inline CheckResult check_bank_generalized_symmetry(const FilterBank& bank, const SymmetryGroup& h) {
  for (std::size_t nu = 1; nu < bank.size(); ++nu)
    for (std::size_t k = 0; k < h.size(); ++k) {
      if (!check_generalized_symmetry(bank.primal[nu], h[k]))
        return failed("generalized_symmetry", "primal channel " + std::to_string(nu) + " K=" + h[k].str());
      if (!check_generalized_symmetry(bank.dual[nu], h[k]))
        return failed("generalized_symmetry", "dual channel " + std::to_string(nu) + " K=" + h[k].str());
    }
  return passed("generalized_symmetry");
}

/// The default report for a bank: MEP, orders, and the algebraic frame gate
/// (both refinable masks with sum rule >= 1 and all wavelets with VM >= 1).
inline VerificationReport verify_bank(const FilterBank& bank, int n_max = kDefaultOrderCap,
                                      const SymmetryGroup* h = nullptr) {
  VerificationReport rep;
  rep.add(check_mep(bank));
  auto sr = check_sum_rule(bank.primal[0], bank.dilation, n_max, 1);
  sr.name = "sum_rule_primal";
  rep.add(sr);
  auto srd = check_sum_rule(bank.dual[0], bank.dilation, n_max, 1);
  srd.name = "sum_rule_dual";
  rep.add(srd);
  const int vm = min_wavelet_vm(bank.primal, n_max);
  const int vmd = min_wavelet_vm(bank.dual, n_max);
  rep.add(vm >= 1 ? passed("vm_primal_wavelets", vm) : failed("vm_primal_wavelets", "a wavelet has VM 0", vm));
  rep.add(vmd >= 1 ? passed("vm_dual_wavelets", vmd) : failed("vm_dual_wavelets", "a wavelet has VM 0", vmd));
  if (h) {
    auto s = check_h_symmetric(bank.primal[0], *h, RatVec(bank.dim(), Rational(0)));
    s.name = "h_symmetric_primal";
    rep.add(s);
    auto sd = check_h_symmetric(bank.dual[0], *h, RatVec(bank.dim(), Rational(0)));
    sd.name = "h_symmetric_dual";
    rep.add(sd);
  }
  const bool certified = rep.all_pass();
  rep.add(certified ? passed("frame_certified_algebraic")
                    : failed("frame_certified_algebraic", "a prerequisite check failed"));
  return rep;
}

}  // namespace symframe
