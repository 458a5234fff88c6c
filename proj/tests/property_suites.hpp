#pragma once

// Randomized exact property suites. Each suite runs a fixed number of cases
// from a seeded generator and reports the first failure it meets; the unit
// tests and the acceptance runner both call them.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "symframe/mask_builder.hpp"
#include "symframe/verify.hpp"

namespace props {

using namespace symframe;

struct SuiteResult {
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
  void fail(const std::string& why) {
    if (failures++ == 0) first_failure = why;
  }
};

inline Rational small_rational(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 6);
  return make_rational(num(rng), den(rng));
}

inline Scalar random_scalar(std::mt19937& rng, bool cyclotomic) {
  if (!cyclotomic || rng() % 3 != 0) return Scalar(small_rational(rng));
  const unsigned conductors[] = {3, 4, 5, 8, 12};
  const unsigned l = conductors[rng() % 5];
  std::vector<Rational> c(l);
  for (auto& x : c) x = rng() % 2 ? small_rational(rng) : Rational(0);
  return Scalar::from_powers(l, c);
}

inline LaurentPoly random_poly(std::mt19937& rng, std::size_t d, int radius, std::size_t terms, bool cyclotomic) {
  std::uniform_int_distribution<int> coord(-radius, radius);
  LaurentPoly t(d);
  for (std::size_t i = 0; i < terms; ++i) {
    IntVec k(d);
    for (auto& x : k) x = coord(rng);
    t.add(k, random_scalar(rng, cyclotomic));
  }
  return t;
}

struct Setting {
  SymmetryGroup group;
  IntMatrix dilation;
};

/// Compatible (H, M) pairs used by the suites.
inline std::vector<Setting> settings() {
  const std::vector<SymmetryGroup> hs{groups::trivial(1), groups::id(1), groups::trivial(2), groups::id(2),
                                      groups::axis(2), groups::full(2), groups::hexagonal(),
                                      SymmetryGroup::generate({IntMatrix{{0, -1}, {1, 0}}}), groups::id(3),
                                      groups::axis(3)};
  const std::vector<IntMatrix> ms{IntMatrix{{2}},
                                  IntMatrix{{3}},
                                  IntMatrix{{-2}},
                                  IntMatrix{{5}},
                                  IntMatrix::scalar(2, 2),
                                  IntMatrix{{2, -1}, {1, 1}},
                                  IntMatrix{{1, 1}, {1, -1}},
                                  IntMatrix{{1, -1}, {1, 1}},
                                  IntMatrix::diagonal({3, 2}),
                                  IntMatrix{{0, 2}, {1, 0}},
                                  IntMatrix::scalar(3, 2),
                                  IntMatrix{{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}};
  std::vector<Setting> out;
  for (const auto& h : hs)
    for (const auto& m : ms)
      if (h.dim() == m.dim() && is_dilation(m) && check_dilation_compatibility(h, m)) out.push_back({h, m});
  return out;
}

inline bool integral(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.get_den() == 1; });
}

// ---------------------------------------------------------------------------

/// merge(split(t)) == t over default, orbit-ordered and randomly shifted digit
/// systems, with one component coefficient checked against m h_{M beta + s_k}.
inline SuiteResult split_merge_roundtrip(int cases, std::uint32_t seed) {
  SuiteResult r;
  std::mt19937 rng(seed);
  const auto all = settings();
  for (int c = 0; c < cases; ++c, ++r.cases) {
    const auto& st = all[rng() % all.size()];
    const IntMatrix& m = st.dilation;
    const std::size_t d = m.dim();
    DigitSystem digits = default_digits(m);
    if (c % 3 == 1) digits = orbit_decomposition(st.group, m).digit_system();
    if (c % 3 == 2) {
      std::vector<IntVec> ds = digits.digits();
      std::uniform_int_distribution<int> g(-2, 2);
      for (std::size_t k = 1; k < ds.size(); ++k) {
        IntVec gamma(d);
        for (auto& x : gamma) x = g(rng);
        ds[k] = ds[k] + m * gamma;
      }
      digits = DigitSystem(m, ds);
    }
    const LaurentPoly t = random_poly(rng, d, 4, 2 + rng() % 12, true);
    const PolyphaseRow row = polyphase_split(t, digits);
    if (polyphase_merge(row) != t) {
      r.fail("round trip failed for M = " + m.str() + ", t = " + t.str());
      continue;
    }
    const std::size_t k = rng() % digits.size();
    IntVec beta(d);
    for (auto& x : beta) x = static_cast<std::int64_t>(rng() % 5) - 2;
    const Scalar want = Scalar(static_cast<long>(digits.size())) * t.coeff(m * beta + digits[k]);
    if (row[k].coeff(beta) != want) r.fail("component " + std::to_string(k) + " at " + to_string(beta) + " is wrong");
  }
  return r;
}

/// moment_beta(e^{2 pi i (a, .)} t) = sum_{alpha <= beta} C(beta, alpha) a^{beta - alpha} moment_alpha(t).
inline SuiteResult modulation_moment_identity(int cases, std::uint32_t seed) {
  SuiteResult r;
  std::mt19937 rng(seed);
  auto choose = [](std::int64_t n, std::int64_t k) {
    std::int64_t v = 1;
    for (std::int64_t i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
  };
  for (int c = 0; c < cases; ++c, ++r.cases) {
    const std::size_t d = 1 + rng() % 3;
    const LaurentPoly t = random_poly(rng, d, 3, 1 + rng() % 8, true);
    IntVec a(d);
    for (auto& x : a) x = static_cast<std::int64_t>(rng() % 9) - 4;
    const LaurentPoly shifted = t.modulate(a);
    for (const auto& beta : multi_indices(d, 5)) {
      Scalar rhs(0);
      for (const auto& alpha : multi_indices(d, order_of(beta) + 1)) {
        bool below = true;
        for (std::size_t j = 0; j < d; ++j) below = below && alpha[j] <= beta[j];
        if (!below) continue;
        Rational w(1);
        for (std::size_t j = 0; j < d; ++j) {
          w *= Rational(choose(beta[j], alpha[j]));
          for (std::int64_t e = 0; e < beta[j] - alpha[j]; ++e) w *= Rational(a[j]);
        }
        rhs += Scalar(w) * t.moment(alpha);
      }
      if (shifted.moment(beta) != rhs) {
        r.fail("identity fails at beta = " + to_string(beta) + " for a = " + to_string(a));
        break;
      }
    }
  }
  return r;
}

/// Group axioms of the closure, the induced action on cosets, and orbit-stabilizer counting.
inline SuiteResult group_action_axioms(int cases, std::uint32_t seed) {
  SuiteResult r;
  std::mt19937 rng(seed);
  const auto all = settings();
  for (int c = 0; c < cases; ++c, ++r.cases) {
    const auto& st = all[rng() % all.size()];
    const auto& h = st.group;
    const std::size_t n = h.size();
    const std::size_t a = rng() % n, b = rng() % n, e = rng() % n;
    const IntMatrix id = IntMatrix::identity(h.dim());
    if (h[0] != id) r.fail("identity is not first in " + h.name());
    if (h[h.product(a, b)] != h[a] * h[b]) r.fail("product table disagrees with matrices in " + h.name());
    if (h[a] * h[h.inverse(a)] != id) r.fail("inverse table is wrong in " + h.name());
    if (h.product(h.product(a, b), e) != h.product(a, h.product(b, e))) r.fail("associativity fails in " + h.name());
    if (std::abs(h[a].det()) != 1) r.fail("non-unimodular element in " + h.name());

    const OrbitStructure os = orbit_decomposition(h, st.dilation);
    const DigitSystem& digits = os.digit_system();
    const RatVec zero(h.dim(), Rational(0));
    // Action axioms on every digit class.
    for (std::size_t k = 0; k < digits.size(); ++k) {
      if (act_on_coset(id, digits[k], digits, zero) != k) r.fail("identity moves a coset");
      const std::size_t fk = act_on_coset(h[b], digits[k], digits, zero);
      if (act_on_coset(h[a] * h[b], digits[k], digits, zero) != act_on_coset(h[a], digits[fk], digits, zero))
        r.fail("action is not compatible with the product");
    }
    // Orbits partition the classes; |orbit| |stabilizer| = |H|; brute-force orbits agree.
    std::set<std::size_t> seen;
    for (std::size_t p = 0; p < os.orbit_count(); ++p) {
      const auto& orb = os.orbit(p);
      if (orb.size() * orb.stabilizer.size() != n)
        r.fail("orbit-stabilizer count fails for orbit " + std::to_string(p) + " of " + h.name() + ", M = " +
               st.dilation.str());
      std::set<std::size_t> brute;
      for (std::size_t g = 0; g < n; ++g) brute.insert(digits.coset_of(h[g] * orb.representative));
      std::set<std::size_t> listed;
      for (std::size_t i = 0; i < orb.size(); ++i) {
        const std::size_t k = os.flat_index(p, i);
        listed.insert(k);
        if (!seen.insert(k).second) r.fail("a coset lies in two orbits");
        if (digits.coset_of(h[orb.transversal[i]] * orb.representative) != k)
          r.fail("transversal element does not reach its digit");
      }
      if (brute != listed) r.fail("orbit " + std::to_string(p) + " differs from the brute-force orbit");
      for (auto f : orb.stabilizer)
        if (!integral(inverse(st.dilation) * (h[f] * orb.representative - orb.representative)))
          r.fail("stabilizer element moves the representative's coset");
    }
    if (seen.size() != digits.size()) r.fail("orbits do not cover all cosets");
  }
  return r;
}

/// check_h_symmetric(t, H, 0) agrees with check_polyphase_symmetry on random
/// symmetric (group-averaged) and asymmetric inputs.
inline SuiteResult symmetry_equivalence(int cases, std::uint32_t seed, int* symmetric_seen = nullptr) {
  SuiteResult r;
  std::mt19937 rng(seed);
  const auto all = settings();
  int sym = 0;
  for (int c = 0; c < cases; ++c, ++r.cases) {
    const auto& st = all[rng() % all.size()];
    const auto& h = st.group;
    const OrbitStructure os = orbit_decomposition(h, st.dilation);
    LaurentPoly t = random_poly(rng, h.dim(), 3, 1 + rng() % 6, false);
    const int kind = c % 3;
    if (kind != 0) {
      LaurentPoly avg(h.dim());
      for (std::size_t e = 0; e < h.size(); ++e) avg += t.substitute_linear(h[e]);
      t = avg;
      if (kind == 2 && !t.is_zero()) {  // break the symmetry at one offset
        IntVec k(h.dim());
        for (auto& x : k) x = static_cast<std::int64_t>(rng() % 5) - 2;
        t.add(k, Scalar(make_rational(1, 7)));
      }
    }
    const bool a = check_h_symmetric(t, h, RatVec(h.dim(), Rational(0))).pass;
    const bool b = check_polyphase_symmetry(polyphase_split(t, os.digit_system()), os).pass;
    if (a) ++sym;
    if (a != b)
      r.fail("coefficient and polyphase symmetry disagree for " + h.name() + ", M = " + st.dilation.str() + ", t = " +
             t.str());
  }
  if (symmetric_seen) *symmetric_seen = sym;
  return r;
}

/// Sum-rule order by direct evaluation of the derivatives of t(M^{*-1} xi) at
/// the nonzero digits of M^*, with the exponentials as exact roots of unity.
inline int brute_force_sum_rule_order(const LaurentPoly& t, const IntMatrix& m, int n_max) {
  const std::size_t d = m.dim();
  const RatMatrix minv = inverse(m);
  const DigitSystem dual_digits = default_digits(m.transpose());
  std::vector<std::pair<RatVec, Scalar>> terms;
  for (const auto& [k, v] : t.terms()) terms.emplace_back(minv * k, v);
  for (int n = 0; n < n_max; ++n) {
    // All beta with |beta| = n must vanish for order n + 1.
    for (const auto& beta : multi_indices(d, n + 1)) {
      if (order_of(beta) != n) continue;
      for (std::size_t q = 1; q < dual_digits.size(); ++q) {
        const IntVec& s = dual_digits[q];
        Scalar acc(0);
        for (const auto& [x, v] : terms) {
          Rational phase(0), mono(1);
          for (std::size_t j = 0; j < d; ++j) {
            phase += x[j] * Rational(s[j]);
            for (std::int64_t e = 0; e < beta[j]; ++e) mono *= x[j];
          }
          const BigInt den = phase.get_den();
          BigInt num = phase.get_num() % den;
          if (num < 0) num += den;
          acc += v * Scalar(mono) * Scalar::root_of_unity(static_cast<unsigned>(den.get_ui()), num.get_si());
        }
        if (!acc.is_zero()) return n;
      }
    }
  }
  return n_max;
}

/// The polyphase sum-rule criterion agrees with the brute-force evaluation
/// for m <= 6 and n <= 3, on constructed masks and perturbations of them.
inline SuiteResult sum_rule_criterion(int cases, std::uint32_t seed, std::map<int, int>* histogram = nullptr) {
  SuiteResult r;
  std::mt19937 rng(seed);
  std::vector<Mask> pool;
  for (const auto& st : settings()) {
    if (std::llabs(st.dilation.det()) > 6 || st.group.size() > 12) continue;
    for (int n = 1; n <= 3; ++n) pool.push_back(build_interpolatory_mask(st.group, st.dilation, n));
  }
  for (int c = 0; c < cases; ++c, ++r.cases) {
    const Mask& base = pool[rng() % pool.size()];
    LaurentPoly t = base.poly;
    switch (c % 4) {
      case 1:  // a coefficient moved: usually drops to order 0 or 1
        t.add(IntVec(base.dim(), 0), Scalar(make_rational(1, 5)));
        t.add(IntVec(base.dim(), 1), Scalar(make_rational(-1, 5)));
        break;
      case 2:  // the dual keeps the order
        t = build_dual_mask(base).poly;
        break;
      case 3:  // random mask
        t = random_poly(rng, base.dim(), 2, 1 + rng() % 8, false);
        break;
      default:
        break;
    }
    const int fast = sum_rule_order(t, base.dilation, 3);
    const int slow = brute_force_sum_rule_order(t, base.dilation, 3);
    if (histogram) ++(*histogram)[fast];
    if (fast != slow)
      r.fail("orders differ (" + std::to_string(fast) + " vs " + std::to_string(slow) + ") for M = " +
             base.dilation.str() + ", t = " + t.str());
  }
  return r;
}

}  // namespace props
