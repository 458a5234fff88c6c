#pragma once

// H-symmetric interpolatory refinable masks with a prescribed sum-rule order,
// and their duals. Everything happens on the scaled polyphase components of
// the orbit-ordered digit row; the merged masks are verified exactly before
// they are returned.

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "symframe/lattice.hpp"
#include "symframe/laurent.hpp"
#include "symframe/mask.hpp"
#include "symframe/verify.hpp"

namespace symframe {

struct SeedPolynomial {
  std::size_t orbit = 0;
  int order = 0;
  std::vector<IntVec> support;
  LaurentPoly poly;
};

namespace detail {

// Nearest integer, halves rounded toward zero.
inline std::int64_t round_half_to_zero(const Rational& q) {
  const Rational a = abs(q);
  BigInt fl = a.get_num() / a.get_den();
  const Rational frac = a - Rational(fl);
  if (frac > Rational(1, 2)) fl += 1;
  const std::int64_t v = fl.get_si();
  return q < 0 ? -v : v;
}

}  // namespace detail

/// A polynomial g with sum_k g_k k^beta = (-M^{-1} s)^beta for all beta in
/// Delta_n, supported on a translated and per-axis reflected copy of Delta_n
/// placed near the target point -M^{-1} s.
inline SeedPolynomial build_seed(std::size_t p, const IntMatrix& m, const IntVec& s, int n) {
  if (n < 1) throw InvalidArgument("build_seed: order must be >= 1");
  const std::size_t d = m.dim();
  RatVec target = inverse(m) * s;
  for (auto& v : target) v = -v;
  IntVec shift(d);
  std::vector<int> sign(d, 1);
  for (std::size_t j = 0; j < d; ++j) {
    shift[j] = detail::round_half_to_zero(target[j]);
    if (target[j] < Rational(shift[j])) sign[j] = -1;
  }
  const auto betas = multi_indices(d, n);
  SeedPolynomial seed;
  seed.orbit = p;
  seed.order = n;
  for (const auto& beta : betas) {
    IntVec k(d);
    for (std::size_t j = 0; j < d; ++j) k[j] = shift[j] + sign[j] * beta[j];
    seed.support.push_back(k);
  }
  std::vector<std::vector<Scalar>> a(betas.size(), std::vector<Scalar>(betas.size()));
  std::vector<Scalar> b(betas.size());
  for (std::size_t r = 0; r < betas.size(); ++r) {
    for (std::size_t c = 0; c < seed.support.size(); ++c) a[r][c] = Scalar(power(seed.support[c], betas[r]));
    b[r] = Scalar(power(target, betas[r]));
  }
  const auto sol = solve_linear(std::move(a), std::move(b));
  if (!sol) throw VerificationFailure("build_seed: interpolation system is singular");
  seed.poly = LaurentPoly(d);
  for (std::size_t c = 0; c < seed.support.size(); ++c) seed.poly.set(seed.support[c], (*sol)[c]);
  return seed;
}

/// Averages the seed over the stabilizer of orbit p:
///   (1/#H_p) sum_F g((M^{-1} F M)^* xi) e^{2 pi i (r^F_{p,0}, xi)}.
inline LaurentPoly symmetrize_seed(const SeedPolynomial& seed, std::size_t p, const OrbitStructure& os) {
  const auto& orb = os.orbit(p);
  const auto& h = os.group();
  LaurentPoly out(os.dim());
  for (std::size_t f = 0; f < orb.stabilizer.size(); ++f) {
    const std::size_t e = orb.stabilizer[f];
    out += seed.poly.substitute_linear(h[os.conjugate(e)]).modulate(orb.stabilizer_shift[f]);
  }
  out *= Scalar(make_rational(1, static_cast<long>(orb.stabilizer.size())));
  return out;
}

namespace detail {

/// The scaled polyphase row nu_{0,p,i} of the order-n construction.
inline std::vector<LaurentPoly> interpolatory_row(const OrbitStructure& os, int n) {
  const auto& h = os.group();
  std::vector<LaurentPoly> row(os.channel_count(), LaurentPoly(os.dim()));
  row[0] = LaurentPoly::constant(os.dim(), Scalar(1));
  for (std::size_t p = 1; p < os.orbit_count(); ++p) {
    const auto& orb = os.orbit(p);
    const auto seed = build_seed(p, os.dilation(), orb.representative, n);
    const LaurentPoly base = symmetrize_seed(seed, p, os);
    for (std::size_t i = 0; i < orb.size(); ++i)
      row[os.flat_index(p, i)] = base.substitute_linear(h[os.conjugate(orb.transversal[i])]);
  }
  return row;
}

inline void require(const CheckResult& r, const std::string& what) {
  if (!r.pass) throw VerificationFailure(what + ": check '" + r.name + "' failed: " + r.witness);
}

}  // namespace detail

/// Self-verification shared by the primal constructions: interpolatory,
/// H-symmetric about 0, sum rule and linear-phase moments of order >= n.
inline VerificationReport verify_interpolatory_mask(const Mask& mask, const SymmetryGroup& h, int n) {
  VerificationReport rep;
  rep.add(check_interpolatory(mask.poly, mask.dilation));
  rep.add(check_h_symmetric(mask.poly, h, RatVec(mask.dim(), Rational(0))));
  rep.add(check_sum_rule(mask.poly, mask.dilation, std::max(n, kDefaultOrderCap), n));
  rep.add(check_linear_phase_moments(mask.poly, RatVec(mask.dim(), Rational(0)), std::max(n, kDefaultOrderCap), n));
  if (mask.orbits) rep.add(check_polyphase_symmetry(mask.polyphase(), *mask.orbits));
  return rep;
}

/// Interpolatory H-symmetric mask with sum rule of order at least n.
inline Mask build_interpolatory_mask(const SymmetryGroup& h, const IntMatrix& m, int n) {
  if (n < 1) throw InvalidArgument("build_interpolatory_mask: order must be >= 1");
  if (!is_dilation(m)) throw InvalidArgument("build_interpolatory_mask: " + m.str() + " is not a dilation matrix");
  auto os = std::make_shared<const OrbitStructure>(orbit_decomposition(h, m));
  Mask mask;
  mask.dilation = m;
  mask.role = MaskRole::primal_refinable;
  mask.group = h.name();
  mask.center = RatVec(m.dim(), Rational(0));
  mask.order = n;
  mask.orbits = os;
  mask.poly = polyphase_merge(PolyphaseRow{os->digit_system(), detail::interpolatory_row(*os, n)});
  const auto rep = verify_interpolatory_mask(mask, h, n);
  for (const auto& c : rep.checks) detail::require(c, "build_interpolatory_mask");
  return mask;
}

/// The dual with nu~_{00} = m - sum_{k>=1} nu_{0k} conj(nu_{0k}) and
/// nu~_{0k} = nu_{0k} otherwise.
inline Mask build_dual_mask(const Mask& m0) {
  const auto interp = check_interpolatory(m0.poly, m0.dilation);
  if (!interp.pass) throw InvalidArgument("build_dual_mask: mask is not interpolatory (" + interp.witness + ")");
  PolyphaseRow row = m0.polyphase();
  const std::size_t count = row.size();
  LaurentPoly first = LaurentPoly::constant(m0.dim(), Scalar(static_cast<long>(count)));
  for (std::size_t k = 1; k < count; ++k) first -= row[k] * row[k].conjugate_reflect();
  row.components[0] = first;
  Mask dual = m0;
  dual.role = MaskRole::dual_refinable;
  dual.poly = polyphase_merge(row);
  detail::require(check_duality(m0.poly, dual.poly, m0.dilation), "build_dual_mask");
  return dual;
}

/// Dual built on a lower-order interpolatory mask: its first scaled
/// component is replaced by m - sum_{k>=1} conj(nu_{0k}) nu~_{0k}.
inline Mask build_dual_mask_low_order(const Mask& m0, const SymmetryGroup& h, int order) {
  const auto interp = check_interpolatory(m0.poly, m0.dilation);
  if (!interp.pass)
    throw InvalidArgument("build_dual_mask_low_order: mask is not interpolatory (" + interp.witness + ")");
  const Mask aux = build_interpolatory_mask(h, m0.dilation, order);
  const DigitSystem digits = aux.digits();
  const PolyphaseRow primal = polyphase_split(m0.poly, digits);
  PolyphaseRow row = polyphase_split(aux.poly, digits);
  LaurentPoly first = LaurentPoly::constant(m0.dim(), Scalar(static_cast<long>(row.size())));
  for (std::size_t k = 1; k < row.size(); ++k) first -= primal[k].conjugate_reflect() * row[k];
  row.components[0] = first;
  Mask dual = aux;
  dual.role = MaskRole::dual_refinable;
  dual.poly = polyphase_merge(row);
  dual.order = 1;
  detail::require(check_duality(m0.poly, dual.poly, m0.dilation), "build_dual_mask_low_order");
  detail::require(check_h_symmetric(dual.poly, h, RatVec(m0.dim(), Rational(0))), "build_dual_mask_low_order");
  detail::require(check_sum_rule(dual.poly, dual.dilation, kDefaultOrderCap, 1), "build_dual_mask_low_order");
  return dual;
}

}  // namespace symframe
