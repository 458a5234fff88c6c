#pragma once

// Dual wavelet frame filter banks from a pair (m0, m~0) of refinable masks.
//
// With P, P~ the polyphase rows of m0, m~0 without their first entry and U, U~
// square matrices satisfying U U~^* = I, the scaled polyphase matrices are
//
//   N  = [ 1         P              ]     N~ = [ m - P~ P^*   P~ ]
//        [ -U P~^*   m U - U P~^* P ]          [ -U~ P^*      U~ ]
//
// and N^* N~ = m I. U = U~ = I gives the mutually symmetric bank; the
// symmetrized bank uses the Kronecker DFT blocks of an abelian group.

#include <algorithm>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symframe/lattice.hpp"
#include "symframe/laurent.hpp"
#include "symframe/mask.hpp"
#include "symframe/mask_builder.hpp"
#include "symframe/verify.hpp"

namespace symframe {

// ---------------------------------------------------------------------------
// Abelian structure of the transversals

/// A finite abelian group written as a direct product of cyclic factors, with
/// the mixed-radix numbering k = sum_j k_j L_j of its elements.
struct CyclicFactorization {
  std::vector<std::size_t> generators;  // group element indices
  std::vector<unsigned> orders;         // N_j
  std::vector<unsigned> weights;        // L_j, L_1 = 1
  std::vector<std::size_t> elements;    // radix index -> group element index
  std::vector<std::vector<std::size_t>> add;  // k (+) l

  std::size_t size() const noexcept { return elements.size(); }

  std::vector<unsigned> digits_of(std::size_t k) const {
    std::vector<unsigned> out(orders.size());
    for (std::size_t j = 0; j < orders.size(); ++j) out[j] = static_cast<unsigned>((k / weights[j]) % orders[j]);
    return out;
  }
};

struct AbelianOrbit {
  CyclicFactorization factors;
  std::vector<std::size_t> radix_to_position;  // radix index -> transversal position i
  std::vector<std::size_t> position_to_radix;
};

struct AbelianStructure {
  std::vector<AbelianOrbit> orbits;
};

namespace detail {

inline unsigned element_order(const SymmetryGroup& h, std::size_t e) {
  unsigned n = 1;
  for (std::size_t x = e; x != 0; x = h.product(x, e)) ++n;
  return n;
}

inline std::vector<std::size_t> cyclic_span(const SymmetryGroup& h, std::size_t g) {
  std::vector<std::size_t> out{0};
  for (std::size_t x = g; x != 0; x = h.product(x, g)) out.push_back(x);
  return out;
}

}  // namespace detail

/// Splits a subgroup of an abelian group into cyclic factors by repeatedly
/// taking an element of maximal order and passing to a complement of its span.
inline CyclicFactorization factor_abelian_subgroup(const SymmetryGroup& h, std::vector<std::size_t> members) {
  if (!h.is_abelian()) throw IncompatibleGroup("group '" + h.name() + "' is not abelian");
  std::sort(members.begin(), members.end());
  if (!detail::is_closed(h, members)) throw IncompatibleGroup("element set is not closed under multiplication");
  CyclicFactorization f;
  std::vector<std::vector<bool>> subgroups;
  std::vector<std::size_t> current = members;
  while (current.size() > 1) {
    std::size_t best = current[0];
    unsigned best_order = 1;
    for (auto e : current) {
      const unsigned o = detail::element_order(h, e);
      if (o > best_order) {
        best_order = o;
        best = e;
      }
    }
    f.generators.push_back(best);
    f.orders.push_back(best_order);
    const auto span = detail::cyclic_span(h, best);
    if (span.size() == current.size()) {
      current = {0};
      break;
    }
    if (subgroups.empty()) subgroups = detail::all_subgroups(h);
    const std::size_t want = current.size() / span.size();
    std::optional<std::vector<std::size_t>> complement;
    std::vector<bool> in_current(h.size(), false), in_span(h.size(), false);
    for (auto e : current) in_current[e] = true;
    for (auto e : span) in_span[e] = true;
    for (const auto& sub : subgroups) {
      std::vector<std::size_t> elems;
      bool ok = true;
      for (std::size_t e = 0; e < h.size() && ok; ++e) {
        if (!sub[e]) continue;
        if (!in_current[e] || (e != 0 && in_span[e])) ok = false;
        elems.push_back(e);
      }
      if (ok && elems.size() == want) {
        complement = elems;
        break;
      }
    }
    if (!complement) throw VerificationFailure("no complement found for a cyclic factor");
    current = *complement;
  }
  unsigned weight = 1;
  for (auto n : f.orders) {
    f.weights.push_back(weight);
    weight *= n;
  }
  const std::size_t total = weight;
  if (total != members.size()) throw VerificationFailure("cyclic factor orders do not multiply to the group order");
  f.elements.resize(total);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t x = 0;
    const auto ds = f.digits_of(k);
    for (std::size_t j = 0; j < ds.size(); ++j)
      for (unsigned r = 0; r < ds[j]; ++r) x = h.product(x, f.generators[j]);
    f.elements[k] = x;
  }
  f.add.assign(total, std::vector<std::size_t>(total));
  for (std::size_t k = 0; k < total; ++k)
    for (std::size_t l = 0; l < total; ++l) {
      const auto a = f.digits_of(k), b = f.digits_of(l);
      std::size_t s = 0;
      for (std::size_t j = 0; j < a.size(); ++j) s += ((a[j] + b[j]) % f.orders[j]) * f.weights[j];
      f.add[k][l] = s;
      if (h.product(f.elements[k], f.elements[l]) != f.elements[s])
        throw VerificationFailure("mixed-radix product table is inconsistent");
    }
  return f;
}

inline AbelianStructure abelian_decomposition(const OrbitStructure& os) {
  const auto& h = os.group();
  if (!h.is_abelian()) throw IncompatibleGroup("group '" + h.name() + "' is not abelian");
  AbelianStructure a;
  for (std::size_t p = 0; p < os.orbit_count(); ++p) {
    const auto& orb = os.orbit(p);
    if (!detail::is_closed(h, orb.transversal))
      throw IncompatibleGroup("transversal of orbit " + std::to_string(p) + " (representative " +
                              to_string(orb.representative) + ") is not a subgroup");
    AbelianOrbit ao;
    ao.factors = factor_abelian_subgroup(h, orb.transversal);
    ao.radix_to_position.resize(orb.size());
    ao.position_to_radix.resize(orb.size());
    for (std::size_t k = 0; k < ao.factors.size(); ++k) {
      const auto it = std::find(orb.transversal.begin(), orb.transversal.end(), ao.factors.elements[k]);
      const auto i = static_cast<std::size_t>(it - orb.transversal.begin());
      ao.radix_to_position[k] = i;
      ao.position_to_radix[i] = k;
    }
    a.orbits.push_back(std::move(ao));
  }
  return a;
}

// ---------------------------------------------------------------------------
// Symmetrizers

enum class Normalization { exact_paraunitary, unitary };

inline Normalization parse_normalization(const std::string& s) {
  if (s == "exact-paraunitary") return Normalization::exact_paraunitary;
  if (s == "unitary") return Normalization::unitary;
  throw InvalidArgument("unknown normalization '" + s + "'");
}

using ScalarMatrix = std::vector<std::vector<Scalar>>;

inline ScalarMatrix conjugate_transpose(const ScalarMatrix& a) {
  ScalarMatrix r(a.empty() ? 0 : a[0].size(), std::vector<Scalar>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[j][i] = a[i][j].conj();
  return r;
}

inline ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b) {
  ScalarMatrix r(a.size(), std::vector<Scalar>(b.empty() ? 0 : b[0].size(), Scalar(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline bool is_identity(const ScalarMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != Scalar(i == j ? 1 : 0)) return false;
  return true;
}

/// W_p = Kronecker product of unnormalized DFT matrices, in mixed-radix
/// numbering: [W_p]_{k,l} = prod_j eps_{N_j}^{k_j l_j}. The dual is W_p / N_p
/// (exact-paraunitary), or both are scaled by 1/sqrt(N_p) (unitary, only when
/// sqrt(N_p) lies in a cyclotomic field of conductor <= max_conductor).
inline Symmetrizer build_symmetrizer(const AbelianStructure& a,
                                     Normalization normalization = Normalization::exact_paraunitary,
                                     unsigned max_conductor = 4096) {
  Symmetrizer s;
  s.normalization = normalization == Normalization::unitary ? "unitary" : "exact-paraunitary";
  for (const auto& orb : a.orbits) {
    const auto& f = orb.factors;
    const std::size_t n = f.size();
    ScalarMatrix w(n, std::vector<Scalar>(n));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        const auto kd = f.digits_of(k), ld = f.digits_of(l);
        Scalar v(1);
        for (std::size_t j = 0; j < kd.size(); ++j)
          v *= Scalar::root_of_unity(f.orders[j], static_cast<long long>(kd[j]) * ld[j]);
        w[k][l] = v;
      }
    ScalarMatrix wd = w;
    if (normalization == Normalization::exact_paraunitary) {
      const Scalar inv(make_rational(1, static_cast<long>(n)));
      for (auto& row : wd)
        for (auto& v : row) v *= inv;
    } else {
      const auto root = cyclotomic_sqrt(static_cast<unsigned>(n), max_conductor);
      if (!root)
        throw InvalidArgument("unitary normalization needs sqrt(" + std::to_string(n) +
                              ") in a cyclotomic field of conductor <= " + std::to_string(max_conductor));
      const Scalar inv = root->inverse();
      for (auto* mat : {&w, &wd})
        for (auto& row : *mat)
          for (auto& v : row) v *= inv;
    }
    if (!is_identity(w * conjugate_transpose(wd))) throw VerificationFailure("symmetrizer block fails W W~^* = I");
    s.w.push_back(std::move(w));
    s.w_dual.push_back(std::move(wd));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Special assumption: r^F_{p,0} = M^{-1} E M r^F_{p,0} for all F in the
// stabilizer and E in the transversal of each orbit.

struct SpecialAssumption {
  std::vector<bool> per_orbit;
  std::vector<std::string> witness;

  bool all() const { return std::all_of(per_orbit.begin(), per_orbit.end(), [](bool b) { return b; }); }
};

inline SpecialAssumption check_special_assumption(const OrbitStructure& os) {
  const auto& h = os.group();
  SpecialAssumption s;
  for (std::size_t p = 0; p < os.orbit_count(); ++p) {
    const auto& orb = os.orbit(p);
    bool ok = true;
    std::string witness;
    for (std::size_t f = 0; f < orb.stabilizer.size() && ok; ++f)
      for (auto e : orb.transversal) {
        const IntVec& r = orb.stabilizer_shift[f];
        if (h[os.conjugate(e)] * r != r) {
          ok = false;
          witness = "F=" + h[orb.stabilizer[f]].str() + " E=" + h[e].str() + " r=" + to_string(r);
          break;
        }
      }
    s.per_orbit.push_back(ok);
    s.witness.push_back(witness);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Extensions

namespace detail {

inline std::shared_ptr<const OrbitStructure> orbits_for(const Mask& m0) {
  if (m0.orbits) return m0.orbits;
  return std::make_shared<const OrbitStructure>(orbit_decomposition(groups::trivial(m0.dim()), m0.dilation));
}

inline FilterBank assemble(const Mask& m0, const Mask& m0_dual, std::shared_ptr<const OrbitStructure> os,
                           const PolyMatrix& u, const PolyMatrix& u_dual, std::string mode) {
  if (m0.dilation != m0_dual.dilation) throw InvalidArgument("primal and dual masks use different dilations");
  const auto interp = check_interpolatory(m0.poly, m0.dilation);
  if (!interp.pass) throw InvalidArgument("primal refinable mask is not interpolatory: " + interp.witness);
  const auto dual_ok = check_duality(m0.poly, m0_dual.poly, m0.dilation);
  if (!dual_ok.pass) throw VerificationFailure("masks are not dual: " + dual_ok.witness);

  const DigitSystem& digits = os->digit_system();
  const std::size_t m = digits.size();
  const std::size_t d = m0.dim();
  const auto row = polyphase_split(m0.poly, digits);
  const auto row_dual = polyphase_split(m0_dual.poly, digits);
  const Scalar ms(static_cast<long>(m));

  FilterBank b;
  b.dilation = m0.dilation;
  b.orbits = os;
  b.digits = digits;
  b.mode = std::move(mode);
  b.group = os->group().name();
  b.n = poly_matrix(m, m, d);
  b.n_dual = poly_matrix(m, m, d);
  b.n[0] = row.components;
  b.n_dual[0] = row_dual.components;

  std::vector<LaurentPoly> p_adj, pd_adj;  // conj(nu_{0k}), conj(nu~_{0k}), k >= 1
  for (std::size_t k = 1; k < m; ++k) {
    p_adj.push_back(row[k].conjugate_reflect());
    pd_adj.push_back(row_dual[k].conjugate_reflect());
  }
  for (std::size_t w = 0; w + 1 < m; ++w) {
    LaurentPoly a(d), ad(d);  // (U P~^*)_w and (U~ P^*)_w
    for (std::size_t l = 0; l + 1 < m; ++l) {
      if (!u[w][l].is_zero()) a += u[w][l] * pd_adj[l];
      if (!u_dual[w][l].is_zero()) ad += u_dual[w][l] * p_adj[l];
    }
    b.n[w + 1][0] = -a;
    b.n_dual[w + 1][0] = -ad;
    for (std::size_t k = 0; k + 1 < m; ++k) {
      b.n[w + 1][k + 1] = u[w][k] * LaurentPoly::constant(d, ms) - a * row[k + 1];
      b.n_dual[w + 1][k + 1] = u_dual[w][k];
    }
  }
  for (std::size_t nu = 0; nu < m; ++nu) {
    b.primal.push_back(polyphase_merge(PolyphaseRow{digits, b.n[nu]}));
    b.dual.push_back(polyphase_merge(PolyphaseRow{digits, b.n_dual[nu]}));
  }
  const auto mep = check_mep(b);
  if (!mep.pass) throw VerificationFailure("assembled bank fails the MEP identity: " + mep.witness);
  return b;
}

}  // namespace detail

/// U = U~ = I: wavelets m_{(p,i)} = e^{2 pi i (s_{p,i}, xi)} - conj(nu~_{0,p,i})(M^* xi) m0(xi)
/// and m~_{(p,i)} = (e^{2 pi i (s_{p,i}, xi)} - conj(nu_{0,p,i})(M^* xi)) / m.
inline FilterBank mutual_extension(const Mask& m0, const Mask& m0_dual) {
  auto os = detail::orbits_for(m0);
  const std::size_t m = os->channel_count();
  const auto id = identity_poly_matrix(m - 1, m0.dim());
  FilterBank b = detail::assemble(m0, m0_dual, os, id, id, "mutual");
  b.labels.push_back({0, 0});
  for (std::size_t k = 1; k < m; ++k) {
    const auto [p, i] = os->orbit_position(k);
    b.labels.push_back({p, i});
  }
  return b;
}

/// Extension with user supplied (U, U~), checked for U U~^* = I.
inline FilterBank custom_extension(const Mask& m0, const Mask& m0_dual, const PolyMatrix& u, const PolyMatrix& u_dual) {
  auto os = detail::orbits_for(m0);
  const std::size_t m = os->channel_count();
  auto shape_ok = [&](const PolyMatrix& a) {
    if (a.size() != m - 1) return false;
    return std::all_of(a.begin(), a.end(), [&](const auto& r) { return r.size() == m - 1; });
  };
  if (!shape_ok(u) || !shape_ok(u_dual))
    throw InvalidArgument("custom_extension: U and U~ must be " + std::to_string(m - 1) + "x" + std::to_string(m - 1));
  const auto prod = u * adjoint(u_dual);
  const auto id = identity_poly_matrix(m - 1, m0.dim());
  if (prod != id) throw VerificationFailure("custom_extension: U U~^* is not the identity");
  FilterBank b = detail::assemble(m0, m0_dual, os, u, u_dual, "custom");
  b.labels.push_back({0, 0});
  for (std::size_t k = 1; k < m; ++k) b.labels.push_back({0, k});
  return b;
}

/// U = blockdiag(Q_p)^*, U~ = blockdiag(Q~_p)^* with [Q_p]_{i,l} = [W_p]_{k(i),l}:
/// wavelet (p, l) is sum_i conj([W_p]_{k(i),l}) times the mutual wavelet (p, i).
inline FilterBank symmetrized_extension(const Mask& m0, const Mask& m0_dual,
                                        Normalization normalization = Normalization::exact_paraunitary) {
  auto os = detail::orbits_for(m0);
  const auto& h = os->group();
  if (!h.is_abelian()) throw IncompatibleGroup("symmetrized extension needs an abelian group; '" + h.name() + "' is not");
  const auto special = check_special_assumption(*os);
  for (std::size_t p = 0; p < special.per_orbit.size(); ++p)
    if (!special.per_orbit[p])
      throw IncompatibleGroup("special assumption fails for orbit " + std::to_string(p) + " (representative " +
                              to_string(os->orbit(p).representative) + "): " + special.witness[p]);
  const auto ab = abelian_decomposition(*os);
  const Symmetrizer sym = build_symmetrizer(ab, normalization);
  const std::size_t m = os->channel_count();
  const std::size_t d = m0.dim();
  auto u = poly_matrix(m - 1, m - 1, d);
  auto ud = poly_matrix(m - 1, m - 1, d);
  std::vector<ChannelLabel> labels{{0, 0}};
  for (std::size_t p = 1; p < os->orbit_count(); ++p) {
    const auto& orb = ab.orbits[p];
    for (std::size_t l = 0; l < os->orbit(p).size(); ++l) {
      const std::size_t row = os->flat_index(p, l) - 1;
      for (std::size_t i = 0; i < os->orbit(p).size(); ++i) {
        const std::size_t col = os->flat_index(p, i) - 1;
        const std::size_t k = orb.position_to_radix[i];
        u[row][col] = LaurentPoly::constant(d, sym.w[p][k][l].conj());
        ud[row][col] = LaurentPoly::constant(d, sym.w_dual[p][k][l].conj());
      }
      labels.push_back({p, l});
    }
  }
  FilterBank b = detail::assemble(m0, m0_dual, os, u, ud, "symmetrized");
  b.labels = labels;
  b.symmetrizer = sym;
  return b;
}

}  // namespace symframe
