#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symframe/int_matrix.hpp"
#include "symframe/lattice.hpp"
#include "symframe/laurent.hpp"

namespace symframe {

enum class MaskRole { primal_refinable, dual_refinable, primal_wavelet, dual_wavelet };

inline std::string to_string(MaskRole r) {
  switch (r) {
    case MaskRole::primal_refinable: return "primal-refinable";
    case MaskRole::dual_refinable: return "dual-refinable";
    case MaskRole::primal_wavelet: return "primal-wavelet";
    case MaskRole::dual_wavelet: return "dual-wavelet";
  }
  return "unknown";
}

inline MaskRole parse_mask_role(const std::string& s) {
  if (s == "primal-refinable") return MaskRole::primal_refinable;
  if (s == "dual-refinable") return MaskRole::dual_refinable;
  if (s == "primal-wavelet") return MaskRole::primal_wavelet;
  if (s == "dual-wavelet") return MaskRole::dual_wavelet;
  throw ParseError("unknown mask role '" + s + "'");
}

/// A filter together with the dilation and symmetry data it was built for.
struct Mask {
  LaurentPoly poly;
  IntMatrix dilation;
  MaskRole role = MaskRole::primal_refinable;
  std::string group = "trivial";
  RatVec center;
  int order = 0;  // claimed sum-rule order (refinable) or VM order (wavelet)
  std::shared_ptr<const OrbitStructure> orbits;  // absent for imported masks

  std::size_t dim() const noexcept { return dilation.dim(); }
  std::size_t channel_count() const { return static_cast<std::size_t>(std::llabs(dilation.det())); }

  /// The digit system used for polyphase work: orbit-ordered when the mask
  /// came out of a symmetric construction, the default digits otherwise.
  DigitSystem digits() const { return orbits ? orbits->digit_system() : default_digits(dilation); }
  PolyphaseRow polyphase() const { return polyphase_split(poly, digits()); }
};

/// Wraps an imported polynomial. With a group, the orbit structure for (H, M)
/// is attached so that extensions use the orbit-ordered digits.
inline Mask make_mask(LaurentPoly t, const IntMatrix& m, const SymmetryGroup* h = nullptr,
                      MaskRole role = MaskRole::primal_refinable) {
  if (t.dim() != m.dim()) throw InvalidArgument("mask dimension differs from its dilation matrix");
  Mask mask;
  mask.poly = std::move(t);
  mask.dilation = m;
  mask.role = role;
  mask.center = RatVec(m.dim(), Rational(0));
  if (h) {
    mask.group = h->name();
    mask.orbits = std::make_shared<const OrbitStructure>(orbit_decomposition(*h, m));
  }
  return mask;
}

using PolyMatrix = std::vector<std::vector<LaurentPoly>>;

inline PolyMatrix poly_matrix(std::size_t rows, std::size_t cols, std::size_t d) {
  return PolyMatrix(rows, std::vector<LaurentPoly>(cols, LaurentPoly(d)));
}

inline PolyMatrix identity_poly_matrix(std::size_t n, std::size_t d, const Scalar& diag = Scalar(1)) {
  auto r = poly_matrix(n, n, d);
  for (std::size_t i = 0; i < n; ++i) r[i][i] = LaurentPoly::constant(d, diag);
  return r;
}

/// Conjugate transpose with conj(t(xi)) realized by conjugate_reflect.
inline PolyMatrix adjoint(const PolyMatrix& a) {
  if (a.empty()) return {};
  const std::size_t d = a[0].empty() ? 0 : a[0][0].dim();
  auto r = poly_matrix(a[0].size(), a.size(), d);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[j][i] = a[i][j].conjugate_reflect();
  return r;
}

inline PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.empty() || b.empty()) return {};
  if (a[0].size() != b.size()) throw InvalidArgument("polynomial matrix dimension mismatch");
  const std::size_t d = b[0].empty() ? 0 : b[0][0].dim();
  auto r = poly_matrix(a.size(), b[0].size(), d);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j)
        if (!b[k][j].is_zero()) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

/// Matrix of scalars lifted to constant polynomials.
inline PolyMatrix constant_matrix(const std::vector<std::vector<Scalar>>& s, std::size_t d) {
  auto r = poly_matrix(s.size(), s.empty() ? 0 : s[0].size(), d);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s[i].size(); ++j) r[i][j] = LaurentPoly::constant(d, s[i][j]);
  return r;
}

/// Where a channel of a bank comes from: orbit p and position i in it
/// (transversal position for mutual banks, radix index for symmetrized ones).
struct ChannelLabel {
  std::size_t orbit = 0;
  std::size_t index = 0;
};

struct Symmetrizer {
  // Per orbit, square matrices W_p and W~_p.
  std::vector<std::vector<std::vector<Scalar>>> w, w_dual;
  std::string normalization = "exact-paraunitary";
};

/// Primal masks m_0..m_{m-1} and duals, with their scaled polyphase
/// matrices. Row nu of N is the polyphase row of m_nu over `digits`.
struct FilterBank {
  IntMatrix dilation;
  std::shared_ptr<const OrbitStructure> orbits;  // absent for imported banks
  DigitSystem digits;
  std::vector<LaurentPoly> primal, dual;
  PolyMatrix n, n_dual;
  std::vector<ChannelLabel> labels;
  std::string mode = "custom";
  std::string group = "trivial";
  std::optional<Symmetrizer> symmetrizer;

  std::size_t dim() const noexcept { return dilation.dim(); }
  std::size_t size() const noexcept { return primal.size(); }
};

/// Builds a bank from masks alone (polyphase matrices over the given digits).
inline FilterBank bank_from_masks(const IntMatrix& m, std::vector<LaurentPoly> primal, std::vector<LaurentPoly> dual,
                                  const DigitSystem& digits) {
  const std::size_t count = static_cast<std::size_t>(std::llabs(m.det()));
  if (primal.size() != count || dual.size() != count)
    throw InvalidArgument("a filter bank for this dilation needs " + std::to_string(count) +
                          " primal and dual masks");
  FilterBank b;
  b.dilation = m;
  b.digits = digits;
  b.primal = std::move(primal);
  b.dual = std::move(dual);
  for (std::size_t nu = 0; nu < count; ++nu) {
    b.n.push_back(polyphase_split(b.primal[nu], digits).components);
    b.n_dual.push_back(polyphase_split(b.dual[nu], digits).components);
    b.labels.push_back({0, nu});
  }
  return b;
}

inline FilterBank bank_from_masks(const IntMatrix& m, std::vector<LaurentPoly> primal, std::vector<LaurentPoly> dual) {
  return bank_from_masks(m, std::move(primal), std::move(dual), default_digits(m));
}

}  // namespace symframe
