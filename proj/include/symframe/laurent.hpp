#pragma once

// Multivariate Laurent (trigonometric) polynomials t(xi) = sum_k h_k e^{2 pi i (k, xi)}
// with exact coefficients, and the polyphase split/merge.
//
// Polyphase components use the scaled convention nu_k = sqrt(m) tau_k:
//   nu_k has coefficient m h_{M beta + s_k} at beta,
//   t(xi) = (1/m) sum_k e^{2 pi i (s_k, xi)} nu_k(M^* xi).
// This keeps every construction inside Q(zeta_L).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "symframe/error.hpp"
#include "symframe/exact_scalar.hpp"
#include "symframe/int_matrix.hpp"
#include "symframe/lattice.hpp"

namespace symframe {

using MultiIndex = std::vector<std::int64_t>;

inline std::int64_t order_of(const MultiIndex& beta) {
  std::int64_t s = 0;
  for (auto b : beta) s += b;
  return s;
}

/// Delta_n = { beta in Z^d_+ : |beta| < n } in graded order; within a degree,
/// lexicographically descending, so (1,0) precedes (0,1).
inline std::vector<MultiIndex> multi_indices(std::size_t d, std::int64_t n) {
  std::vector<MultiIndex> out;
  for (std::int64_t deg = 0; deg < n; ++deg) {
    std::vector<MultiIndex> level;
    MultiIndex cur(d, 0);
    // enumerate compositions of deg into d parts
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t pos, std::int64_t left) {
      if (pos + 1 == d) {
        cur[pos] = left;
        level.push_back(cur);
        return;
      }
      for (std::int64_t v = left; v >= 0; --v) {
        cur[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    if (d == 0) {
      if (deg == 0) level.push_back({});
    } else {
      rec(0, deg);
    }
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// All alpha <= beta componentwise.
inline std::vector<MultiIndex> lower_indices(const MultiIndex& beta) {
  std::vector<MultiIndex> out;
  MultiIndex cur(beta.size(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t pos = 0;
    while (pos < beta.size() && cur[pos] == beta[pos]) cur[pos++] = 0;
    if (pos == beta.size()) break;
    ++cur[pos];
  }
  return out;
}

inline BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

/// prod_j C(beta_j, alpha_j).
inline BigInt multi_binomial(const MultiIndex& beta, const MultiIndex& alpha) {
  BigInt r = 1;
  for (std::size_t j = 0; j < beta.size(); ++j) r *= binomial(beta[j], alpha[j]);
  return r;
}

inline Rational power(const RatVec& x, const MultiIndex& beta) {
  Rational r = 1;
  for (std::size_t j = 0; j < beta.size(); ++j) {
    Rational p = 1;
    for (std::int64_t e = 0; e < beta[j]; ++e) p *= x[j];
    r *= p;
  }
  return r;
}

inline Rational power(const IntVec& x, const MultiIndex& beta) { return power(to_rational(x), beta); }

class LaurentPoly {
 public:
  using Map = std::map<IntVec, Scalar>;

  LaurentPoly() = default;
  explicit LaurentPoly(std::size_t d) : d_(d) {}

  static LaurentPoly constant(std::size_t d, const Scalar& v) { return monomial(IntVec(d, 0), v); }
  static LaurentPoly monomial(const IntVec& k, const Scalar& v = Scalar(1)) {
    LaurentPoly p(k.size());
    p.set(k, v);
    return p;
  }

  std::size_t dim() const noexcept { return d_; }
  const Map& terms() const noexcept { return c_; }
  std::size_t size() const noexcept { return c_.size(); }
  bool is_zero() const noexcept { return c_.empty(); }

  Scalar coeff(const IntVec& k) const {
    auto it = c_.find(k);
    return it == c_.end() ? Scalar(0) : it->second;
  }
  void set(const IntVec& k, const Scalar& v) {
    check_dim(k);
    if (v.is_zero()) c_.erase(k);
    else c_[k] = v;
  }
  void add(const IntVec& k, const Scalar& v) {
    if (v.is_zero()) return;
    check_dim(k);
    auto [it, inserted] = c_.emplace(k, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) c_.erase(it);
    }
  }

  LaurentPoly operator-() const {
    LaurentPoly r(d_);
    for (const auto& [k, v] : c_) r.c_.emplace_hint(r.c_.end(), k, -v);
    return r;
  }
  LaurentPoly& operator+=(const LaurentPoly& o) {
    merge_dim(o);
    for (const auto& [k, v] : o.c_) add(k, v);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    merge_dim(o);
    for (const auto& [k, v] : o.c_) add(k, -v);
    return *this;
  }
  LaurentPoly& operator*=(const Scalar& s) {
    if (s.is_zero()) {
      c_.clear();
      return *this;
    }
    for (auto& [k, v] : c_) v *= s;
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(LaurentPoly a, const Scalar& s) { return a *= s; }
  friend LaurentPoly operator*(const Scalar& s, LaurentPoly a) { return a *= s; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r(a.d_ ? a.d_ : b.d_);
    if (a.d_ && b.d_ && a.d_ != b.d_) throw InvalidArgument("LaurentPoly: dimension mismatch");
    for (const auto& [ka, va] : a.c_)
      for (const auto& [kb, vb] : b.c_) r.add(ka + kb, va * vb);
    return r;
  }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  bool is_rational() const {
    return std::all_of(c_.begin(), c_.end(), [](const auto& kv) { return kv.second.is_rational(); });
  }

  /// sum_k h_k k^beta, i.e. D^beta t(0) / (2 pi i)^{|beta|}.
  Scalar moment(const MultiIndex& beta) const {
    Scalar s(0);
    for (const auto& [k, v] : c_) {
      const Rational p = power(k, beta);
      if (p != 0) s += v * Scalar(p);
    }
    return s;
  }

  /// sum_k h_k (M^{-1} k)^alpha.
  Scalar dilated_moment(const IntMatrix& m, const MultiIndex& alpha) const {
    const RatMatrix minv = inverse(m);
    Scalar s(0);
    for (const auto& [k, v] : c_) {
      const Rational p = power(minv * k, alpha);
      if (p != 0) s += v * Scalar(p);
    }
    return s;
  }

  /// e^{2 pi i (a, xi)} t(xi).
  LaurentPoly modulate(const IntVec& a) const {
    LaurentPoly r(d_);
    for (const auto& [k, v] : c_) r.c_.emplace(k + a, v);
    return r;
  }

  /// t(A^* xi): the coefficient at k moves to A k. A must be unimodular.
  LaurentPoly substitute_linear(const IntMatrix& a) const {
    if (!a.is_unimodular()) throw InvalidArgument("substitute_linear: " + a.str() + " is not unimodular");
    return upsample(a);
  }

  /// t(M^* xi) for any integer matrix: the coefficient at k moves to M k.
  LaurentPoly upsample(const IntMatrix& m) const {
    if (d_ && m.dim() != d_) throw InvalidArgument("LaurentPoly: matrix dimension mismatch");
    LaurentPoly r(d_);
    for (const auto& [k, v] : c_) r.add(m * k, v);
    return r;
  }

  /// conj(t(xi)) as a polynomial: coefficient at k becomes conj(h_{-k}).
  LaurentPoly conjugate_reflect() const {
    LaurentPoly r(d_);
    for (const auto& [k, v] : c_) r.c_.emplace(-k, v.conj());
    return r;
  }

  /// Componentwise lower/upper corners of the support (empty polynomial: zeros).
  std::pair<IntVec, IntVec> bounding_box() const {
    IntVec lo(d_, 0), hi(d_, 0);
    bool first = true;
    for (const auto& [k, v] : c_) {
      for (std::size_t j = 0; j < d_; ++j) {
        lo[j] = first ? k[j] : std::min(lo[j], k[j]);
        hi[j] = first ? k[j] : std::max(hi[j], k[j]);
      }
      first = false;
    }
    return {lo, hi};
  }

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (const auto& [k, v] : c_) {
      if (!first) s += ", ";
      first = false;
      s += to_string(k) + ": " + v.str();
    }
    return s + "}";
  }

 private:
  void check_dim(const IntVec& k) {
    if (d_ == 0) d_ = k.size();
    else if (k.size() != d_) throw InvalidArgument("LaurentPoly: offset has wrong dimension");
  }
  void merge_dim(const LaurentPoly& o) {
    if (d_ == 0) d_ = o.d_;
    else if (o.d_ && o.d_ != d_) throw InvalidArgument("LaurentPoly: dimension mismatch");
  }

  std::size_t d_ = 0;
  Map c_;
};

inline Scalar moment(const LaurentPoly& t, const MultiIndex& beta) { return t.moment(beta); }
inline Scalar dilated_moment(const LaurentPoly& t, const IntMatrix& m, const MultiIndex& alpha) {
  return t.dilated_moment(m, alpha);
}
inline LaurentPoly modulate(const LaurentPoly& t, const IntVec& a) { return t.modulate(a); }
inline LaurentPoly substitute_linear(const LaurentPoly& t, const IntMatrix& a) { return t.substitute_linear(a); }
inline LaurentPoly conjugate_reflect(const LaurentPoly& t) { return t.conjugate_reflect(); }

/// Scaled polyphase row: component k belongs to digit k of the digit system.
struct PolyphaseRow {
  DigitSystem digits;
  std::vector<LaurentPoly> components;

  std::size_t size() const noexcept { return components.size(); }
  const LaurentPoly& operator[](std::size_t k) const { return components[k]; }
};

inline PolyphaseRow polyphase_split(const LaurentPoly& t, const DigitSystem& digits) {
  if (t.dim() && t.dim() != digits.dim()) throw InvalidArgument("polyphase_split: dimension mismatch");
  PolyphaseRow row{digits, std::vector<LaurentPoly>(digits.size(), LaurentPoly(digits.dim()))};
  const Scalar m(static_cast<long>(digits.size()));
  for (const auto& [k, v] : t.terms()) {
    auto [beta, idx] = digits.decompose(k);
    row.components[idx].add(beta, v * m);
  }
  return row;
}

inline LaurentPoly polyphase_merge(const PolyphaseRow& row) {
  const std::size_t m = row.digits.size();
  if (row.components.size() != m)
    throw InvalidArgument("polyphase_merge: expected " + std::to_string(m) + " components, got " +
                          std::to_string(row.components.size()));
  LaurentPoly t(row.digits.dim());
  const Scalar inv_m(make_rational(1, static_cast<long>(m)));
  const IntMatrix& dil = row.digits.dilation();
  for (std::size_t k = 0; k < m; ++k)
    for (const auto& [beta, v] : row.components[k].terms()) t.add(dil * beta + row.digits[k], v * inv_m);
  return t;
}

}  // namespace symframe
