#pragma once

// Small square integer matrices and integer vectors. Dimensions are tiny
// (d <= 3 in practice), so everything is dense and straightforward; rational
// work (inverse, characteristic polynomial) is done in GMP rationals.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "symframe/error.hpp"
#include "symframe/exact_scalar.hpp"

namespace symframe {

using IntVec = std::vector<std::int64_t>;
using RatVec = std::vector<Rational>;

class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t d) : d_(d), a_(d * d, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    d_ = rows.size();
    for (const auto& r : rows) {
      if (r.size() != d_) throw InvalidArgument("IntMatrix: matrix must be square");
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
    IntMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw InvalidArgument("IntMatrix: matrix must be square");
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  static IntMatrix identity(std::size_t d) {
    IntMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1;
    return m;
  }
  static IntMatrix scalar(std::size_t d, std::int64_t s) {
    IntMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = s;
    return m;
  }
  static IntMatrix diagonal(const IntVec& v) {
    IntMatrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
    return m;
  }

  std::size_t dim() const noexcept { return d_; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }
  const std::vector<std::int64_t>& entries() const noexcept { return a_; }

  std::vector<std::vector<std::int64_t>> rows() const {
    std::vector<std::vector<std::int64_t>> r(d_, std::vector<std::int64_t>(d_));
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) r[i][j] = (*this)(i, j);
    return r;
  }

  IntMatrix transpose() const {
    IntMatrix t(d_);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    if (x.d_ != y.d_) throw InvalidArgument("IntMatrix: dimension mismatch in product");
    IntMatrix r(x.d_);
    for (std::size_t i = 0; i < x.d_; ++i)
      for (std::size_t k = 0; k < x.d_; ++k) {
        const auto v = x(i, k);
        if (!v) continue;
        for (std::size_t j = 0; j < x.d_; ++j) r(i, j) += v * y(k, j);
      }
    return r;
  }
  friend IntVec operator*(const IntMatrix& x, const IntVec& v) {
    if (x.d_ != v.size()) throw InvalidArgument("IntMatrix: dimension mismatch in matrix-vector product");
    IntVec r(x.d_, 0);
    for (std::size_t i = 0; i < x.d_; ++i)
      for (std::size_t j = 0; j < x.d_; ++j) r[i] += x(i, j) * v[j];
    return r;
  }
  friend IntMatrix operator-(const IntMatrix& x, const IntMatrix& y) {
    IntMatrix r = x;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= y.a_[i];
    return r;
  }
  friend IntMatrix operator-(const IntMatrix& x) {
    IntMatrix r = x;
    for (auto& v : r.a_) v = -v;
    return r;
  }
  friend bool operator==(const IntMatrix& x, const IntMatrix& y) {
    return x.d_ == y.d_ && x.a_ == y.a_;
  }
  friend bool operator!=(const IntMatrix& x, const IntMatrix& y) { return !(x == y); }
  friend bool operator<(const IntMatrix& x, const IntMatrix& y) {
    return x.d_ != y.d_ ? x.d_ < y.d_ : x.a_ < y.a_;
  }

  std::int64_t det() const {
    // Bareiss fraction-free elimination; exact for integer input.
    if (d_ == 0) return 1;
    std::vector<BigInt> m(a_.begin(), a_.end());
    auto at = [&](std::size_t i, std::size_t j) -> BigInt& { return m[i * d_ + j]; };
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < d_; ++k) {
      if (at(k, k) == 0) {
        std::size_t p = k + 1;
        while (p < d_ && at(p, k) == 0) ++p;
        if (p == d_) return 0;
        for (std::size_t j = 0; j < d_; ++j) std::swap(at(k, j), at(p, j));
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < d_; ++i)
        for (std::size_t j = k + 1; j < d_; ++j) {
          BigInt t = at(i, j) * at(k, k) - at(i, k) * at(k, j);
          at(i, j) = t / prev;
        }
      prev = at(k, k);
    }
    BigInt r = at(d_ - 1, d_ - 1) * sign;
    return r.get_si();
  }

  /// adj(M), so that M * adj(M) = det(M) I.
  IntMatrix adjugate() const {
    IntMatrix r(d_);
    if (d_ == 1) {
      r(0, 0) = 1;
      return r;
    }
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) {
        IntMatrix minor(d_ - 1);
        for (std::size_t a = 0, ra = 0; a < d_; ++a) {
          if (a == j) continue;
          for (std::size_t b = 0, cb = 0; b < d_; ++b) {
            if (b == i) continue;
            minor(ra, cb++) = (*this)(a, b);
          }
          ++ra;
        }
        r(i, j) = (((i + j) % 2) ? -1 : 1) * minor.det();
      }
    return r;
  }

  bool is_unimodular() const { return std::llabs(det()) == 1; }

  /// Inverse of a unimodular matrix, as an integer matrix.
  IntMatrix unimodular_inverse() const {
    const auto dt = det();
    if (std::llabs(dt) != 1) throw InvalidArgument("matrix is not unimodular: " + str());
    IntMatrix r = adjugate();
    if (dt == -1) r = -r;
    return r;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < d_; ++i) {
      if (i) s += ',';
      s += '[';
      for (std::size_t j = 0; j < d_; ++j) {
        if (j) s += ',';
        s += std::to_string((*this)(i, j));
      }
      s += ']';
    }
    return s + "]";
  }

 private:
  std::size_t d_ = 0;
  std::vector<std::int64_t> a_;
};

inline std::string to_string(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s + ")";
}

inline std::string to_string(const RatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += to_string(v[i]);
  }
  return s + ")";
}

inline IntVec operator+(const IntVec& a, const IntVec& b) {
  IntVec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}
inline IntVec operator-(const IntVec& a, const IntVec& b) {
  IntVec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}
inline IntVec operator-(const IntVec& a) {
  IntVec r(a);
  for (auto& v : r) v = -v;
  return r;
}

inline RatVec to_rational(const IntVec& v) { return RatVec(v.begin(), v.end()); }

inline RatVec operator*(const IntMatrix& m, const RatVec& v) {
  RatVec r(m.dim(), Rational(0));
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) r[i] += Rational(m(i, j)) * v[j];
  return r;
}

inline bool is_integral(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q.get_den() == 1; });
}

inline IntVec to_integer(const RatVec& v) {
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].get_den() != 1) throw InvalidArgument("vector is not integral: " + to_string(v));
    r[i] = v[i].get_num().get_si();
  }
  return r;
}

/// Exact rational inverse, row-major.
class RatMatrix {
 public:
  RatMatrix() = default;
  explicit RatMatrix(std::size_t d) : d_(d), a_(d * d, Rational(0)) {}
  explicit RatMatrix(const IntMatrix& m) : d_(m.dim()) {
    for (auto v : m.entries()) a_.emplace_back(v);
  }
  std::size_t dim() const noexcept { return d_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }

  friend RatVec operator*(const RatMatrix& m, const RatVec& v) {
    RatVec r(m.d_, Rational(0));
    for (std::size_t i = 0; i < m.d_; ++i)
      for (std::size_t j = 0; j < m.d_; ++j) r[i] += m(i, j) * v[j];
    return r;
  }
  friend RatVec operator*(const RatMatrix& m, const IntVec& v) { return m * to_rational(v); }
  friend RatMatrix operator*(const RatMatrix& x, const RatMatrix& y) {
    RatMatrix r(x.d_);
    for (std::size_t i = 0; i < x.d_; ++i)
      for (std::size_t k = 0; k < x.d_; ++k)
        for (std::size_t j = 0; j < x.d_; ++j) r(i, j) += x(i, k) * y(k, j);
    return r;
  }

  bool is_integral() const {
    return std::all_of(a_.begin(), a_.end(), [](const Rational& q) { return q.get_den() == 1; });
  }
  IntMatrix to_integer() const {
    if (!is_integral()) throw InvalidArgument("matrix is not integral");
    IntMatrix m(d_);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) m(i, j) = (*this)(i, j).get_num().get_si();
    return m;
  }

 private:
  std::size_t d_ = 0;
  std::vector<Rational> a_;
};

inline RatMatrix inverse(const IntMatrix& m) {
  const auto dt = m.det();
  if (dt == 0) throw InvalidArgument("singular matrix " + m.str());
  const IntMatrix adj = m.adjugate();
  RatMatrix r(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) {
      r(i, j) = Rational(adj(i, j), dt);
      r(i, j).canonicalize();
    }
  return r;
}

/// Solve A x = b exactly for square integer A. Throws on singular A.
inline RatVec solve(const IntMatrix& a, const RatVec& b) { return inverse(a) * b; }

/// det(xI - A) as ascending coefficients, via Faddeev-LeVerrier.
inline std::vector<Rational> characteristic_polynomial(const IntMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  RatMatrix am(a);
  RatMatrix mk(n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    RatMatrix next = am * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = next;
    RatMatrix amk = am * mk;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += amk(i, i);
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return c;
}

/// True when every root of p (ascending coefficients) lies strictly inside the
/// unit disk, by the Schur-Cohn recursion.
inline bool roots_strictly_inside_unit_disk(std::vector<Rational> p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  if (p.empty()) return false;
  while (p.size() > 1) {
    const std::size_t n = p.size() - 1;
    const Rational& a0 = p[0];
    const Rational& an = p[n];
    if (abs(a0) >= abs(an)) return false;
    // Reduced polynomial of degree n-1: b_k = a_n a_{k+1} - a_0 a_{n-1-k}
    // (the Schur transform, up to the factor x that divides out).
    std::vector<Rational> b(n);
    for (std::size_t k = 0; k < n; ++k) b[k] = an * p[k + 1] - a0 * p[n - 1 - k];
    p = std::move(b);
    while (!p.empty() && p.back() == 0) p.pop_back();
    if (p.empty()) return false;
  }
  return true;
}

/// Every eigenvalue has modulus > 1: the reversed characteristic polynomial
/// (whose roots are the reciprocals) has all roots strictly inside the disk.
inline bool is_dilation(const IntMatrix& m) {
  if (m.dim() == 0 || m.det() == 0) return false;
  auto c = characteristic_polynomial(m);
  std::reverse(c.begin(), c.end());
  return roots_strictly_inside_unit_disk(c);
}

}  // namespace symframe
