#pragma once

// Exact arithmetic over Q and the cyclotomic fields Q(zeta_L).
//
// A Scalar is either a plain rational or a residue modulo the L-th cyclotomic
// polynomial Phi_L, stored as phi(L) rational coefficients of 1, zeta, ...,
// zeta^{phi(L)-1}. Residues whose non-constant part vanishes are demoted to
// rationals, so the rational fast path covers every real filter.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symframe/error.hpp"

namespace symframe {

using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) {
  // mpq_class::get_str already prints "p" when q == 1 after canonicalization.
  return q.get_str();
}

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw ParseError("empty rational");
  if (s.front() == '+') s.erase(s.begin());
  const auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!valid_int(s)) throw ParseError("malformed rational '" + s + "'");
    return Rational(BigInt(s));
  }
  const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-')
    throw ParseError("malformed rational '" + s + "'");
  BigInt d(den);
  if (d == 0) throw ParseError("zero denominator in '" + s + "'");
  Rational q(BigInt(num), d);
  q.canonicalize();
  return q;
}

/// Integer coefficients (ascending powers) of the L-th cyclotomic polynomial,
/// from x^L - 1 = prod_{d | L} Phi_d.
inline std::vector<long long> cyclotomic_polynomial(unsigned L) {
  if (L == 0) throw InvalidArgument("cyclotomic_polynomial: conductor must be >= 1");
  std::vector<long long> num(L + 1, 0);
  num[0] = -1;
  num[L] = 1;
  for (unsigned d = 1; d < L; ++d) {
    if (L % d != 0) continue;
    const auto den = cyclotomic_polynomial(d);  // monic
    const std::size_t dd = den.size() - 1;
    std::vector<long long> quo(num.size() - dd, 0);
    for (std::size_t k = num.size(); k-- > dd;) {
      const long long c = num[k];
      quo[k - dd] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j <= dd; ++j) num[k - dd + j] -= c * den[j];
    }
    num = std::move(quo);
  }
  return num;
}

inline unsigned euler_phi(unsigned n) {
  unsigned result = n;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

namespace detail {

// Per-conductor tables: Phi_L and x^k mod Phi_L for 0 <= k < max(L, 2 phi(L)).
struct CyclotomicTables {
  unsigned conductor = 1;
  unsigned degree = 1;
  std::vector<long long> phi;
  std::vector<std::vector<long long>> power;  // power[k][j]: coefficient of x^j in x^k mod Phi
};

inline std::shared_ptr<const CyclotomicTables> build_tables(unsigned L) {
  auto t = std::make_shared<CyclotomicTables>();
  t->conductor = L;
  t->phi = cyclotomic_polynomial(L);
  t->degree = static_cast<unsigned>(t->phi.size() - 1);
  const unsigned deg = t->degree;
  const unsigned count = std::max(L, 2 * deg);
  t->power.assign(count, std::vector<long long>(deg, 0));
  std::vector<long long> cur(deg, 0);
  if (deg > 0) cur[0] = 1;
  for (unsigned k = 0; k < count; ++k) {
    t->power[k] = cur;
    // multiply by x and reduce with the monic Phi
    const long long top = deg ? cur[deg - 1] : 0;
    for (unsigned j = deg; j-- > 1;) cur[j] = cur[j - 1];
    if (deg) cur[0] = 0;
    if (top != 0)
      for (unsigned j = 0; j < deg; ++j) cur[j] -= top * t->phi[j];
  }
  return t;
}

inline std::shared_ptr<const CyclotomicTables> tables(unsigned L) {
  static std::mutex mutex;
  static std::map<unsigned, std::shared_ptr<const CyclotomicTables>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(L);
  if (it != cache.end()) return it->second;
  auto t = build_tables(L);
  cache.emplace(L, t);
  return t;
}

// Dense Q[x] helpers used by the extended gcd.
using QPoly = std::vector<Rational>;

inline void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
  QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const std::size_t shift = a.size() - b.size();
    const Rational c = a.back() / b.back();
    q[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {q, a};
}

inline QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

}  // namespace detail

/// Element of Q(zeta_L). Immutable value semantics; all operations are exact.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : rational_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(int v) : rational_(v) {}   // NOLINT(google-explicit-constructor)
  Scalar(const Rational& q) : rational_(q) {}  // NOLINT(google-explicit-constructor)

  /// Residue sum_j coeffs[j] zeta_L^j reduced modulo Phi_L. coeffs may be
  /// longer than phi(L); any length is accepted.
  static Scalar from_powers(unsigned L, const std::vector<Rational>& coeffs) {
    if (L == 0) throw InvalidArgument("conductor must be >= 1");
    if (L == 1) {
      Rational sum = 0;
      for (const auto& c : coeffs) sum += c;
      return Scalar(sum);
    }
    const auto t = detail::tables(L);
    std::vector<Rational> res(t->degree, Rational(0));
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k] == 0) continue;
      const auto& pw = t->power[k % L];
      for (unsigned j = 0; j < t->degree; ++j)
        if (pw[j]) res[j] += coeffs[k] * static_cast<long>(pw[j]);
    }
    return from_residue(L, std::move(res));
  }

  /// zeta_N^k.
  static Scalar root_of_unity(unsigned N, long long k) {
    if (N == 0) throw InvalidArgument("root_of_unity: order must be >= 1");
    const long long r = ((k % static_cast<long long>(N)) + N) % N;
    std::vector<Rational> c(static_cast<std::size_t>(r) + 1, Rational(0));
    c[static_cast<std::size_t>(r)] = 1;
    return from_powers(N, c);
  }

  bool is_rational() const noexcept { return conductor_ == 1; }
  unsigned conductor() const noexcept { return conductor_; }
  const Rational& rational() const {
    if (!is_rational()) throw InvalidArgument("scalar is not rational");
    return rational_;
  }
  /// Residue coefficients over 1, zeta, ..., zeta^{phi(L)-1} (length 1 for rationals).
  std::vector<Rational> residue() const {
    if (is_rational()) return {rational_};
    return residue_;
  }
  bool is_zero() const noexcept { return is_rational() && rational_ == 0; }
  bool is_one() const noexcept { return is_rational() && rational_ == 1; }

  /// Same value in Q(zeta_{L'}), L' a multiple of the conductor. The result is
  /// normalized, so a rational value stays rational.
  Scalar promote(unsigned target) const {
    if (target == 0 || target % conductor_ != 0)
      throw InvalidArgument("promote: target conductor " + std::to_string(target) +
                            " is not a multiple of " + std::to_string(conductor_));
    if (is_rational() || target == conductor_) return *this;
    return from_residue(target, residue_in(target));
  }

  /// The same value expressed in Q(zeta_{L'}) for L' dividing the conductor,
  /// or nullopt when the value does not lie in that subfield.
  std::optional<Scalar> demote(unsigned target) const;

  Scalar conj() const {
    if (is_rational()) return *this;
    std::vector<Rational> c(conductor_, Rational(0));
    for (std::size_t j = 0; j < residue_.size(); ++j)
      c[(conductor_ - j) % conductor_] = residue_[j];
    return from_powers(conductor_, c);
  }

  Scalar inverse() const;

  std::complex<double> to_complex() const {
    if (is_rational()) return {rational_.get_d(), 0.0};
    std::complex<double> z{0.0, 0.0};
    const double two_pi = 6.283185307179586476925286766559;
    for (std::size_t j = 0; j < residue_.size(); ++j) {
      if (residue_[j] == 0) continue;
      const double ang = two_pi * static_cast<double>(j) / conductor_;
      z += residue_[j].get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return z;
  }

  Scalar operator-() const {
    Scalar r = *this;
    if (is_rational()) {
      r.rational_ = -rational_;
    } else {
      for (auto& c : r.residue_) c = -c;
    }
    return r;
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return Scalar(Rational(a.rational_ + b.rational_));
    const unsigned L = std::lcm(a.conductor_, b.conductor_);
    auto x = a.residue_in(L);
    const auto y = b.residue_in(L);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += y[j];
    return from_residue(L, std::move(x));
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return Scalar(Rational(a.rational_ * b.rational_));
    if (a.is_rational()) return b.scaled(a.rational_);
    if (b.is_rational()) return a.scaled(b.rational_);
    const unsigned L = std::lcm(a.conductor_, b.conductor_);
    const auto x = a.residue_in(L);
    const auto y = b.residue_in(L);
    std::vector<Rational> prod(x.size() + y.size() - 1, Rational(0));
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < y.size(); ++j)
        if (y[j] != 0) prod[i + j] += x[i] * y[j];
    }
    return from_powers(L, prod);
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_rational()) {
      if (b.rational_ == 0) throw InvalidArgument("division by zero scalar");
      return a.scaled(Rational(1 / b.rational_));
    }
    return a * b.inverse();
  }
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return a.rational_ == b.rational_;
    if (a.is_rational() != b.is_rational()) return false;
    const unsigned L = std::lcm(a.conductor_, b.conductor_);
    return a.residue_in(L) == b.residue_in(L);
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// "p/q" for rationals, "zeta(L):[c0,c1,...]" otherwise.
  std::string str() const {
    if (is_rational()) return to_string(rational_);
    std::string s = "zeta(" + std::to_string(conductor_) + "):[";
    for (std::size_t j = 0; j < residue_.size(); ++j) {
      if (j) s += ',';
      s += to_string(residue_[j]);
    }
    return s + "]";
  }

  static Scalar parse(std::string_view text);

 private:
  static Scalar from_residue(unsigned L, std::vector<Rational> res) {
    Scalar s;
    if (L <= 2 || std::all_of(res.begin() + 1, res.end(), [](const Rational& c) { return c == 0; })) {
      s.rational_ = res.empty() ? Rational(0) : res[0];
      return s;
    }
    s.conductor_ = L;
    s.residue_ = std::move(res);
    return s;
  }

  std::vector<Rational> residue_in(unsigned L) const {
    if (conductor_ == L) return residue_;
    const auto t = detail::tables(L);
    std::vector<Rational> out(t->degree, Rational(0));
    if (is_rational()) {
      out[0] = rational_;
      return out;
    }
    const unsigned step = L / conductor_;
    for (std::size_t j = 0; j < residue_.size(); ++j) {
      if (residue_[j] == 0) continue;
      const auto& pw = t->power[(j * step) % L];
      for (unsigned i = 0; i < t->degree; ++i)
        if (pw[i]) out[i] += residue_[j] * static_cast<long>(pw[i]);
    }
    return out;
  }

  Scalar scaled(const Rational& q) const {
    if (q == 0) return Scalar(0);
    Scalar r = *this;
    if (is_rational()) {
      r.rational_ *= q;
    } else {
      for (auto& c : r.residue_) c *= q;
    }
    return r;
  }

  unsigned conductor_ = 1;
  Rational rational_ = 0;
  std::vector<Rational> residue_;
};

inline Scalar Scalar::inverse() const {
  if (is_zero()) throw InvalidArgument("inverse of zero scalar");
  if (is_rational()) return Scalar(Rational(1 / rational_));
  // Extended Euclid in Q[x]: s*a + t*Phi = g, g a nonzero constant.
  const auto tab = detail::tables(conductor_);
  detail::QPoly phi;
  for (auto v : tab->phi) phi.emplace_back(static_cast<long>(v));
  detail::QPoly r0 = phi, r1 = residue_;
  detail::trim(r1);
  detail::QPoly s0, s1{Rational(1)};
  while (r1.size() > 1) {
    auto [q, r] = detail::divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    auto s = detail::sub(s0, detail::mul(q, s1));
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r1.empty()) throw VerificationFailure("cyclotomic inverse: non-invertible residue");
  const Rational g = r1[0];
  for (auto& c : s1) c /= g;
  return from_powers(conductor_, s1);
}

inline Scalar Scalar::parse(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.rfind("zeta(", 0) != 0) return Scalar(parse_rational(s));
  const auto close = s.find(')');
  if (close == std::string::npos || close + 2 >= s.size() || s[close + 1] != ':' ||
      s[close + 2] != '[' || s.back() != ']')
    throw ParseError("malformed cyclotomic scalar '" + s + "'");
  const std::string cond = s.substr(5, close - 5);
  if (cond.empty() || !std::all_of(cond.begin(), cond.end(), ::isdigit))
    throw ParseError("malformed conductor in '" + s + "'");
  const unsigned L = static_cast<unsigned>(std::stoul(cond));
  if (L == 0) throw ParseError("conductor must be >= 1 in '" + s + "'");
  const std::string body = s.substr(close + 3, s.size() - close - 4);
  std::vector<Rational> coeffs;
  std::size_t start = 0;
  while (start <= body.size()) {
    const auto comma = body.find(',', start);
    const auto piece = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    coeffs.push_back(parse_rational(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  const unsigned degree = L == 1 ? 1 : detail::tables(L)->degree;
  if (coeffs.size() != degree)
    throw ParseError("cyclotomic scalar '" + s + "' must list " + std::to_string(degree) +
                     " coefficients");
  return from_powers(L, coeffs);
}

inline std::string to_string(const Scalar& s) { return s.str(); }

inline Scalar conj(const Scalar& s) { return s.conj(); }

inline Scalar promote(const Scalar& s, unsigned target) { return s.promote(target); }

/// Exact solve of a square rational system by Gauss-Jordan elimination with
/// scalar entries. Returns nullopt when singular.
inline std::optional<std::vector<Scalar>> solve_linear(std::vector<std::vector<Scalar>> a,
                                                       std::vector<Scalar> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    const Scalar inv = a[col][col].inverse();
    for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const Scalar f = a[r][col];
      for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
      b[r] -= f * b[col];
    }
  }
  return b;
}

inline std::optional<Scalar> Scalar::demote(unsigned target) const {
  if (target == 0 || conductor_ % target != 0)
    throw InvalidArgument("demote: " + std::to_string(target) + " does not divide conductor " +
                          std::to_string(conductor_));
  if (is_rational()) return *this;
  if (target <= 2) return std::nullopt;
  // Columns: images of 1, zeta_t, ..., zeta_t^{phi(t)-1} inside Q(zeta_L).
  const unsigned small_degree = detail::tables(target)->degree;
  const unsigned big_degree = static_cast<unsigned>(residue_.size());
  std::vector<std::vector<Rational>> cols;
  for (unsigned j = 0; j < small_degree; ++j)
    cols.push_back(root_of_unity(target, j).residue_in(conductor_));
  // Least-squares is unnecessary: the basis images are linearly independent, so
  // pick phi(t) independent rows by elimination on the overdetermined system.
  std::vector<std::vector<Rational>> aug(big_degree, std::vector<Rational>(small_degree + 1));
  for (unsigned r = 0; r < big_degree; ++r) {
    for (unsigned j = 0; j < small_degree; ++j) aug[r][j] = cols[j][r];
    aug[r][small_degree] = residue_[r];
  }
  std::size_t row = 0;
  std::vector<std::size_t> pivot_col;
  for (unsigned col = 0; col < small_degree && row < big_degree; ++col) {
    std::size_t piv = row;
    while (piv < big_degree && aug[piv][col] == 0) ++piv;
    if (piv == big_degree) continue;
    std::swap(aug[piv], aug[row]);
    const Rational inv = 1 / aug[row][col];
    for (auto& v : aug[row]) v *= inv;
    for (std::size_t r = 0; r < big_degree; ++r) {
      if (r == row || aug[r][col] == 0) continue;
      const Rational f = aug[r][col];
      for (unsigned j = 0; j <= small_degree; ++j) aug[r][j] -= f * aug[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < big_degree; ++r)
    if (aug[r][small_degree] != 0) return std::nullopt;
  std::vector<Rational> coeffs(small_degree, Rational(0));
  for (std::size_t k = 0; k < pivot_col.size(); ++k) coeffs[pivot_col[k]] = aug[k][small_degree];
  Scalar out = from_powers(target, coeffs);
  if (!(out == *this)) return std::nullopt;
  return out;
}

/// sqrt(n) inside a cyclotomic field, built from quadratic Gauss sums.
/// Returns nullopt when the needed conductor exceeds max_conductor.
inline std::optional<Scalar> cyclotomic_sqrt(unsigned n, unsigned max_conductor = 4096) {
  if (n == 0) return Scalar(0);
  unsigned square = 1, rest = n;
  for (unsigned p = 2; p * p <= rest; ++p) {
    while (rest % (p * p) == 0) {
      rest /= p * p;
      square *= p;
    }
  }
  Scalar result(static_cast<long>(square));
  unsigned m = rest;
  for (unsigned p = 2; m > 1; ++p) {
    if (m % p) continue;
    m /= p;
    Scalar root;
    if (p == 2) {
      if (8 > max_conductor) return std::nullopt;
      root = Scalar::root_of_unity(8, 1) + Scalar::root_of_unity(8, 7);
    } else {
      // g = sum_a (a/p) zeta_p^a, g^2 = (-1)^{(p-1)/2} p.
      Scalar g(0);
      for (unsigned a = 1; a < p; ++a) {
        unsigned long long pw = 1, base = a, e = (p - 1) / 2;
        while (e) {
          if (e & 1) pw = pw * base % p;
          base = base * base % p;
          e >>= 1;
        }
        g += (pw == 1 ? Scalar(1) : Scalar(-1)) * Scalar::root_of_unity(p, a);
      }
      if (p % 4 == 1) {
        if (p > max_conductor) return std::nullopt;
        root = g;
      } else {
        if (4 * p > max_conductor) return std::nullopt;
        root = -Scalar::root_of_unity(4, 1) * g;  // sqrt(p) = -i g
      }
    }
    result *= root;
  }
  return result;
}

}  // namespace symframe
