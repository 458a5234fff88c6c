#pragma once

// Periodic filter-bank transforms over Z^d / M^J Z^d and the subdivision
// renderer. Filters stay exact until a plan is built; signals are doubles and
// subbands complex doubles (cyclotomic filters give complex outputs).
//
// One analysis level maps x on Z^d / M^j Z^d to m bands on Z^d / M^{j-1} Z^d:
//   y_nu[beta] = m sum_k conj(h~^nu_k) x[M beta + k]
// and synthesis scatters them back:
//   x[M beta + k] += h^nu_k y_nu[beta].

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "symframe/lattice.hpp"
#include "symframe/laurent.hpp"
#include "symframe/mask.hpp"

namespace symframe {

using Complex = std::complex<double>;

/// Bijection between 0..m^J-1 and representatives of Z^d / M^J Z^d:
/// index sum_j k_j m^j  <->  alpha = sum_{j<J} M^j s_{k_j}.
class LatticeCodec {
 public:
  LatticeCodec(const IntMatrix& m, unsigned levels) : LatticeCodec(default_digits(m), levels) {}
  LatticeCodec(DigitSystem digits, unsigned levels) : digits_(std::move(digits)), levels_(levels) {
    if (levels == 0) throw InvalidArgument("codec needs at least one level");
    size_ = 1;
    for (unsigned j = 0; j < levels; ++j) {
      if (size_ > (std::size_t{1} << 40) / digits_.size()) throw InvalidArgument("codec grid is too large");
      size_ *= digits_.size();
    }
    powers_.push_back(IntMatrix::identity(digits_.dim()));
    for (unsigned j = 1; j < levels; ++j) powers_.push_back(powers_.back() * digits_.dilation());
  }

  std::size_t size() const noexcept { return size_; }
  unsigned levels() const noexcept { return levels_; }
  std::size_t dim() const noexcept { return digits_.dim(); }
  const DigitSystem& digits() const noexcept { return digits_; }

  IntVec point(std::size_t index) const {
    if (index >= size_) throw InvalidArgument("codec index out of range");
    IntVec alpha(dim(), 0);
    for (unsigned j = 0; j < levels_; ++j) {
      alpha = alpha + powers_[j] * digits_[index % digits_.size()];
      index /= digits_.size();
    }
    return alpha;
  }

  /// Index of the class of an arbitrary alpha modulo M^J.
  std::size_t index(IntVec alpha) const {
    std::size_t out = 0, weight = 1;
    for (unsigned j = 0; j < levels_; ++j) {
      auto [beta, k] = digits_.decompose(alpha);
      out += k * weight;
      weight *= digits_.size();
      alpha = std::move(beta);
    }
    return out;
  }

 private:
  DigitSystem digits_;
  unsigned levels_ = 0;
  std::size_t size_ = 0;
  std::vector<IntMatrix> powers_;
};

struct PeriodicSignal {
  IntMatrix dilation;
  unsigned levels = 0;
  std::vector<double> values;  // codec order
};

struct SubbandLevel {
  std::vector<std::vector<Complex>> bands;  // channels 1..m-1
};

struct SubbandPyramid {
  IntMatrix dilation;
  unsigned levels = 0;  // J of the analysed signal
  std::vector<SubbandLevel> details;  // finest first
  std::vector<Complex> coarse;

  std::size_t sample_count() const {
    std::size_t n = coarse.size();
    for (const auto& l : details)
      for (const auto& b : l.bands) n += b.size();
    return n;
  }
};

/// A bank's filters in floating point on a shared offset list.
struct NumericBank {
  IntMatrix dilation;
  std::vector<IntVec> offsets;
  std::vector<std::vector<std::pair<std::size_t, Complex>>> primal, dual;  // (offset slot, tap)

  explicit NumericBank(const FilterBank& b) : dilation(b.dilation) {
    std::map<IntVec, std::size_t> slot;
    auto convert = [&](const LaurentPoly& t) {
      std::vector<std::pair<std::size_t, Complex>> taps;
      for (const auto& [k, v] : t.terms()) {
        auto [it, fresh] = slot.emplace(k, offsets.size());
        if (fresh) offsets.push_back(k);
        taps.emplace_back(it->second, v.to_complex());
      }
      return taps;
    };
    for (const auto& t : b.primal) primal.push_back(convert(t));
    for (const auto& t : b.dual) dual.push_back(convert(t));
  }

  std::size_t channels() const noexcept { return primal.size(); }
};

/// Precomputed stencils for a bank on grids of level 1..J.
class TransformPlan {
 public:
  TransformPlan(const FilterBank& bank, unsigned levels) : bank_(bank), levels_(levels) {
    if (levels == 0) throw InvalidArgument("transform needs J >= 1");
    const IntMatrix& m = bank.dilation;
    const DigitSystem digits = default_digits(m);
    // stencils_[j] maps (coarse index b at level j-1, offset slot u) to the fine index at level j.
    stencils_.resize(levels + 1);
    for (unsigned j = 1; j <= levels; ++j) {
      const LatticeCodec fine(digits, j);
      const std::size_t coarse_size = fine.size() / digits.size();
      auto& st = stencils_[j];
      st.resize(coarse_size * bank_.offsets.size());
      const std::optional<LatticeCodec> coarse_codec =
          j == 1 ? std::nullopt : std::optional<LatticeCodec>(LatticeCodec(digits, j - 1));
      for (std::size_t b = 0; b < coarse_size; ++b) {
        const IntVec base = coarse_codec ? m * coarse_codec->point(b) : IntVec(m.dim(), 0);
        for (std::size_t u = 0; u < bank_.offsets.size(); ++u) st[b * bank_.offsets.size() + u] = fine.index(base + bank_.offsets[u]);
      }
    }
  }

  unsigned levels() const noexcept { return levels_; }
  const NumericBank& bank() const noexcept { return bank_; }

  /// One analysis step on a level-j grid.
  std::vector<std::vector<Complex>> analyze_level(const std::vector<Complex>& x, unsigned j) const {
    const std::size_t m = bank_.channels();
    const std::size_t coarse = x.size() / m;
    const std::size_t width = bank_.offsets.size();
    const auto& st = stencils_.at(j);
    std::vector<std::vector<Complex>> out(m, std::vector<Complex>(coarse));
    for (std::size_t nu = 0; nu < m; ++nu)
      for (std::size_t b = 0; b < coarse; ++b) {
        Complex acc = 0;
        for (const auto& [u, tap] : bank_.dual[nu]) acc += std::conj(tap) * x[st[b * width + u]];
        out[nu][b] = static_cast<double>(m) * acc;
      }
    return out;
  }

  std::vector<Complex> synthesize_level(const std::vector<std::vector<Complex>>& bands, unsigned j) const {
    const std::size_t m = bank_.channels();
    const std::size_t coarse = bands.at(0).size();
    const std::size_t width = bank_.offsets.size();
    const auto& st = stencils_.at(j);
    std::vector<Complex> x(coarse * m, Complex(0));
    for (std::size_t nu = 0; nu < m; ++nu)
      for (std::size_t b = 0; b < coarse; ++b)
        for (const auto& [u, tap] : bank_.primal[nu]) x[st[b * width + u]] += tap * bands[nu][b];
    return x;
  }

 private:
  NumericBank bank_;
  unsigned levels_;
  std::vector<std::vector<std::size_t>> stencils_;
};

inline void check_signal(const PeriodicSignal& s, const TransformPlan& plan) {
  if (s.dilation != plan.bank().dilation) throw InvalidArgument("signal and bank use different dilation matrices");
  if (s.levels != plan.levels()) throw InvalidArgument("signal level does not match the transform plan");
  std::size_t expected = 1;
  for (unsigned j = 0; j < s.levels; ++j) expected *= plan.bank().channels();
  if (s.values.size() != expected) throw InvalidArgument("signal holds the wrong number of samples");
}

inline SubbandPyramid analyze(const PeriodicSignal& signal, const TransformPlan& plan, unsigned levels) {
  check_signal(signal, plan);
  if (levels > signal.levels) throw InvalidArgument("cannot analyse more levels than the signal has");
  SubbandPyramid p;
  p.dilation = signal.dilation;
  p.levels = signal.levels;
  std::vector<Complex> x(signal.values.begin(), signal.values.end());
  for (unsigned l = 0; l < levels; ++l) {
    auto bands = plan.analyze_level(x, signal.levels - l);
    x = std::move(bands[0]);
    bands.erase(bands.begin());
    p.details.push_back({std::move(bands)});
  }
  p.coarse = std::move(x);
  return p;
}

inline std::vector<Complex> synthesize_complex(const SubbandPyramid& p, const TransformPlan& plan) {
  if (p.dilation != plan.bank().dilation) throw InvalidArgument("pyramid and bank use different dilation matrices");
  if (p.levels != plan.levels()) throw InvalidArgument("pyramid level does not match the transform plan");
  std::vector<Complex> x = p.coarse;
  for (std::size_t l = p.details.size(); l-- > 0;) {
    const auto& level = p.details[l];
    if (level.bands.size() + 1 != plan.bank().channels())
      throw InvalidArgument("pyramid has the wrong number of subbands for this bank");
    std::vector<std::vector<Complex>> bands{x};
    for (const auto& b : level.bands) {
      if (b.size() != x.size()) throw InvalidArgument("subband sizes are inconsistent");
      bands.push_back(b);
    }
    x = plan.synthesize_level(bands, static_cast<unsigned>(p.levels - l));
  }
  return x;
}

/// Real part of the reconstruction; the imaginary part is round-off for real input.
inline PeriodicSignal synthesize(const SubbandPyramid& p, const TransformPlan& plan) {
  const auto x = synthesize_complex(p, plan);
  PeriodicSignal s;
  s.dilation = p.dilation;
  s.levels = p.levels;
  s.values.reserve(x.size());
  for (const auto& v : x) s.values.push_back(v.real());
  return s;
}

inline SubbandPyramid analyze(const PeriodicSignal& signal, const FilterBank& bank, unsigned levels) {
  return analyze(signal, TransformPlan(bank, signal.levels), levels);
}

inline PeriodicSignal synthesize(const SubbandPyramid& p, const FilterBank& bank) {
  return synthesize(p, TransformPlan(bank, p.levels));
}

// ---------------------------------------------------------------------------
// Subdivision

/// c^{(j+1)}_alpha = m sum_beta h_{alpha - M beta} c^{(j)}_beta from c^{(0)} = delta.
/// Sample alpha of iterate J sits at M^{-J} alpha.
template <class T>
struct Subdivision {
  IntMatrix dilation;
  unsigned levels = 0;
  std::map<IntVec, T> samples;

  RatVec position(const IntVec& alpha) const {
    RatVec x = to_rational(alpha);
    const RatMatrix minv = inverse(dilation);
    for (unsigned j = 0; j < levels; ++j) x = minv * x;
    return x;
  }
};

namespace detail {

template <class T>
T from_scalar(const Scalar& s) {
  if constexpr (std::is_same_v<T, Scalar>) {
    return s;
  } else if constexpr (std::is_same_v<T, Complex>) {
    return s.to_complex();
  } else {
    return s.to_complex().real();
  }
}

}  // namespace detail

template <class T>
Subdivision<T> subdivide(const LaurentPoly& mask, const IntMatrix& m, unsigned levels) {
  const T scale = detail::from_scalar<T>(Scalar(static_cast<long>(std::llabs(m.det()))));
  std::vector<std::pair<IntVec, T>> taps;
  for (const auto& [k, v] : mask.terms()) taps.emplace_back(k, scale * detail::from_scalar<T>(v));
  Subdivision<T> out;
  out.dilation = m;
  out.samples.emplace(IntVec(m.dim(), 0), detail::from_scalar<T>(Scalar(1)));
  for (unsigned j = 0; j < levels; ++j) {
    std::map<IntVec, T> next;
    for (const auto& [beta, c] : out.samples) {
      const IntVec base = m * beta;
      for (const auto& [k, h] : taps) {
        auto [it, fresh] = next.try_emplace(base + k, h * c);
        if (!fresh) it->second = it->second + h * c;
      }
    }
    std::erase_if(next, [](const auto& kv) { return kv.second == T(0); });
    out.samples = std::move(next);
    out.levels = j + 1;
  }
  return out;
}

inline Subdivision<double> render_refinable(const Mask& m0, unsigned levels) {
  if (levels == 0) throw InvalidArgument("render needs at least one iteration");
  return subdivide<double>(m0.poly, m0.dilation, levels);
}

inline Subdivision<Scalar> render_refinable_exact(const Mask& m0, unsigned levels) {
  if (levels == 0) throw InvalidArgument("render needs at least one iteration");
  return subdivide<Scalar>(m0.poly, m0.dilation, levels);
}

/// m^{-J} sum_alpha c^{(J)}_alpha, which is 1 for every mask with m0(0) = 1.
inline double normalized_mass(const Subdivision<double>& s) {
  double sum = 0;
  for (const auto& [k, v] : s.samples) sum += v;
  return sum / std::pow(static_cast<double>(std::llabs(s.dilation.det())), s.levels);
}

inline Scalar normalized_mass(const Subdivision<Scalar>& s) {
  Scalar sum(0);
  for (const auto& [k, v] : s.samples) sum += v;
  BigInt total = 1;
  for (unsigned j = 0; j < s.levels; ++j) total *= static_cast<long>(std::llabs(s.dilation.det()));
  return sum * Scalar(Rational(BigInt(1), total));
}

/// max over classes alpha mod M^J of |sum_gamma c^{(J)}_{alpha + M^J gamma} - 1|.
inline double partition_of_unity_error(const Subdivision<double>& s) {
  if (s.levels == 0) return std::abs(s.samples.begin()->second - 1.0);
  const LatticeCodec codec(s.dilation, s.levels);
  std::vector<double> sums(codec.size(), 0.0);
  for (const auto& [k, v] : s.samples) sums[codec.index(k)] += v;
  double err = 0;
  for (double v : sums) err = std::max(err, std::abs(v - 1.0));
  return err;
}

}  // namespace symframe
