#pragma once

// Dilation matrices, digit systems, finite symmetry groups and the group
// action on the cosets Z^d / M Z^d, with the orbit decomposition that indexes
// all the symmetric constructions.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "symframe/error.hpp"
#include "symframe/exact_scalar.hpp"
#include "symframe/int_matrix.hpp"

namespace symframe {

// ---------------------------------------------------------------------------
// Symmetry groups

class SymmetryGroup {
 public:
  static constexpr std::size_t kDefaultCap = 1024;

  SymmetryGroup() = default;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<IntMatrix>& elements() const noexcept { return elements_; }
  const IntMatrix& operator[](std::size_t i) const { return elements_[i]; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  bool is_abelian() const noexcept { return abelian_; }

  std::size_t product(std::size_t a, std::size_t b) const { return table_[a * size() + b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }

  std::optional<std::size_t> index_of(const IntMatrix& e) const {
    auto it = lookup_.find(e);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const IntMatrix& e) const { return lookup_.count(e) != 0; }

  /// Closure of the generators; the identity is element 0 and the remaining
  /// elements appear in breadth-first order of right multiplication by the
  /// generators.
  static SymmetryGroup generate(const std::vector<IntMatrix>& generators,
                                std::size_t cap = kDefaultCap, std::size_t dim_hint = 0) {
    std::size_t d = generators.empty() ? dim_hint : generators.front().dim();
    if (d == 0) throw InvalidArgument("validate_group: dimension unknown for empty generator list");
    for (const auto& g : generators) {
      if (g.dim() != d) throw InvalidArgument("validate_group: generators have different dimensions");
      if (!g.is_unimodular())
        throw InvalidArgument("validate_group: generator " + g.str() + " is not unimodular");
    }
    SymmetryGroup h;
    h.dim_ = d;
    std::deque<std::size_t> queue;
    auto add = [&](const IntMatrix& e) {
      if (h.lookup_.count(e)) return;
      if (h.elements_.size() >= cap)
        throw InvalidArgument("validate_group: closure exceeds " + std::to_string(cap) + " elements");
      h.lookup_.emplace(e, h.elements_.size());
      h.elements_.push_back(e);
      queue.push_back(h.elements_.size() - 1);
    };
    add(IntMatrix::identity(d));
    while (!queue.empty()) {
      const IntMatrix x = h.elements_[queue.front()];
      queue.pop_front();
      for (const auto& g : generators) add(x * g);
    }
    h.build_tables();
    return h;
  }

 private:
  void build_tables() {
    const std::size_t n = size();
    table_.assign(n * n, 0);
    inverse_.assign(n, 0);
    abelian_ = true;
    const IntMatrix id = IntMatrix::identity(dim_);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const auto idx = index_of(elements_[a] * elements_[b]);
        if (!idx) throw InvalidArgument("validate_group: set is not closed under multiplication");
        table_[a * n + b] = *idx;
        if (*idx == 0) inverse_[a] = b;
      }
    for (std::size_t a = 0; a < n && abelian_; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (table_[a * n + b] != table_[b * n + a]) {
          abelian_ = false;
          break;
        }
    (void)id;
  }

  std::size_t dim_ = 0;
  std::string name_ = "custom";
  std::vector<IntMatrix> elements_;
  std::map<IntMatrix, std::size_t> lookup_;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> inverse_;
  bool abelian_ = true;
};

inline SymmetryGroup validate_group(const std::vector<IntMatrix>& generators,
                                    std::size_t cap = SymmetryGroup::kDefaultCap) {
  return SymmetryGroup::generate(generators, cap);
}

namespace groups {

inline SymmetryGroup trivial(std::size_t d) {
  auto h = SymmetryGroup::generate({}, SymmetryGroup::kDefaultCap, d);
  h.set_name("trivial");
  return h;
}

/// {I, -I}.
inline SymmetryGroup id(std::size_t d) {
  auto h = SymmetryGroup::generate({IntMatrix::scalar(d, -1)});
  h.set_name("id");
  return h;
}

/// Sign flips of single coordinates (2^d elements).
inline SymmetryGroup axis(std::size_t d) {
  std::vector<IntMatrix> gens;
  for (std::size_t i = 0; i < d; ++i) {
    auto g = IntMatrix::identity(d);
    g(i, i) = -1;
    gens.push_back(g);
  }
  auto h = SymmetryGroup::generate(gens);
  h.set_name("axis");
  return h;
}

/// All signed permutation matrices (2^d d! elements).
inline SymmetryGroup full(std::size_t d) {
  std::vector<IntMatrix> gens;
  if (d == 2) {
    gens = {IntMatrix{{0, 1}, {-1, 0}}, IntMatrix{{0, 1}, {1, 0}}};
  } else {
    auto flip = IntMatrix::identity(d);
    flip(0, 0) = -1;
    gens.push_back(flip);
    for (std::size_t i = 0; i + 1 < d; ++i) {
      IntMatrix swap = IntMatrix::identity(d);
      swap(i, i) = swap(i + 1, i + 1) = 0;
      swap(i, i + 1) = swap(i + 1, i) = 1;
      gens.push_back(swap);
    }
  }
  auto h = SymmetryGroup::generate(gens);
  h.set_name("full");
  return h;
}

/// The 12-element symmetry group of the hexagonal lattice in d = 2.
inline SymmetryGroup hexagonal() {
  auto h = SymmetryGroup::generate({IntMatrix{{0, 1}, {1, 0}}, IntMatrix{{1, -1}, {1, 0}},
                                    IntMatrix::scalar(2, -1)});
  if (h.size() != 12) throw VerificationFailure("hexagonal group closure has wrong size");
  h.set_name("hexagonal");
  return h;
}

inline SymmetryGroup by_name(const std::string& name, std::size_t d) {
  if (name == "trivial") return trivial(d);
  if (name == "id") return id(d);
  if (name == "axis") return axis(d);
  if (name == "full") return full(d);
  if (name == "hexagonal") {
    if (d != 2) throw InvalidArgument("hexagonal group exists only for d = 2");
    return hexagonal();
  }
  throw InvalidArgument("unknown group name '" + name + "'");
}

}  // namespace groups

/// M^{-1} E M for every element, or nullopt when some conjugate is not an
/// integer matrix in the group.
inline std::optional<std::vector<std::size_t>> conjugation_map(const SymmetryGroup& h,
                                                               const IntMatrix& m) {
  if (m.dim() != h.dim()) throw InvalidArgument("group and dilation have different dimensions");
  const RatMatrix minv = inverse(m);
  const RatMatrix mr(m);
  std::vector<std::size_t> out(h.size());
  for (std::size_t e = 0; e < h.size(); ++e) {
    const RatMatrix c = minv * (RatMatrix(h[e]) * mr);
    if (!c.is_integral()) return std::nullopt;
    const auto idx = h.index_of(c.to_integer());
    if (!idx) return std::nullopt;
    out[e] = *idx;
  }
  return out;
}

inline bool check_dilation_compatibility(const SymmetryGroup& h, const IntMatrix& m) {
  return conjugation_map(h, m).has_value();
}

// ---------------------------------------------------------------------------
// Digits

/// Ordering key for digit representatives: smaller sup-norm first, then
/// smaller l1-norm, then lexicographically larger vectors first (so (1,0) is
/// preferred over (-1,0) and (0,1) over (0,-1)).
inline auto digit_key(const IntVec& v) {
  std::int64_t sup = 0, l1 = 0;
  for (auto x : v) {
    sup = std::max<std::int64_t>(sup, std::llabs(x));
    l1 += std::llabs(x);
  }
  return std::make_tuple(sup, l1, -v);
}

inline bool digit_less(const IntVec& a, const IntVec& b) { return digit_key(a) < digit_key(b); }

/// Canonical label of the coset v + M Z^d: adj(M) v reduced mod |det M|.
class CosetIndexer {
 public:
  CosetIndexer() = default;
  explicit CosetIndexer(const IntMatrix& m) : m_(m), adj_(m.adjugate()), det_(m.det()) {
    if (det_ == 0) throw InvalidArgument("dilation matrix is singular");
  }
  IntVec key(const IntVec& v) const {
    IntVec k = adj_ * v;
    const std::int64_t q = std::llabs(det_);
    for (auto& x : k) x = ((x % q) + q) % q;
    return k;
  }
  bool congruent(const IntVec& a, const IntVec& b) const { return key(a) == key(b); }
  /// beta with v - s = M beta; requires v and s congruent.
  IntVec quotient(const IntVec& v, const IntVec& s) const {
    IntVec t = adj_ * (v - s);
    for (auto& x : t) {
      if (x % det_ != 0) throw InvalidArgument("quotient: vectors are not congruent");
      x /= det_;
    }
    return t;
  }
  const IntMatrix& matrix() const noexcept { return m_; }
  std::int64_t det() const noexcept { return det_; }

 private:
  IntMatrix m_;
  IntMatrix adj_;
  std::int64_t det_ = 1;
};

/// A complete set of coset representatives of Z^d / M Z^d with s_0 = 0.
class DigitSystem {
 public:
  DigitSystem() = default;
  DigitSystem(const IntMatrix& m, std::vector<IntVec> digits) : m_(m), digits_(std::move(digits)), idx_(m) {
    const std::size_t count = static_cast<std::size_t>(std::llabs(m.det()));
    if (digits_.size() != count)
      throw InvalidArgument("digit system needs " + std::to_string(count) + " digits, got " +
                            std::to_string(digits_.size()));
    if (digits_.empty() || std::any_of(digits_[0].begin(), digits_[0].end(), [](auto x) { return x != 0; }))
      throw InvalidArgument("first digit must be 0");
    for (std::size_t k = 0; k < digits_.size(); ++k) {
      if (digits_[k].size() != m.dim()) throw InvalidArgument("digit has wrong dimension");
      if (!lookup_.emplace(idx_.key(digits_[k]), k).second)
        throw InvalidArgument("digits " + to_string(digits_[k]) + " are congruent modulo M");
    }
  }

  const IntMatrix& dilation() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  std::size_t size() const noexcept { return digits_.size(); }
  const std::vector<IntVec>& digits() const noexcept { return digits_; }
  const IntVec& operator[](std::size_t k) const { return digits_[k]; }
  const CosetIndexer& indexer() const noexcept { return idx_; }

  /// Index k of the digit congruent to v.
  std::size_t coset_of(const IntVec& v) const { return lookup_.at(idx_.key(v)); }

  /// alpha = M beta + s_k.
  std::pair<IntVec, std::size_t> decompose(const IntVec& alpha) const {
    const std::size_t k = coset_of(alpha);
    return {idx_.quotient(alpha, digits_[k]), k};
  }

 private:
  IntMatrix m_;
  std::vector<IntVec> digits_;
  CosetIndexer idx_;
  std::map<IntVec, std::size_t> lookup_;
};

/// Minimal-key representative of every coset, s_0 = 0 and the rest sorted by
/// the digit key.
inline DigitSystem default_digits(const IntMatrix& m) {
  if (m.det() == 0) throw InvalidArgument("default_digits: singular matrix");
  const std::size_t d = m.dim();
  const std::size_t count = static_cast<std::size_t>(std::llabs(m.det()));
  CosetIndexer idx(m);
  std::map<IntVec, IntVec> best;
  for (std::int64_t r = 0; best.size() < count; ++r) {
    // Visit the shell of sup-norm exactly r.
    IntVec v(d, -r);
    while (true) {
      std::int64_t sup = 0;
      for (auto x : v) sup = std::max<std::int64_t>(sup, std::llabs(x));
      if (sup == r) {
        auto k = idx.key(v);
        auto it = best.find(k);
        if (it == best.end()) best.emplace(k, v);
        else if (digit_less(v, it->second)) it->second = v;
      }
      std::size_t pos = 0;
      while (pos < d && v[pos] == r) v[pos++] = -r;
      if (pos == d) break;
      ++v[pos];
    }
  }
  std::vector<IntVec> digits;
  for (auto& [k, v] : best) digits.push_back(v);
  std::sort(digits.begin(), digits.end(), digit_less);
  return DigitSystem(m, std::move(digits));
}

// ---------------------------------------------------------------------------
// Centers

/// c - E c must be integral for all E; returns the first offending element.
inline std::optional<std::size_t> center_violation(const SymmetryGroup& h, const RatVec& c) {
  for (std::size_t e = 0; e < h.size(); ++e) {
    RatVec ec = RatMatrix(h[e]) * c;
    for (std::size_t i = 0; i < c.size(); ++i) ec[i] = c[i] - ec[i];
    if (!is_integral(ec)) return e;
  }
  return std::nullopt;
}

/// c - E c as an integer vector.
inline IntVec center_shift(const IntMatrix& e, const RatVec& c) {
  RatVec ec = RatMatrix(e) * c;
  for (std::size_t i = 0; i < c.size(); ++i) ec[i] = c[i] - ec[i];
  return to_integer(ec);
}

/// Symmetry center of the refinable function: (M - I)^{-1} c.
inline RatVec refinable_symmetry_center(const IntMatrix& m, const RatVec& c) {
  const IntMatrix shifted = m - IntMatrix::identity(m.dim());
  if (shifted.det() == 0) throw InvalidArgument("refinable_symmetry_center: M - I is singular");
  return solve(shifted, c);
}

/// The unique digit q with E s + c - E c congruent to q modulo M.
inline std::size_t act_on_coset(const IntMatrix& e, const IntVec& s, const DigitSystem& digits,
                                const RatVec& c) {
  return digits.coset_of(e * s + center_shift(e, c));
}

// ---------------------------------------------------------------------------
// Orbit structure

struct Orbit {
  IntVec representative;                 // s_{p,0}
  std::vector<std::size_t> stabilizer;   // element indices of H_<s_{p,0}>
  std::vector<std::size_t> transversal;  // element indices of E^{(i)}, E^{(0)} = I
  std::vector<IntVec> digits;            // s_{p,i}
  std::vector<IntVec> stabilizer_shift;  // r^F_{p,0}, aligned with stabilizer

  std::size_t size() const noexcept { return digits.size(); }
};

class OrbitStructure {
 public:
  const SymmetryGroup& group() const noexcept { return h_; }
  const IntMatrix& dilation() const noexcept { return m_; }
  const RatVec& center() const noexcept { return c_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  std::size_t channel_count() const noexcept { return flat_.size(); }
  std::size_t orbit_count() const noexcept { return orbits_.size(); }
  const std::vector<Orbit>& orbits() const noexcept { return orbits_; }
  const Orbit& orbit(std::size_t p) const { return orbits_[p]; }

  /// Digits in (p, i) order; the polyphase rows of all symmetric constructions
  /// use this ordering.
  const DigitSystem& digit_system() const noexcept { return digits_; }
  std::size_t flat_index(std::size_t p, std::size_t i) const { return offset_[p] + i; }
  std::pair<std::size_t, std::size_t> orbit_position(std::size_t k) const { return flat_[k]; }

  /// Index of M^{-1} E M in the group.
  std::size_t conjugate(std::size_t e) const { return conj_[e]; }

  /// j(p, i, K).
  std::size_t jmap(std::size_t p, std::size_t i, std::size_t k) const {
    return jmap_[flat_index(p, i) * h_.size() + k];
  }
  /// r^K_{p,i}.
  const IntVec& rvec(std::size_t p, std::size_t i, std::size_t k) const {
    return rvec_[flat_index(p, i) * h_.size() + k];
  }

  friend OrbitStructure orbit_decomposition(const SymmetryGroup& h, const IntMatrix& m, const RatVec& c);

 private:
  SymmetryGroup h_;
  IntMatrix m_;
  RatVec c_;
  std::vector<Orbit> orbits_;
  DigitSystem digits_;
  std::vector<std::size_t> offset_;
  std::vector<std::pair<std::size_t, std::size_t>> flat_;
  std::vector<std::size_t> conj_;
  std::vector<std::size_t> jmap_;
  std::vector<IntVec> rvec_;
};

namespace detail {

inline std::vector<bool> subgroup_closure(const SymmetryGroup& h, std::vector<bool> members) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < h.size(); ++a) {
      if (!members[a]) continue;
      for (std::size_t b = 0; b < h.size(); ++b) {
        if (!members[b]) continue;
        const auto c = h.product(a, b);
        if (!members[c]) {
          members[c] = true;
          changed = true;
        }
      }
    }
  }
  return members;
}

/// Every subgroup of a (small) group, each as a membership mask.
inline std::vector<std::vector<bool>> all_subgroups(const SymmetryGroup& h) {
  std::vector<bool> trivial(h.size(), false);
  trivial[0] = true;
  std::set<std::vector<bool>> seen{trivial};
  std::vector<std::vector<bool>> out{trivial};
  for (std::size_t next = 0; next < out.size(); ++next) {
    for (std::size_t g = 0; g < h.size(); ++g) {
      if (out[next][g]) continue;
      auto grown = out[next];
      grown[g] = true;
      grown = subgroup_closure(h, grown);
      if (seen.insert(grown).second) out.push_back(grown);
    }
  }
  return out;
}

inline bool is_closed(const SymmetryGroup& h, const std::vector<std::size_t>& elems) {
  std::set<std::size_t> s(elems.begin(), elems.end());
  for (auto a : elems)
    for (auto b : elems)
      if (!s.count(h.product(a, b))) return false;
  return true;
}

}  // namespace detail

/// Decomposes the digit cosets into H-orbits and renumbers the digits so that
/// s_{p,i} = E^{(i)} s_{p,0} + c - E^{(i)} c. Orbit 0 is the orbit of the zero
/// coset; the others follow by increasing size, then by the digit key of their
/// representative. Within an orbit, each coset is reached by the group element
/// giving the smallest renumbered digit. For abelian groups the transversals
/// are made closed under multiplication whenever a complement of the
/// stabilizer exists.
inline OrbitStructure orbit_decomposition(const SymmetryGroup& h, const IntMatrix& m, const RatVec& c) {
  if (h.dim() != m.dim() || c.size() != m.dim())
    throw InvalidArgument("orbit_decomposition: dimension mismatch");
  auto conj = conjugation_map(h, m);
  if (!conj)
    throw IncompatibleGroup("group '" + h.name() + "' is not a symmetry group with respect to M = " + m.str());
  if (auto bad = center_violation(h, c))
    throw InvalidArgument("center " + to_string(c) + ": c - Ec is not integral for E = " + h[*bad].str());

  OrbitStructure os;
  os.h_ = h;
  os.m_ = m;
  os.c_ = c;
  os.conj_ = *conj;
  const DigitSystem base = default_digits(m);
  const std::size_t n_cosets = base.size();
  std::vector<IntVec> shifts(h.size());
  for (std::size_t e = 0; e < h.size(); ++e) shifts[e] = center_shift(h[e], c);

  // Orbits as sets of base digit indices.
  std::vector<int> owner(n_cosets, -1);
  std::vector<std::vector<std::size_t>> raw;
  for (std::size_t k = 0; k < n_cosets; ++k) {
    if (owner[k] >= 0) continue;
    std::vector<std::size_t> members;
    for (std::size_t e = 0; e < h.size(); ++e) {
      const auto q = base.coset_of(h[e] * base[k] + shifts[e]);
      if (owner[q] < 0) {
        owner[q] = static_cast<int>(raw.size());
        members.push_back(q);
      }
    }
    std::sort(members.begin(), members.end());  // base digits are key-sorted
    raw.push_back(members);
  }
  std::stable_sort(raw.begin() + 1, raw.end(), [&](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return digit_less(base[a.front()], base[b.front()]);
  });
  // The zero coset might not be the representative of orbit 0 when c != 0;
  // it is always the first listed member since 0 has the smallest key.

  for (const auto& members : raw) {
    Orbit orb;
    orb.representative = base[members.front()];
    const IntVec& s0 = orb.representative;
    std::map<std::size_t, std::size_t> member_pos;
    for (std::size_t i = 0; i < members.size(); ++i) member_pos[members[i]] = i;

    // coset reached by each element
    std::vector<std::size_t> target(h.size());
    for (std::size_t e = 0; e < h.size(); ++e) target[e] = base.coset_of(h[e] * s0 + shifts[e]);
    for (std::size_t e = 0; e < h.size(); ++e)
      if (target[e] == members.front()) orb.stabilizer.push_back(e);

    auto renumbered = [&](std::size_t e) { return h[e] * s0 + shifts[e]; };
    // Greedy choice: per coset, the element with the smallest renumbered digit.
    std::map<std::size_t, std::size_t> choice;
    for (std::size_t e = 0; e < h.size(); ++e) {
      auto it = choice.find(target[e]);
      if (it == choice.end() || digit_less(renumbered(e), renumbered(it->second))) choice[target[e]] = e;
    }
    std::vector<std::size_t> trans;
    for (auto& [q, e] : choice) trans.push_back(e);

    if (h.is_abelian() && !detail::is_closed(h, trans)) {
      // Search complements of the stabilizer; keep the one with the smallest
      // renumbered digits.
      const std::size_t want = members.size();
      std::vector<bool> stab(h.size(), false);
      for (auto f : orb.stabilizer) stab[f] = true;
      std::optional<std::vector<std::size_t>> best;
      auto digits_of = [&](const std::vector<std::size_t>& t) {
        std::vector<IntVec> ds;
        for (auto e : t) ds.push_back(renumbered(e));
        std::sort(ds.begin(), ds.end(), digit_less);
        return ds;
      };
      for (const auto& sub : detail::all_subgroups(h)) {
        std::vector<std::size_t> elems;
        bool ok = true;
        for (std::size_t e = 0; e < h.size() && ok; ++e) {
          if (!sub[e]) continue;
          if (e != 0 && stab[e]) ok = false;
          elems.push_back(e);
        }
        if (!ok || elems.size() != want) continue;
        std::set<std::size_t> reached;
        for (auto e : elems) reached.insert(target[e]);
        if (reached.size() != want) continue;
        if (!best) {
          best = elems;
        } else {
          const auto a = digits_of(elems), b = digits_of(*best);
          if (std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), digit_less)) best = elems;
        }
      }
      if (best) trans = *best;
    }
    // Order: identity first, then by renumbered digit key.
    std::sort(trans.begin(), trans.end(), [&](std::size_t a, std::size_t b) {
      if ((a == 0) != (b == 0)) return a == 0;
      if (target[a] == members.front() && target[b] != members.front()) return true;
      if (target[b] == members.front() && target[a] != members.front()) return false;
      return digit_less(renumbered(a), renumbered(b));
    });
    if (trans.front() != 0) throw VerificationFailure("orbit transversal does not start with the identity");
    orb.transversal = trans;
    for (auto e : trans) orb.digits.push_back(renumbered(e));
    os.orbits_.push_back(std::move(orb));
  }

  // Flattened digit system in (p, i) order.
  std::vector<IntVec> flat_digits;
  for (std::size_t p = 0; p < os.orbits_.size(); ++p) {
    os.offset_.push_back(flat_digits.size());
    for (std::size_t i = 0; i < os.orbits_[p].size(); ++i) {
      flat_digits.push_back(os.orbits_[p].digits[i]);
      os.flat_.emplace_back(p, i);
    }
  }
  if (flat_digits.front() != IntVec(m.dim(), 0)) {
    // With c != 0 the zero coset's renumbered digit is still 0 because the
    // representative is 0 and E^{(0)} = I.
    throw VerificationFailure("orbit decomposition lost the zero digit");
  }
  os.digits_ = DigitSystem(m, flat_digits);

  // j-map and r-vectors.
  const std::size_t n = flat_digits.size();
  os.jmap_.assign(n * h.size(), 0);
  os.rvec_.assign(n * h.size(), IntVec());
  const CosetIndexer& idx = os.digits_.indexer();
  for (std::size_t k = 0; k < n; ++k) {
    const auto [p, i] = os.flat_[k];
    for (std::size_t e = 0; e < h.size(); ++e) {
      const IntVec image = h[e] * flat_digits[k] + shifts[e];
      const std::size_t q = os.digits_.coset_of(image);
      const auto [qp, qi] = os.flat_[q];
      if (qp != p) throw VerificationFailure("group action leaves an orbit");
      os.jmap_[k * h.size() + e] = qi;
      // K s = M r + s_j + Kc - c  <=>  M r = K s + (c - Kc) - s_j
      os.rvec_[k * h.size() + e] = idx.quotient(image, flat_digits[q]);
    }
  }
  for (std::size_t p = 0; p < os.orbits_.size(); ++p) {
    auto& orb = os.orbits_[p];
    for (auto f : orb.stabilizer) orb.stabilizer_shift.push_back(os.rvec(p, 0, f));
    if (h.size() != orb.stabilizer.size() * orb.transversal.size())
      throw VerificationFailure("orbit-stabilizer count fails for orbit " + std::to_string(p));
  }
  return os;
}

inline OrbitStructure orbit_decomposition(const SymmetryGroup& h, const IntMatrix& m) {
  return orbit_decomposition(h, m, RatVec(m.dim(), Rational(0)));
}

}  // namespace symframe
