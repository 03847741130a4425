#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pcl {

inline constexpr double kDistNormTol = 1e-12;

/// Finitely supported probability distribution over X. Atoms are kept
/// deduplicated and sorted (X must be totally ordered via <); probabilities
/// are strictly positive and sum to 1 within kDistNormTol.
template <class X>
class Dist {
 public:
  using Atom = X;
  using Entry = std::pair<X, double>;

  explicit Dist(std::vector<Entry> entries) {
    double total = 0.0;
    for (const Entry& e : entries) {
      if (e.second < 0.0) throw std::invalid_argument("Dist: negative probability");
      total += e.second;
    }
    if (std::abs(total - 1.0) > kDistNormTol)
      throw std::invalid_argument("Dist: probabilities sum to " + std::to_string(total));
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (Entry& e : entries) {
      if (e.second == 0.0) continue;
      if (!atoms_.empty() && atoms_.back().first == e.first)
        atoms_.back().second += e.second;
      else
        atoms_.push_back(std::move(e));
    }
  }

  static Dist dirac(X x) { return Dist({{std::move(x), 1.0}}); }

  std::span<const Entry> atoms() const { return atoms_; }
  size_t support_size() const { return atoms_.size(); }

  double mass(const X& x) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                               [](const Entry& e, const X& v) { return e.first < v; });
    return (it != atoms_.end() && it->first == x) ? it->second : 0.0;
  }

  template <class F>
  auto map(F&& f) const {
    using Y = decltype(f(std::declval<const X&>()));
    std::vector<typename Dist<Y>::Entry> out;
    out.reserve(atoms_.size());
    for (const Entry& e : atoms_) out.push_back({f(e.first), e.second});
    return Dist<Y>(std::move(out));
  }

  friend bool operator==(const Dist& a, const Dist& b) { return a.atoms_ == b.atoms_; }
  friend bool operator<(const Dist& a, const Dist& b) { return a.atoms_ < b.atoms_; }

 private:
  std::vector<Entry> atoms_;
};

/// p*phi + (1-p)*psi.
template <class X>
Dist<X> convex(double p, const Dist<X>& phi, const Dist<X>& psi) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("convex: p outside [0,1]");
  std::vector<typename Dist<X>::Entry> out;
  for (const auto& e : phi.atoms()) out.push_back({e.first, p * e.second});
  for (const auto& e : psi.atoms()) out.push_back({e.first, (1.0 - p) * e.second});
  return Dist<X>(std::move(out));
}

/// Monad multiplication: mass(x) = sum_i p_i * phi_i(x).
template <class X>
Dist<X> flatten(const Dist<Dist<X>>& dd) {
  std::vector<typename Dist<X>::Entry> out;
  for (const auto& outer : dd.atoms())
    for (const auto& inner : outer.first.atoms())
      out.push_back({inner.first, outer.second * inner.second});
  return Dist<X>(std::move(out));
}

/// Right strength: pairs every atom with y, probabilities unchanged.
template <class X, class Y>
Dist<std::pair<X, Y>> strength(const Dist<X>& phi, Y y) {
  std::vector<typename Dist<std::pair<X, Y>>::Entry> out;
  out.reserve(phi.atoms().size());
  for (const auto& e : phi.atoms()) out.push_back({{e.first, y}, e.second});
  return Dist<std::pair<X, Y>>(std::move(out));
}

}  // namespace pcl
