#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pcl/dist.hpp"
#include "pcl/syntax.hpp"

namespace pcl {

/// One element of {bot} + Lambda^Lambda: divergence or a syntactic function
/// value represented as a template (the hole is the formal parameter).
struct BAtom {
  std::optional<Term> fn;  // nullopt = bot

  bool is_bottom() const { return !fn.has_value(); }

  friend bool operator==(const BAtom& a, const BAtom& b) { return a.fn == b.fn; }
  friend bool operator<(const BAtom& a, const BAtom& b) {
    if (!a.fn) return b.fn.has_value();
    if (!b.fn) return false;
    return *a.fn < *b.fn;
  }
};

/// A finitely supported distribution over {bot} + templates; one element of
/// B(Lambda,Lambda) = D({bot} + Lambda^Lambda).
class Behaviour {
 public:
  Behaviour() : dist_(Dist<BAtom>::dirac(BAtom{})) {}
  explicit Behaviour(Dist<BAtom> d) : dist_(std::move(d)) {}
  Behaviour(double bottom, std::vector<std::pair<Term, double>> funcs)
      : dist_(make(bottom, std::move(funcs))) {}

  static Behaviour dirac_bottom() { return Behaviour(); }
  static Behaviour dirac_fn(Term tpl) {
    return Behaviour(Dist<BAtom>::dirac(BAtom{std::move(tpl)}));
  }

  const Dist<BAtom>& dist() const { return dist_; }
  double bottom() const { return dist_.mass(BAtom{}); }
  double fn_mass(const Term& tpl) const { return dist_.mass(BAtom{tpl}); }

  /// Function atoms only, in canonical order.
  std::vector<std::pair<Term, double>> funcs() const {
    std::vector<std::pair<Term, double>> out;
    for (const auto& e : dist_.atoms())
      if (e.first.fn) out.push_back({*e.first.fn, e.second});
    return out;
  }

  friend bool operator==(const Behaviour& a, const Behaviour& b) { return a.dist_ == b.dist_; }
  friend bool operator!=(const Behaviour& a, const Behaviour& b) { return !(a == b); }
  friend bool operator<(const Behaviour& a, const Behaviour& b) { return a.dist_ < b.dist_; }

 private:
  static Dist<BAtom> make(double bottom, std::vector<std::pair<Term, double>> funcs) {
    std::vector<Dist<BAtom>::Entry> entries;
    entries.reserve(funcs.size() + 1);
    entries.push_back({BAtom{}, bottom});
    for (auto& [tpl, p] : funcs) entries.push_back({BAtom{std::move(tpl)}, p});
    return Dist<BAtom>(std::move(entries));
  }

  Dist<BAtom> dist_;
};

inline Behaviour convex(double p, const Behaviour& phi, const Behaviour& psi) {
  return Behaviour(convex(p, phi.dist(), psi.dist()));
}

/// Largest absolute mass difference over the union of the supports.
double max_mass_diff(const Behaviour& a, const Behaviour& b);

/// Pointwise DCPO order on D({bot}+X): a(f) <= b(f) for every function atom.
bool dcpo_leq(const Behaviour& a, const Behaviour& b, double tol = 1e-12);

}  // namespace pcl
