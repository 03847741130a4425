#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "pcl/behaviour.hpp"
#include "pcl/syntax.hpp"

namespace pcl {

/// Truncated addition on [0,1], the quantale tensor.
inline double truncated_add(double a, double b) { return std::min(a + b, 1.0); }

/// Finite ordered universe of closed terms with index lookup.
class Universe {
 public:
  explicit Universe(std::vector<Term> terms);
  int size() const { return static_cast<int>(terms_.size()); }
  const Term& at(int i) const { return terms_[static_cast<size_t>(i)]; }
  std::span<const Term> terms() const { return terms_; }
  std::optional<int> find(const Term& t) const;
  int require(const Term& t) const;

 private:
  std::vector<Term> terms_;
  std::unordered_map<Term, int, TermHash> index_;
};

using UniversePtr = std::shared_ptr<const Universe>;

/// A [0,1]-valued square matrix over a universe of terms. Ordinary relations
/// are the {0,1}-valued special case. The fiber order is the REVERSED
/// pointwise order: smaller distances are larger conformances, so joins are
/// pointwise minima and meets pointwise maxima. That convention is fixed
/// here once; every lattice-flavoured helper below follows it.
class FuzzyRel {
 public:
  FuzzyRel(UniversePtr universe, Eigen::MatrixXd m);

  static FuzzyRel constant(UniversePtr universe, double v);
  /// The quantale unit: 0 on the diagonal, 1 off it (the identity relation).
  static FuzzyRel identity(UniversePtr universe);

  const Eigen::MatrixXd& matrix() const { return m_; }
  double at(int i, int j) const { return m_(i, j); }
  const UniversePtr& universe() const { return u_; }
  int size() const { return static_cast<int>(m_.rows()); }
  bool is_boolean() const;
  bool same_universe(const FuzzyRel& other) const;

 private:
  UniversePtr u_;
  Eigen::MatrixXd m_;
};

/// (d . e)(x,y) = inf_z { d(x,z) [+] e(z,y) } with truncated addition.
FuzzyRel compose(const FuzzyRel& d, const FuzzyRel& e);
/// d°(x,y) = d(y,x).
FuzzyRel reverse(const FuzzyRel& d);
/// x+ = join of all n-fold composites, n >= 1; equals truncated-addition
/// shortest paths, and is min-plus idempotent: compose(x+, x+) = x+.
FuzzyRel transitive_closure(const FuzzyRel& d);
/// Fiber join (pointwise numeric min) and meet (pointwise max).
FuzzyRel fiber_join(const FuzzyRel& a, const FuzzyRel& b);
FuzzyRel fiber_meet(const FuzzyRel& a, const FuzzyRel& b);
/// Reindexing (f,g)*d(x,x') = d(f x, g x') along index maps into d's universe.
Eigen::MatrixXd reindex(const Eigen::MatrixXd& d, std::span<const int> f, std::span<const int> g);

/// Lifting of {bot}+(-): row/column 0 is bot, with cost 0 out of bot and
/// cost 1 into it.
Eigen::MatrixXd bot_lift(const Eigen::MatrixXd& d);

using TermResolver = std::function<int(const Term&)>;
TermResolver universe_resolver(const UniversePtr& u);

/// Defect of joint non-expansivity of the pair of templates (f,g), measured
/// over the argument set A (indices into d_arg's universe):
///   max over (x,x') in A^2 of max(0, d_res(f[x], g[x']) - d_arg(x,x')).
/// Instantiations are mapped into d_res's universe by `resolve`; an
/// instantiation outside that universe is an error.
double hom_defect(const FuzzyRel& d_arg, const FuzzyRel& d_res, const Term& f, const Term& g,
                  std::span<const int> arg_set, const TermResolver& resolve);
double hom_defect(const FuzzyRel& d, const Term& f, const Term& g, std::span<const int> arg_set);

/// One-layer signature application with operands drawn from a universe.
struct OneLayer {
  Sym op;
  std::vector<int> args;
};

/// Signature liftings: equal head symbols compare argument tuples by
/// truncated sum (congruence bound d(f(..),f(..)) <= sum_i d(a_i,a_i')) or
/// by maximum; distinct heads are at distance 1.
double sigma_lift_sum(const FuzzyRel& d, const OneLayer& s, const OneLayer& t);
double sigma_lift_max(const FuzzyRel& d, const OneLayer& s, const OneLayer& t);

/// A tree over the signature whose leaves are universe members or the hole:
/// an element of Sigma*(U + hole) with universe members treated atomically.
class StarTerm {
 public:
  static StarTerm leaf(int universe_index);
  static StarTerm hole();
  static StarTerm node(Sym op, std::vector<StarTerm> children);

  bool is_leaf() const { return leaf_ >= 0; }
  bool is_hole() const { return hole_; }
  int leaf_index() const { return leaf_; }
  Sym op() const { return op_; }
  std::span<const StarTerm> children() const { return children_; }

  /// Replaces every hole by the given universe leaf.
  StarTerm plug(int universe_index) const;

 private:
  StarTerm() = default;
  bool hole_ = false;
  int leaf_ = -1;
  Sym op_ = Sym::Hole;
  std::vector<StarTerm> children_;
};

/// Free-algebra lifting specialized to the sum lifting: identical tree
/// shapes compare by the truncated sum of d over matched leaves (hole
/// matches hole at cost 0); any shape mismatch costs 1.
double term_lift_sum(const FuzzyRel& d, const StarTerm& a, const StarTerm& b);

/// Hom-defect over Sigma*-valued templates: the result metric is
/// term_lift_sum after plugging arguments from A into the holes.
double star_hom_defect(const FuzzyRel& d, const StarTerm& a, const StarTerm& b,
                       std::span<const int> arg_set);

/// Composite behaviour lifting D-bar of (hom)_bot: Wasserstein distance
/// between behaviours under the cost matrix with bot rows 0, bot columns 1
/// and hom_defect between function templates.
double behaviour_distance(const FuzzyRel& d_arg, const FuzzyRel& d_res, const Behaviour& phi,
                          const Behaviour& psi, std::span<const int> arg_set,
                          const TermResolver& resolve);
double behaviour_distance(const FuzzyRel& d, const Behaviour& phi, const Behaviour& psi,
                          std::span<const int> arg_set);

/// CSV round-trip for fuzzy relations: header row/column of printed terms,
/// exact {0,1} entries printed as integers.
std::string fuzzy_rel_to_csv(const FuzzyRel& d);
FuzzyRel fuzzy_rel_from_csv(const std::string& csv, Lang lang);

}  // namespace pcl
