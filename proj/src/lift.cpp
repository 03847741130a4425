#include "pcl/lift.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pcl/wasserstein.hpp"

namespace pcl {

Universe::Universe(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (int i = 0; i < static_cast<int>(terms_.size()); ++i) {
    const Term& t = terms_[static_cast<size_t>(i)];
    if (!t.is_closed())
      throw std::invalid_argument("universe members must be closed: " + print_term(t));
    if (!index_.emplace(t, i).second)
      throw std::invalid_argument("duplicate universe member: " + print_term(t));
  }
}

std::optional<int> Universe::find(const Term& t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Universe::require(const Term& t) const {
  auto it = index_.find(t);
  if (it == index_.end())
    throw std::out_of_range("term not in universe: " + print_term(t));
  return it->second;
}

FuzzyRel::FuzzyRel(UniversePtr universe, Eigen::MatrixXd m) : u_(std::move(universe)), m_(std::move(m)) {
  if (!u_) throw std::invalid_argument("FuzzyRel: null universe");
  if (m_.rows() != u_->size() || m_.cols() != u_->size())
    throw std::invalid_argument("FuzzyRel: matrix shape does not match universe");
  if (m_.size() > 0 && (m_.minCoeff() < 0.0 || m_.maxCoeff() > 1.0))
    throw std::invalid_argument("FuzzyRel: entries outside [0,1]");
}

FuzzyRel FuzzyRel::constant(UniversePtr universe, double v) {
  int n = universe->size();
  return FuzzyRel(std::move(universe), Eigen::MatrixXd::Constant(n, n, v));
}

FuzzyRel FuzzyRel::identity(UniversePtr universe) {
  int n = universe->size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n);
  return FuzzyRel(std::move(universe), std::move(m));
}

bool FuzzyRel::is_boolean() const {
  for (int i = 0; i < m_.rows(); ++i)
    for (int j = 0; j < m_.cols(); ++j)
      if (m_(i, j) != 0.0 && m_(i, j) != 1.0) return false;
  return true;
}

bool FuzzyRel::same_universe(const FuzzyRel& other) const {
  if (u_ == other.u_) return true;
  return std::equal(u_->terms().begin(), u_->terms().end(), other.u_->terms().begin(),
                    other.u_->terms().end());
}

namespace {

void check_same_universe(const FuzzyRel& a, const FuzzyRel& b, const char* what) {
  if (!a.same_universe(b)) throw std::invalid_argument(std::string(what) + ": universe mismatch");
}

Eigen::MatrixXd min_plus_product(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double best = 1.0;  // truncated sums never exceed 1
      for (int k = 0; k < n; ++k) best = std::min(best, a(i, k) + b(k, j));
      out(i, j) = best;
    }
  return out;
}

}  // namespace

FuzzyRel compose(const FuzzyRel& d, const FuzzyRel& e) {
  check_same_universe(d, e, "compose");
  return FuzzyRel(d.universe(), min_plus_product(d.matrix(), e.matrix()));
}

FuzzyRel reverse(const FuzzyRel& d) { return FuzzyRel(d.universe(), d.matrix().transpose()); }

FuzzyRel transitive_closure(const FuzzyRel& d) {
  Eigen::MatrixXd m = d.matrix();
  const int n = static_cast<int>(m.rows());
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = std::min(m(i, j), std::min(m(i, k) + m(k, j), 1.0));
  return FuzzyRel(d.universe(), std::move(m));
}

FuzzyRel fiber_join(const FuzzyRel& a, const FuzzyRel& b) {
  check_same_universe(a, b, "fiber_join");
  return FuzzyRel(a.universe(), a.matrix().cwiseMin(b.matrix()));
}

FuzzyRel fiber_meet(const FuzzyRel& a, const FuzzyRel& b) {
  check_same_universe(a, b, "fiber_meet");
  return FuzzyRel(a.universe(), a.matrix().cwiseMax(b.matrix()));
}

Eigen::MatrixXd reindex(const Eigen::MatrixXd& d, std::span<const int> f, std::span<const int> g) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(f.size()), static_cast<Eigen::Index>(g.size()));
  for (size_t i = 0; i < f.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d(f[i], g[j]);
  return out;
}

Eigen::MatrixXd bot_lift(const Eigen::MatrixXd& d) {
  const int n = static_cast<int>(d.rows());
  Eigen::MatrixXd out(n + 1, n + 1);
  out.row(0).setZero();
  out.col(0).setOnes();
  out(0, 0) = 0.0;
  out.block(1, 1, n, n) = d;
  return out;
}

TermResolver universe_resolver(const UniversePtr& u) {
  return [u](const Term& t) { return u->require(t); };
}

double hom_defect(const FuzzyRel& d_arg, const FuzzyRel& d_res, const Term& f, const Term& g,
                  std::span<const int> arg_set, const TermResolver& resolve) {
  // The instantiation of a template does not depend on the argument when it
  // has no hole; cache resolved indices per argument.
  std::vector<int> f_at(arg_set.size()), g_at(arg_set.size());
  for (size_t a = 0; a < arg_set.size(); ++a) {
    const Term& x = d_arg.universe()->at(arg_set[a]);
    f_at[a] = resolve(instantiate(f, x));
    g_at[a] = resolve(instantiate(g, x));
  }
  double defect = 0.0;
  for (size_t a = 0; a < arg_set.size(); ++a)
    for (size_t b = 0; b < arg_set.size(); ++b) {
      double gap = d_res.at(f_at[a], g_at[b]) - d_arg.at(arg_set[a], arg_set[b]);
      defect = std::max(defect, gap);
    }
  return defect;
}

double hom_defect(const FuzzyRel& d, const Term& f, const Term& g, std::span<const int> arg_set) {
  return hom_defect(d, d, f, g, arg_set, universe_resolver(d.universe()));
}

namespace {

double tuple_lift(const FuzzyRel& d, const OneLayer& s, const OneLayer& t, bool sum) {
  if (s.op != t.op) return 1.0;
  if (s.args.size() != t.args.size()) return 1.0;
  double acc = 0.0;
  for (size_t i = 0; i < s.args.size(); ++i) {
    double v = d.at(s.args[i], t.args[i]);
    acc = sum ? truncated_add(acc, v) : std::max(acc, v);
  }
  return acc;
}

}  // namespace

double sigma_lift_sum(const FuzzyRel& d, const OneLayer& s, const OneLayer& t) {
  return tuple_lift(d, s, t, true);
}

double sigma_lift_max(const FuzzyRel& d, const OneLayer& s, const OneLayer& t) {
  return tuple_lift(d, s, t, false);
}

StarTerm StarTerm::leaf(int universe_index) {
  StarTerm t;
  t.leaf_ = universe_index;
  return t;
}

StarTerm StarTerm::hole() {
  StarTerm t;
  t.hole_ = true;
  return t;
}

StarTerm StarTerm::node(Sym op, std::vector<StarTerm> children) {
  if (static_cast<int>(children.size()) != sym_arity(op))
    throw std::invalid_argument("StarTerm: arity mismatch");
  StarTerm t;
  t.op_ = op;
  t.children_ = std::move(children);
  return t;
}

StarTerm StarTerm::plug(int universe_index) const {
  if (hole_) return leaf(universe_index);
  if (is_leaf()) return *this;
  std::vector<StarTerm> kids;
  kids.reserve(children_.size());
  for (const StarTerm& c : children_) kids.push_back(c.plug(universe_index));
  return node(op_, std::move(kids));
}

double term_lift_sum(const FuzzyRel& d, const StarTerm& a, const StarTerm& b) {
  if (a.is_hole() || b.is_hole()) return a.is_hole() && b.is_hole() ? 0.0 : 1.0;
  if (a.is_leaf() || b.is_leaf()) {
    if (!(a.is_leaf() && b.is_leaf())) return 1.0;
    return d.at(a.leaf_index(), b.leaf_index());
  }
  if (a.op() != b.op()) return 1.0;
  double acc = 0.0;
  for (size_t i = 0; i < a.children().size(); ++i)
    acc = truncated_add(acc, term_lift_sum(d, a.children()[i], b.children()[i]));
  return acc;
}

double star_hom_defect(const FuzzyRel& d, const StarTerm& a, const StarTerm& b,
                       std::span<const int> arg_set) {
  double defect = 0.0;
  for (int x : arg_set)
    for (int y : arg_set)
      defect = std::max(defect, term_lift_sum(d, a.plug(x), b.plug(y)) - d.at(x, y));
  return defect;
}

double behaviour_distance(const FuzzyRel& d_arg, const FuzzyRel& d_res, const Behaviour& phi,
                          const Behaviour& psi, std::span<const int> arg_set,
                          const TermResolver& resolve) {
  const auto& pa = phi.dist().atoms();
  const auto& qa = psi.dist().atoms();
  const int n = static_cast<int>(pa.size());
  const int m = static_cast<int>(qa.size());
  Eigen::VectorXd p(n), q(m);
  Eigen::MatrixXd c(n, m);
  for (int i = 0; i < n; ++i) p[i] = pa[static_cast<size_t>(i)].second;
  for (int j = 0; j < m; ++j) q[j] = qa[static_cast<size_t>(j)].second;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const BAtom& x = pa[static_cast<size_t>(i)].first;
      const BAtom& y = qa[static_cast<size_t>(j)].first;
      if (x.is_bottom())
        c(i, j) = 0.0;
      else if (y.is_bottom())
        c(i, j) = 1.0;
      else
        c(i, j) = hom_defect(d_arg, d_res, *x.fn, *y.fn, arg_set, resolve);
    }
  return transport_value(p, q, c);
}

double behaviour_distance(const FuzzyRel& d, const Behaviour& phi, const Behaviour& psi,
                          std::span<const int> arg_set) {
  return behaviour_distance(d, d, phi, psi, arg_set, universe_resolver(d.universe()));
}

// --- CSV -------------------------------------------------------------------

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string format_entry(double v) {
  if (v == 0.0) return "0";
  if (v == 1.0) return "1";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

std::string fuzzy_rel_to_csv(const FuzzyRel& d) {
  std::string out = "term";
  for (const Term& t : d.universe()->terms()) out += "," + csv_quote(print_term(t));
  out += '\n';
  for (int i = 0; i < d.size(); ++i) {
    out += csv_quote(print_term(d.universe()->at(i)));
    for (int j = 0; j < d.size(); ++j) out += "," + format_entry(d.at(i, j));
    out += '\n';
  }
  return out;
}

FuzzyRel fuzzy_rel_from_csv(const std::string& csv, Lang lang) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("fuzzy_rel_from_csv: empty input");
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2) throw std::invalid_argument("fuzzy_rel_from_csv: missing header terms");
  std::vector<Term> terms;
  for (size_t k = 1; k < header.size(); ++k) terms.push_back(parse_term(header[k], lang));
  const int n = static_cast<int>(terms.size());
  auto universe = std::make_shared<const Universe>(std::move(terms));
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw std::invalid_argument("fuzzy_rel_from_csv: missing row " + std::to_string(i));
    std::vector<std::string> cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != n + 1)
      throw std::invalid_argument("fuzzy_rel_from_csv: row " + std::to_string(i) +
                                  " has wrong cell count");
    if (universe->require(parse_term(cells[0], lang)) != i)
      throw std::invalid_argument("fuzzy_rel_from_csv: row order differs from header order");
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      auto& cell = cells[static_cast<size_t>(j + 1)];
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc{})
        throw std::invalid_argument("fuzzy_rel_from_csv: bad number '" + cell + "'");
      m(i, j) = v;
    }
  }
  return FuzzyRel(std::move(universe), std::move(m));
}

}  // namespace pcl
