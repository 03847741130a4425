#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "pcl/behaviour.hpp"
#include "pcl/syntax.hpp"

namespace pcl {

struct Operand {
  Term term;
  Behaviour beh;
};

/// Resolves a term to its behaviour in the current approximation. The app
/// clause is the only consumer; unknown terms count as newly discovered
/// redexes and resolve to 1*bot.
using BehaviourOracle = std::function<Behaviour(const Term&)>;

/// The rule map: one clause per operation symbol, conclusions exactly as the
/// big-step rules state them. Only the clauses for (+) and app read operand
/// behaviours; app additionally pulls second-level behaviours through the
/// oracle (the left operand's function atoms applied to the right operand).
Behaviour rho(Lang lang, Sym op, std::span<const Operand> operands, const BehaviourOracle& oracle);

struct TableLimitExceeded : std::runtime_error {
  TableLimitExceeded(std::size_t demanded, std::size_t cap)
      : std::runtime_error("evaluation table cap exceeded: " + std::to_string(demanded) + " > " +
                           std::to_string(cap)),
        demanded(demanded),
        cap(cap) {}
  std::size_t demanded;
  std::size_t cap;
};

/// Demand-driven memoization of the Kleene chain gamma_0 <= gamma_1 <= ...
/// approximating the canonical model from below: gamma_0 is constantly bot
/// and gamma_{n+1}(t) applies the rule for t's head symbol to the level-n
/// behaviours of whatever the rule demands. at(n, t) is the true n-th
/// iterate on t; terms whose behaviour is never demanded are never touched,
/// which keeps evaluation lazy in discarded branches.
class Evaluator {
 public:
  explicit Evaluator(Lang lang, std::size_t term_cap = 100000);

  Lang lang() const { return lang_; }
  const Behaviour& at(int level, const Term& t);
  Behaviour evaluate(const Term& t, int iters) { return at(iters, t); }

  /// True iff some positive level computed this term's behaviour.
  bool demanded(const Term& t) const { return demanded_.count(t) > 0; }
  std::size_t demanded_count() const { return demanded_.size(); }

 private:
  Lang lang_;
  std::size_t cap_;
  Behaviour bottom_;
  std::vector<std::unordered_map<Term, Behaviour, TermHash>> levels_;
  std::unordered_map<Term, int, TermHash> demanded_;
};

/// gamma_N(term) for the language's canonical-model chain.
Behaviour evaluate(const Term& term, Lang lang, int iters, std::size_t term_cap = 100000);

inline double divergence_mass(const Behaviour& b) { return b.bottom(); }

/// A finite coalgebra approximation: the spec-level table that gamma_step
/// transforms. Entries are kept in insertion order; lookup is by term.
class EvalTable {
 public:
  static EvalTable initial(std::span<const Term> seeds, Lang lang);

  Lang lang() const { return lang_; }
  int iteration() const { return iteration_; }
  std::span<const std::pair<Term, Behaviour>> entries() const { return entries_; }
  const Behaviour* find(const Term& t) const;
  /// Terms added by the most recent step, with behaviour 1*bot.
  std::span<const Term> frontier() const { return frontier_; }

  friend EvalTable gamma_step(const EvalTable& table);

 private:
  Lang lang_ = Lang::pBCK;
  int iteration_ = 0;
  std::vector<std::pair<Term, Behaviour>> entries_;
  std::unordered_map<Term, int, TermHash> index_;
  std::vector<Term> frontier_;
};

/// One application of the rule-induced operator: every tabled term's
/// behaviour is recomputed by rho from the frozen previous table; terms the
/// rules demand but the table lacks join the next frontier at 1*bot. Bottom
/// mass never increases along a chain started from an all-bot table; a
/// violation throws.
EvalTable gamma_step(const EvalTable& table);

/// An explicit element of D({bot} + (D({bot}+Lambda^Lambda))^Lambda): each
/// function atom carries a finite application table.
struct FnAtom {
  Term tag;  // template naming the function; applications key on tag[arg]
  std::vector<std::pair<Term, Behaviour>> table;

  const Behaviour& at(const Term& arg) const;
};

struct Depth2Behaviour {
  double bottom = 0.0;
  std::vector<std::pair<FnAtom, double>> atoms;
};

/// The monadic j map: strength, then evaluation on the function summand,
/// then eta after the bottom injection, codiagonal, and multiplication.
/// Must agree with rho's app clause.
Behaviour app_via_monad(const Depth2Behaviour& Phi, const Term& s);

}  // namespace pcl
