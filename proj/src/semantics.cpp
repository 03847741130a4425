#include "pcl/semantics.hpp"

#include <algorithm>
#include <cmath>

namespace pcl {

namespace {

Term hole() { return Term::hole(); }

Behaviour dirac_template(Term tpl) { return Behaviour::dirac_fn(std::move(tpl)); }

void check_operands(Sym op, std::span<const Operand> operands) {
  if (static_cast<int>(operands.size()) != sym_arity(op))
    throw std::invalid_argument("rho: operand count does not match arity of " +
                                std::string(sym_name(op)));
}

}  // namespace

Behaviour rho(Lang lang, Sym op, std::span<const Operand> operands, const BehaviourOracle& oracle) {
  if (!in_signature(op, lang))
    throw std::invalid_argument("rho: symbol " + std::string(sym_name(op)) + " is not in " +
                                lang_name(lang));
  check_operands(op, operands);
  switch (op) {
    case Sym::S:
      return dirac_template(Term(Sym::Sp, {hole()}));
    case Sym::Sp:
      return dirac_template(Term(Sym::Spp, {operands[0].term, hole()}));
    case Sym::Spp:  // u |-> (t u)(s u); the only non-affine conclusion
      return dirac_template(Term::app(Term::app(operands[0].term, hole()),
                                      Term::app(operands[1].term, hole())));
    case Sym::B:
      return dirac_template(Term(Sym::Bp, {hole()}));
    case Sym::Bp:
      return dirac_template(Term(Sym::Bpp, {operands[0].term, hole()}));
    case Sym::Bpp:  // u |-> t (s u)
      return dirac_template(Term::app(operands[0].term, Term::app(operands[1].term, hole())));
    case Sym::C:
      return dirac_template(Term(Sym::Cp, {hole()}));
    case Sym::Cp:
      return dirac_template(Term(Sym::Cpp, {operands[0].term, hole()}));
    case Sym::Cpp:  // u |-> (t u) s
      return dirac_template(Term::app(Term::app(operands[0].term, hole()), operands[1].term));
    case Sym::K:
      return dirac_template(Term(Sym::Kp, {hole()}));
    case Sym::Kp:  // s |-> t, a constant template
      return dirac_template(operands[0].term);
    case Sym::I:
      return dirac_template(hole());
    case Sym::Omega:
      return Behaviour::dirac_bottom();
    case Sym::Choice:
      return convex(0.5, operands[0].beh, operands[1].beh);
    case Sym::App: {
      // t s with t's behaviour p*bot + sum_i p_i*f_i: pass the bottom mass
      // through and flatten the behaviours of the instantiations f_i[s].
      const Behaviour& phi = operands[0].beh;
      const Term& s = operands[1].term;
      double bottom = phi.bottom();
      std::vector<std::pair<Term, double>> funcs;
      for (const auto& [f, p] : phi.funcs()) {
        Behaviour inner = oracle(instantiate(f, s));
        bottom += p * inner.bottom();
        for (const auto& [g, pj] : inner.funcs()) funcs.push_back({g, p * pj});
      }
      return Behaviour(bottom, std::move(funcs));
    }
    default:
      throw std::invalid_argument("rho: the hole has no rule");
  }
}

// --- Evaluator ---------------------------------------------------------------

Evaluator::Evaluator(Lang lang, std::size_t term_cap) : lang_(lang), cap_(term_cap) {}

const Behaviour& Evaluator::at(int level, const Term& t) {
  if (level < 0) throw std::invalid_argument("Evaluator::at: negative level");
  if (!t.is_closed()) throw std::invalid_argument("Evaluator::at: open term " + print_term(t));
  if (level == 0) return bottom_;
  if (levels_.size() < static_cast<size_t>(level)) levels_.resize(static_cast<size_t>(level));
  auto& memo = levels_[static_cast<size_t>(level - 1)];
  if (auto it = memo.find(t); it != memo.end()) return it->second;

  if (demanded_.emplace(t, level).second && demanded_.size() > cap_)
    throw TableLimitExceeded(demanded_.size(), cap_);

  std::vector<Operand> operands;
  operands.reserve(t.args().size());
  for (const Term& a : t.args()) {
    // Only the clauses for (+) and app read operand behaviours; fetching
    // them lazily keeps K'-discarded branches and app arguments unevaluated.
    if (t.op() == Sym::Choice || (t.op() == Sym::App && operands.empty()))
      operands.push_back({a, at(level - 1, a)});
    else
      operands.push_back({a, Behaviour::dirac_bottom()});
  }
  BehaviourOracle oracle = [this, level](const Term& u) { return at(level - 1, u); };
  Behaviour b = rho(lang_, t.op(), operands, oracle);
  auto [it, fresh] = levels_[static_cast<size_t>(level - 1)].emplace(t, std::move(b));
  (void)fresh;
  return it->second;
}

Behaviour evaluate(const Term& term, Lang lang, int iters, std::size_t term_cap) {
  Evaluator ev(lang, term_cap);
  return ev.evaluate(term, iters);
}

// --- EvalTable ---------------------------------------------------------------

EvalTable EvalTable::initial(std::span<const Term> seeds, Lang lang) {
  EvalTable t;
  t.lang_ = lang;
  for (const Term& s : seeds) {
    if (t.index_.count(s)) continue;
    t.index_.emplace(s, static_cast<int>(t.entries_.size()));
    t.entries_.push_back({s, Behaviour::dirac_bottom()});
    t.frontier_.push_back(s);
  }
  return t;
}

const Behaviour* EvalTable::find(const Term& t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return nullptr;
  return &entries_[static_cast<size_t>(it->second)].second;
}

EvalTable gamma_step(const EvalTable& table) {
  EvalTable next;
  next.lang_ = table.lang_;
  next.iteration_ = table.iteration_ + 1;
  next.entries_.reserve(table.entries_.size());

  std::vector<Term> discovered;
  BehaviourOracle oracle = [&](const Term& u) -> Behaviour {
    if (const Behaviour* b = table.find(u)) return *b;
    discovered.push_back(u);
    return Behaviour::dirac_bottom();
  };

  for (const auto& [t, old] : table.entries_) {
    std::vector<Operand> operands;
    for (const Term& a : t.args()) {
      if (const Behaviour* b = table.find(a))
        operands.push_back({a, *b});
      else
        operands.push_back({a, oracle(a)});
    }
    Behaviour b = rho(table.lang_, t.op(), operands, oracle);
    if (b.bottom() > old.bottom() + 1e-12)
      throw std::logic_error("gamma_step: bottom mass increased on " + print_term(t));
    next.index_.emplace(t, static_cast<int>(next.entries_.size()));
    next.entries_.push_back({t, std::move(b)});
  }
  for (const Term& u : discovered)
    if (!next.index_.count(u)) {
      next.index_.emplace(u, static_cast<int>(next.entries_.size()));
      next.entries_.push_back({u, Behaviour::dirac_bottom()});
      next.frontier_.push_back(u);
    }
  return next;
}

// --- monadic application -----------------------------------------------------

const Behaviour& FnAtom::at(const Term& arg) const {
  for (const auto& [a, b] : table)
    if (a == arg) return b;
  throw std::out_of_range("FnAtom: argument not tabled: " + print_term(arg));
}

Behaviour app_via_monad(const Depth2Behaviour& Phi, const Term& s) {
  // st: pair every atom with s. On the image of D(outl + ev), both summands
  // of {bot} x Lambda + D({bot}+Lambda^Lambda) then map into behaviours via
  // eta o inl and the identity; the codiagonal merges them, so the result of
  // these three stages is a distribution over behaviours.
  std::vector<Dist<Behaviour>::Entry> staged;
  if (Phi.bottom > 0.0) staged.push_back({Behaviour::dirac_bottom(), Phi.bottom});  // eta(inl bot)
  for (const auto& [f, p] : Phi.atoms) staged.push_back({f.at(s), p});              // ev(f, s)
  Dist<Behaviour> nabla(std::move(staged));
  // mu: flatten D(D({bot}+Lambda^Lambda)) -> D({bot}+Lambda^Lambda).
  Dist<Dist<BAtom>> nested = nabla.map([](const Behaviour& b) { return b.dist(); });
  return Behaviour(flatten(nested));
}

}  // namespace pcl
