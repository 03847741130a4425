#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pcl {

enum class Lang { pSKI, pBCK };

const char* lang_name(Lang lang);
std::optional<Lang> parse_lang(std::string_view name);

/// Operation symbols of both signatures plus the formal parameter hole.
/// The two signatures share exactly {K, K', I, Omega, app, (+)}.
enum class Sym : std::uint8_t {
  S,
  Sp,
  Spp,
  B,
  Bp,
  Bpp,
  C,
  Cp,
  Cpp,
  K,
  Kp,
  I,
  Omega,
  App,
  Choice,
  Hole,
};

int sym_arity(Sym s);
std::string_view sym_name(Sym s);
bool in_signature(Sym s, Lang lang);
std::span<const Sym> signature(Lang lang);
std::span<const Sym> signature_constants(Lang lang);

/// Immutable ordered tree of operation symbols. Holes are permitted, so the
/// same type covers closed terms, templates (function values t |-> T[t]) and
/// the bodies of linear contexts; hole and node counts are cached per node.
///
/// node_count() counts signature symbols only: the hole is size-free, which
/// is the size convention used by enumerate_contexts.
class Term {
 public:
  Term(Sym op, std::vector<Term> args);
  explicit Term(Sym constant) : Term(constant, {}) {}

  static Term hole();
  static Term app(Term fun, Term arg);
  static Term choice(Term left, Term right);

  Sym op() const { return node_->op; }
  std::span<const Term> args() const { return node_->args; }
  const Term& arg(int i) const { return node_->args[static_cast<size_t>(i)]; }
  int node_count() const { return node_->nodes; }
  int hole_count() const { return node_->holes; }
  bool is_closed() const { return node_->holes == 0; }
  /// Affine templates (hole occurs at most once) are the dividing line
  /// between the two languages' congruence properties.
  bool is_affine() const { return node_->holes <= 1; }
  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  /// Deterministic total order: node count first, then structural.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node {
    Sym op;
    std::vector<Term> args;
    int nodes;
    int holes;
    std::size_t hash;
  };
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Replaces every hole of `tpl` by `arg`.
Term instantiate(const Term& tpl, const Term& arg);

/// Collects all distinct subterms of `t` (including `t`).
std::vector<Term> subterms(const Term& t);

struct ParseError : std::runtime_error {
  ParseError(std::string msg, int pos);
  int position;  // byte offset into the input
};

/// Parses the ASCII grammar
///   term := app | app "(+)" term
///   app  := atom | app atom
///   atom := const | "_" | sym "(" term {"," term} ")" | "(" term ")"
/// where application is left-associative and binds tighter than "(+)".
/// Primed symbols are spelled Sp, Spp, Kp, Bp, Bpp, Cp, Cpp. The hole "_"
/// is only accepted when `allow_hole` is set (templates and contexts).
Term parse_term(std::string_view text, Lang lang, bool allow_hole = false);

std::string print_term(const Term& t);

/// A template whose hole occurs at most once; linearity is enforced here.
class Context {
 public:
  explicit Context(Term body);
  const Term& body() const { return body_; }
  bool has_hole() const { return body_.hole_count() == 1; }
  Term apply(const Term& plug) const { return instantiate(body_, plug); }
  std::string str() const { return print_term(body_); }

  friend bool operator==(const Context& a, const Context& b) { return a.body_ == b.body_; }

 private:
  Term body_;
};

/// Enumerates every linear context of node_count() <= max_size (signature
/// nodes, including those inside pool leaves; the hole is free) whose
/// non-hole leaves are signature constants or members of `leaf_pool`. Order
/// is size-then-lexicographic on the printed form; the sequence is
/// duplicate-free.
std::vector<Context> enumerate_contexts(Lang lang, int max_size,
                                        std::span<const Term> leaf_pool);

}  // namespace pcl
