#include "pcl/syntax.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <unordered_set>
#include <utility>

namespace pcl {

namespace {

struct SymInfo {
  Sym sym;
  std::string_view name;
  int arity;
};

constexpr std::array<SymInfo, 16> kSyms = {{
    {Sym::S, "S", 0},
    {Sym::Sp, "Sp", 1},
    {Sym::Spp, "Spp", 2},
    {Sym::B, "B", 0},
    {Sym::Bp, "Bp", 1},
    {Sym::Bpp, "Bpp", 2},
    {Sym::C, "C", 0},
    {Sym::Cp, "Cp", 1},
    {Sym::Cpp, "Cpp", 2},
    {Sym::K, "K", 0},
    {Sym::Kp, "Kp", 1},
    {Sym::I, "I", 0},
    {Sym::Omega, "Omega", 0},
    {Sym::App, "app", 2},
    {Sym::Choice, "(+)", 2},
    {Sym::Hole, "_", 0},
}};

const SymInfo& info(Sym s) { return kSyms[static_cast<size_t>(s)]; }

constexpr std::array<Sym, 9> kSkiSignature = {
    Sym::S,  Sym::Sp, Sym::Spp, Sym::K,   Sym::Kp,
    Sym::I,  Sym::Omega, Sym::App, Sym::Choice,
};
constexpr std::array<Sym, 12> kBckSignature = {
    Sym::B,  Sym::Bp, Sym::Bpp, Sym::C,     Sym::Cp,  Sym::Cpp,
    Sym::K,  Sym::Kp, Sym::I,   Sym::Omega, Sym::App, Sym::Choice,
};
constexpr std::array<Sym, 4> kSkiConstants = {Sym::S, Sym::K, Sym::I, Sym::Omega};
constexpr std::array<Sym, 5> kBckConstants = {Sym::B, Sym::C, Sym::K, Sym::I, Sym::Omega};

std::size_t combine_hash(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

}  // namespace

const char* lang_name(Lang lang) { return lang == Lang::pSKI ? "pski" : "pbck"; }

std::optional<Lang> parse_lang(std::string_view name) {
  if (name == "pski") return Lang::pSKI;
  if (name == "pbck") return Lang::pBCK;
  return std::nullopt;
}

int sym_arity(Sym s) { return info(s).arity; }

std::string_view sym_name(Sym s) { return info(s).name; }

bool in_signature(Sym s, Lang lang) {
  auto sig = signature(lang);
  return std::find(sig.begin(), sig.end(), s) != sig.end();
}

std::span<const Sym> signature(Lang lang) {
  if (lang == Lang::pSKI) return kSkiSignature;
  return kBckSignature;
}

std::span<const Sym> signature_constants(Lang lang) {
  if (lang == Lang::pSKI) return kSkiConstants;
  return kBckConstants;
}

Term::Term(Sym op, std::vector<Term> args) {
  if (static_cast<int>(args.size()) != sym_arity(op))
    throw std::invalid_argument("arity mismatch constructing term for symbol " +
                                std::string(sym_name(op)));
  int nodes = op == Sym::Hole ? 0 : 1;
  int holes = op == Sym::Hole ? 1 : 0;
  std::size_t h = combine_hash(0xb4b4, static_cast<std::size_t>(op));
  for (const Term& a : args) {
    nodes += a.node_count();
    holes += a.hole_count();
    h = combine_hash(h, a.hash());
  }
  node_ = std::make_shared<const Node>(Node{op, std::move(args), nodes, holes, h});
}

Term Term::hole() { return Term(Sym::Hole, {}); }
Term Term::app(Term fun, Term arg) {
  std::vector<Term> as;
  as.push_back(std::move(fun));
  as.push_back(std::move(arg));
  return Term(Sym::App, std::move(as));
}
Term Term::choice(Term left, Term right) {
  std::vector<Term> as;
  as.push_back(std::move(left));
  as.push_back(std::move(right));
  return Term(Sym::Choice, std::move(as));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->op != b.node_->op ||
      a.node_->nodes != b.node_->nodes)
    return false;
  for (size_t i = 0; i < a.node_->args.size(); ++i)
    if (!(a.node_->args[i] == b.node_->args[i])) return false;
  return true;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.node_count() <=> b.node_count(); c != 0) return c;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  for (size_t i = 0; i < a.node_->args.size(); ++i)
    if (auto c = a.node_->args[i] <=> b.node_->args[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Term instantiate(const Term& tpl, const Term& arg) {
  if (tpl.op() == Sym::Hole) return arg;
  if (tpl.hole_count() == 0) return tpl;
  std::vector<Term> args;
  args.reserve(tpl.args().size());
  for (const Term& a : tpl.args()) args.push_back(instantiate(a, arg));
  return Term(tpl.op(), std::move(args));
}

std::vector<Term> subterms(const Term& t) {
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  auto walk = [&](auto&& self, const Term& u) -> void {
    if (seen.insert(u).second) {
      out.push_back(u);
      for (const Term& a : u.args()) self(self, a);
    }
  };
  walk(walk, t);
  std::sort(out.begin(), out.end());
  return out;
}

// --- parsing ---------------------------------------------------------------

ParseError::ParseError(std::string msg, int pos)
    : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}

namespace {

struct Token {
  enum Kind { Symbol, LParen, RParen, Comma, Plus, Hole, End } kind;
  Sym sym = Sym::Hole;
  int pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    int start = static_cast<int>(pos_);
    if (pos_ >= text_.size()) return {Token::End, Sym::Hole, start};
    char c = text_[pos_];
    if (c == '(') {
      if (pos_ + 2 < text_.size() && text_[pos_ + 1] == '+' && text_[pos_ + 2] == ')') {
        pos_ += 3;
        return {Token::Plus, Sym::Hole, start};
      }
      ++pos_;
      return {Token::LParen, Sym::Hole, start};
    }
    if (c == ')') {
      ++pos_;
      return {Token::RParen, Sym::Hole, start};
    }
    if (c == ',') {
      ++pos_;
      return {Token::Comma, Sym::Hole, start};
    }
    if (c == '_') {
      ++pos_;
      return {Token::Hole, Sym::Hole, start};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t end = pos_;
      while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) ++end;
      std::string_view word = text_.substr(pos_, end - pos_);
      pos_ = end;
      for (const SymInfo& si : kSyms)
        if (si.name == word) return {Token::Symbol, si.sym, start};
      throw ParseError("unknown symbol '" + std::string(word) + "'", start);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view text, Lang lang, bool allow_hole)
      : lexer_(text), lang_(lang), allow_hole_(allow_hole) {
    advance();
  }

  Term parse() {
    Term t = parse_choice();
    if (tok_.kind != Token::End) throw ParseError("trailing input", tok_.pos);
    return t;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  Term parse_choice() {
    Term left = parse_app();
    if (tok_.kind == Token::Plus) {
      advance();
      return Term::choice(std::move(left), parse_choice());
    }
    return left;
  }

  Term parse_app() {
    Term t = parse_atom();
    while (tok_.kind == Token::Symbol || tok_.kind == Token::LParen || tok_.kind == Token::Hole)
      t = Term::app(std::move(t), parse_atom());
    return t;
  }

  Term parse_atom() {
    if (tok_.kind == Token::Hole) {
      if (!allow_hole_) throw ParseError("hole '_' is only legal in templates and contexts", tok_.pos);
      advance();
      return Term::hole();
    }
    if (tok_.kind == Token::LParen) {
      advance();
      Term t = parse_choice();
      expect(Token::RParen, "')'");
      return t;
    }
    if (tok_.kind == Token::Symbol) {
      Sym s = tok_.sym;
      int pos = tok_.pos;
      if (!in_signature(s, lang_))
        throw ParseError("symbol '" + std::string(sym_name(s)) + "' is not in the " +
                             lang_name(lang_) + " signature",
                         pos);
      advance();
      int n = sym_arity(s);
      if (n == 0) return Term(s, {});
      if (tok_.kind != Token::LParen)
        throw ParseError("symbol '" + std::string(sym_name(s)) + "' expects " +
                             std::to_string(n) + " parenthesized arguments",
                         pos);
      advance();
      std::vector<Term> args;
      args.push_back(parse_choice());
      while (tok_.kind == Token::Comma) {
        advance();
        args.push_back(parse_choice());
      }
      expect(Token::RParen, "')'");
      if (static_cast<int>(args.size()) != n)
        throw ParseError("symbol '" + std::string(sym_name(s)) + "' expects " +
                             std::to_string(n) + " arguments, got " +
                             std::to_string(args.size()),
                         pos);
      return Term(s, std::move(args));
    }
    throw ParseError("expected a term", tok_.pos);
  }

  void expect(Token::Kind k, const char* what) {
    if (tok_.kind != k) throw ParseError(std::string("expected ") + what, tok_.pos);
    advance();
  }

  Lexer lexer_;
  Lang lang_;
  bool allow_hole_;
  Token tok_;
};

enum class Prec { Choice, App, Atom };

void print_rec(const Term& t, Prec where, std::string& out) {
  switch (t.op()) {
    case Sym::App: {
      bool parens = where == Prec::Atom;
      if (parens) out += '(';
      print_rec(t.arg(0), Prec::App, out);
      out += ' ';
      print_rec(t.arg(1), Prec::Atom, out);
      if (parens) out += ')';
      return;
    }
    case Sym::Choice: {
      bool parens = where != Prec::Choice;
      if (parens) out += '(';
      print_rec(t.arg(0), Prec::App, out);
      out += " (+) ";
      print_rec(t.arg(1), Prec::Choice, out);
      if (parens) out += ')';
      return;
    }
    default: {
      out += sym_name(t.op());
      if (!t.args().empty()) {
        out += '(';
        for (size_t i = 0; i < t.args().size(); ++i) {
          if (i) out += ", ";
          print_rec(t.args()[i], Prec::Choice, out);
        }
        out += ')';
      }
      return;
    }
  }
}

}  // namespace

Term parse_term(std::string_view text, Lang lang, bool allow_hole) {
  return Parser(text, lang, allow_hole).parse();
}

std::string print_term(const Term& t) {
  std::string out;
  print_rec(t, Prec::Choice, out);
  return out;
}

// --- contexts ----------------------------------------------------------------

Context::Context(Term body) : body_(std::move(body)) {
  if (body_.hole_count() > 1)
    throw std::invalid_argument("context must be linear (hole occurs at most once), got " +
                                print_term(body_));
}

std::vector<Context> enumerate_contexts(Lang lang, int max_size,
                                        std::span<const Term> leaf_pool) {
  if (max_size < 1) throw std::invalid_argument("enumerate_contexts: max_size must be >= 1");

  // Distinct leaf generators: constants of the signature plus the pool.
  std::set<Term> leaf_set;
  for (Sym c : signature_constants(lang)) leaf_set.insert(Term(c));
  for (const Term& t : leaf_pool) {
    if (!t.is_closed())
      throw std::invalid_argument("leaf_pool members must be closed terms");
    leaf_set.insert(t);
  }

  // by_size[n][h] = all linear bodies with n signature nodes and h holes.
  std::vector<std::array<std::vector<Term>, 2>> by_size(static_cast<size_t>(max_size) + 1);
  by_size[0][1].push_back(Term::hole());
  for (const Term& leaf : leaf_set) {
    int n = leaf.node_count();
    if (n <= max_size) by_size[static_cast<size_t>(n)][0].push_back(leaf);
  }
  for (int n = 1; n <= max_size; ++n) {
    auto& bucket = by_size[static_cast<size_t>(n)];
    for (Sym s : signature(lang)) {
      int k = sym_arity(s);
      if (k == 1) {
        for (int h = 0; h <= 1; ++h)
          for (const Term& a : by_size[static_cast<size_t>(n - 1)][static_cast<size_t>(h)])
            bucket[static_cast<size_t>(h)].push_back(Term(s, {a}));
      } else if (k == 2) {
        for (int n1 = 0; n1 <= n - 1; ++n1) {
          int n2 = n - 1 - n1;
          for (int h1 = 0; h1 <= 1; ++h1)
            for (int h2 = 0; h2 + h1 <= 1; ++h2)
              for (const Term& a : by_size[static_cast<size_t>(n1)][static_cast<size_t>(h1)])
                for (const Term& b : by_size[static_cast<size_t>(n2)][static_cast<size_t>(h2)]) {
                  std::vector<Term> args;
                  args.push_back(a);
                  args.push_back(b);
                  bucket[static_cast<size_t>(h1 + h2)].push_back(Term(s, std::move(args)));
                }
        }
      }
    }
    // A pool leaf may coincide with a derived body of the same size.
    for (auto& v : bucket) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }

  struct Entry {
    int size;
    std::string text;
    Term body;
  };
  std::vector<Entry> entries;
  std::set<std::pair<int, std::string>> seen;  // pool leaves may duplicate constants
  for (int n = 0; n <= max_size; ++n)
    for (int h = 0; h <= 1; ++h)
      for (const Term& b : by_size[static_cast<size_t>(n)][static_cast<size_t>(h)]) {
        Entry e{n, print_term(b), b};
        if (seen.insert({e.size, e.text}).second) entries.push_back(std::move(e));
      }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.size != b.size ? a.size < b.size : a.text < b.text;
  });

  std::vector<Context> out;
  out.reserve(entries.size());
  for (Entry& e : entries) out.emplace_back(std::move(e.body));
  return out;
}

}  // namespace pcl
