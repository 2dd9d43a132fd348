#include "kbp/lang.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace kbp::lang {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long value = 0;
  Loc loc;
};

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  void advance(std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  Token next() {
    for (;;) {
      while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) advance(1);
      if (pos + 1 < src.size() && src[pos] == '-' && src[pos + 1] == '-') {
        while (pos < src.size() && src[pos] != '\n') advance(1);
        continue;
      }
      break;
    }
    Token t;
    t.loc = {line, col};
    if (pos >= src.size()) return t;
    char c = src[pos];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        advance(1);
      t.kind = Tok::Ident;
      t.text = src.substr(start, pos - start);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) advance(1);
      t.kind = Tok::Int;
      t.text = src.substr(start, pos - start);
      t.value = std::stol(t.text);
      return t;
    }
    static const char* two_plus[] = {"<->", ":=", "..", "->", "<=", ">=", "!="};
    for (const char* s : two_plus) {
      std::size_t len = std::char_traits<char>::length(s);
      if (src.compare(pos, len, s) == 0) {
        t.kind = Tok::Sym;
        t.text = s;
        advance(len);
        return t;
      }
    }
    static const std::string singles = "()[]{},;:.=<>+-&|!";
    if (singles.find(c) != std::string::npos) {
      t.kind = Tok::Sym;
      t.text = std::string(1, c);
      advance(1);
      return t;
    }
    throw parse_error(t.loc, std::string("unexpected character '") + c + "'");
  }
};

bool is_modal_word(const std::string& s) {
  return s == "EX" || s == "EF" || s == "EG" || s == "AX" || s == "AF" || s == "AG";
}

struct Parser {
  std::vector<Token> toks;
  std::size_t at = 0;

  explicit Parser(const std::string& src) {
    Lexer lex(src);
    for (;;) {
      Token t = lex.next();
      bool end = t.kind == Tok::End;
      toks.push_back(std::move(t));
      if (end) break;
    }
  }

  const Token& peek(std::size_t k = 0) const {
    return toks[std::min(at + k, toks.size() - 1)];
  }
  Token take() { return toks[at == toks.size() - 1 ? at : at++]; }
  bool is_sym(const std::string& s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Sym && peek(k).text == s;
  }
  bool is_word(const std::string& s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == s;
  }
  void expect_sym(const std::string& s) {
    if (!is_sym(s)) throw parse_error(peek().loc, "expected '" + s + "'");
    take();
  }
  void expect_word(const std::string& s) {
    if (!is_word(s)) throw parse_error(peek().loc, "expected '" + s + "'");
    take();
  }
  std::string expect_ident() {
    if (peek().kind != Tok::Ident) throw parse_error(peek().loc, "expected an identifier");
    return take().text;
  }

  static ExprPtr mk(Expr e) { return std::make_shared<Expr>(std::move(e)); }
  static ExprPtr mk2(ExprKind k, Loc loc, ExprPtr a, ExprPtr b) {
    Expr e;
    e.kind = k;
    e.loc = loc;
    e.lhs = std::move(a);
    e.rhs = std::move(b);
    return mk(std::move(e));
  }

  long parse_int_bound() {
    bool negate = false;
    if (is_sym("-")) {
      take();
      negate = true;
    }
    if (peek().kind != Tok::Int) throw parse_error(peek().loc, "expected an integer");
    long v = take().value;
    return negate ? -v : v;
  }

  // type := "boolean" | int ".." int ;  fills the binder fields
  void parse_type(bool& is_bool, long& lo, long& hi) {
    if (is_word("boolean")) {
      take();
      is_bool = true;
      return;
    }
    is_bool = false;
    Loc loc = peek().loc;
    lo = parse_int_bound();
    expect_sym("..");
    hi = parse_int_bound();
    if (hi < lo) throw parse_error(loc, "empty range type");
  }

  ExprPtr parse_expr() { return parse_quant(); }

  ExprPtr parse_quant() {
    if (is_word("exists") || is_word("forall")) {
      Expr e;
      e.kind = is_word("exists") ? ExprKind::Exists : ExprKind::Forall;
      e.loc = take().loc;
      e.name = expect_ident();
      expect_sym(":");
      parse_type(e.binder_bool, e.binder_lo, e.binder_hi);
      expect_sym(".");
      e.lhs = parse_quant();
      return mk(std::move(e));
    }
    return parse_iff();
  }

  ExprPtr parse_iff() {
    ExprPtr e = parse_implies();
    while (is_sym("<->")) {
      Loc loc = take().loc;
      e = mk2(ExprKind::Iff, loc, e, parse_implies());
    }
    return e;
  }

  ExprPtr parse_implies() {
    ExprPtr e = parse_or();
    if (is_sym("->")) {
      Loc loc = take().loc;
      return mk2(ExprKind::Implies, loc, e, parse_implies());
    }
    return e;
  }

  ExprPtr parse_or() {
    ExprPtr e = parse_and();
    while (is_sym("|") || is_word("or")) {
      Loc loc = take().loc;
      e = mk2(ExprKind::Or, loc, e, parse_and());
    }
    return e;
  }

  ExprPtr parse_and() {
    ExprPtr e = parse_unary();
    while (is_sym("&") || is_word("and")) {
      Loc loc = take().loc;
      e = mk2(ExprKind::And, loc, e, parse_unary());
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (is_sym("!") || is_word("not")) {
      Loc loc = take().loc;
      Expr e;
      e.kind = ExprKind::Not;
      e.loc = loc;
      e.lhs = parse_unary();
      return mk(std::move(e));
    }
    // K[a] / M[a] scope over everything to their right (the knowledge
    // operators behave like binders in the source language)
    if ((is_word("K") || is_word("M")) && is_sym("[", 1)) {
      Expr e;
      e.kind = is_word("K") ? ExprKind::Know : ExprKind::Maybe;
      e.loc = take().loc;
      expect_sym("[");
      e.name = expect_ident();
      expect_sym("]");
      e.lhs = parse_iff();
      return mk(std::move(e));
    }
    if (peek().kind == Tok::Ident && is_modal_word(peek().text)) {
      std::string w = take().text;
      Expr e;
      e.kind = w == "EX"   ? ExprKind::EX
               : w == "EF" ? ExprKind::EF
               : w == "EG" ? ExprKind::EG
               : w == "AX" ? ExprKind::AX
               : w == "AF" ? ExprKind::AF
                           : ExprKind::AG;
      e.lhs = parse_unary();
      return mk(std::move(e));
    }
    if ((is_word("E") || is_word("A")) && is_sym("[", 1)) {
      Expr e;
      e.kind = is_word("E") ? ExprKind::EU : ExprKind::AU;
      e.loc = take().loc;
      expect_sym("[");
      e.lhs = parse_expr();
      expect_word("U");
      e.rhs = parse_expr();
      expect_sym("]");
      return mk(std::move(e));
    }
    return parse_cmp();
  }

  ExprPtr parse_cmp() {
    ExprPtr e = parse_sum();
    static const std::pair<const char*, ExprKind> ops[] = {
        {"=", ExprKind::Eq}, {"!=", ExprKind::Ne}, {"<=", ExprKind::Le},
        {"<", ExprKind::Lt}, {">=", ExprKind::Ge}, {">", ExprKind::Gt}};
    for (auto [sym, kind] : ops) {
      if (is_sym(sym)) {
        Loc loc = take().loc;
        return mk2(kind, loc, e, parse_sum());
      }
    }
    return e;
  }

  ExprPtr parse_sum() {
    ExprPtr e = parse_term();
    while (is_sym("+") || is_sym("-")) {
      ExprKind k = peek().text == "+" ? ExprKind::Add : ExprKind::Sub;
      Loc loc = take().loc;
      e = mk2(k, loc, e, parse_term());
    }
    return e;
  }

  ExprPtr parse_term() {
    Expr e;
    e.loc = peek().loc;
    if (peek().kind == Tok::Int) {
      e.kind = ExprKind::IntLit;
      e.value = take().value;
      return mk(std::move(e));
    }
    if (is_word("true") || is_word("false")) {
      e.kind = ExprKind::BoolLit;
      e.value = take().text == "true" ? 1 : 0;
      return mk(std::move(e));
    }
    if (is_sym("(")) {
      take();
      ExprPtr inner = parse_expr();
      expect_sym(")");
      return inner;
    }
    if (peek().kind == Tok::Ident) {
      e.kind = ExprKind::Var;
      e.name = take().text;
      return mk(std::move(e));
    }
    throw parse_error(peek().loc, "expected an expression");
  }

  Spec parse_spec() {
    Spec spec;
    while (peek().kind != Tok::End) {
      if (is_word("var")) {
        VarDecl d;
        d.loc = take().loc;
        d.names.push_back(expect_ident());
        while (is_sym(",")) {
          take();
          d.names.push_back(expect_ident());
        }
        expect_sym(":");
        parse_type(d.is_bool, d.lo, d.hi);
        if (is_word("initial")) {
          take();
          d.init = parse_expr();
        }
        expect_sym(";");
        spec.vars.push_back(std::move(d));
      } else if (is_word("agent")) {
        AgentDecl d;
        d.loc = take().loc;
        d.name = expect_ident();
        expect_sym("=");
        expect_sym("{");
        d.observed.push_back(expect_ident());
        while (is_sym(",")) {
          take();
          d.observed.push_back(expect_ident());
        }
        expect_sym("}");
        expect_sym(";");
        spec.agents.push_back(std::move(d));
      } else if (is_word("let")) {
        LetDecl d;
        d.loc = take().loc;
        d.name = expect_ident();
        expect_sym("=");
        d.body = parse_expr();
        expect_sym(";");
        spec.lets.push_back(std::move(d));
      } else if (is_word("action")) {
        ActionDecl d;
        d.loc = take().loc;
        d.name = expect_ident();
        if (is_word("guard")) {
          take();
          d.guard = parse_expr();
        }
        expect_word("do");
        while (!is_sym(";")) {
          std::string target = expect_ident();
          expect_sym(":=");
          d.assigns.emplace_back(target, parse_expr());
          if (is_sym(","))
            take();
          else
            break;
        }
        expect_sym(";");
        spec.actions.push_back(std::move(d));
      } else if (is_word("check")) {
        CheckDecl d;
        d.loc = take().loc;
        if (is_word("initial")) {
          take();
          d.reachable = false;
        } else if (is_word("reachable")) {
          take();
          d.reachable = true;
        } else {
          throw parse_error(peek().loc, "expected 'initial' or 'reachable' after 'check'");
        }
        d.body = parse_expr();
        expect_sym(";");
        spec.checks.push_back(std::move(d));
      } else {
        throw parse_error(peek().loc, "expected a declaration (var/agent/let/action/check)");
      }
    }
    return spec;
  }
};

}  // namespace

Spec parse(const std::string& text) { return Parser(text).parse_spec(); }

}  // namespace kbp::lang
