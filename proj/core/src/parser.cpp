#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hintelab/syntax.hpp"

namespace hintelab {

ExprPtr make_expr(ExprKind kind, SourcePos pos, std::string name, std::vector<ExprPtr> args,
                  std::vector<BinderGroup> binders) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->pos = pos;
  e->name = std::move(name);
  e->args = std::move(args);
  e->binders = std::move(binders);
  return e;
}

std::vector<Notation> prelude_notations() { return {Notation{"=", "eq", Fixity::Infix, 50, 1}}; }

namespace {

enum class Tok { Ident, Meta, Op, Punct, String, End };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

const std::set<std::string> kReservedOps = {":", ":=", "=>", "->", "|-", "==", ".", "<|", "|>", "<-"};

const std::set<std::string> kKeywords = {
    "def",    "axiom",  "structure", "field", "prop",  "coercion", "nonuniform", "hint",     "check",
    "infer",  "conjecture", "rewrite", "expand", "infixl", "infixr",  "infix",      "prefix",   "include",
    "dump",   "at",     "in",        "priority", "fun",  "Pi",       "forall",     "Type",     "Unit",
    "star",   "case1",  "implicit",  "opaque"};

bool is_op_char(char c) { return std::string_view("+-*/<>=!@#$%^&|~.:").find(c) != std::string_view::npos; }

bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80; }

struct Alias {
  const char* utf8;
  Tok kind;
  const char* text;
};

const Alias kAliases[] = {
    {"\xCE\xBB", Tok::Ident, "fun"},      // λ
    {"\xCE\xA0", Tok::Ident, "Pi"},       // Π
    {"\xE2\x88\x80", Tok::Ident, "forall"},  // ∀
    {"\xE2\x86\x92", Tok::Op, "->"},      // →
    {"\xE2\x87\x92", Tok::Op, "=>"},      // ⇒
    {"\xE2\x8B\x86", Tok::Ident, "star"},  // ⋆
    {"\xE2\x8A\xA2", Tok::Op, "|-"},      // ⊢
    {"\xE2\x89\xA1", Tok::Op, "=="},      // ≡
    {"\xE2\x9F\xA8", Tok::Op, "<|"},      // ⟨
    {"\xE2\x9F\xA9", Tok::Op, "|>"},      // ⟩
    {"\xE2\x88\x98", Tok::Op, "\xE2\x88\x98"},  // ∘
    {"\xC3\x97", Tok::Op, "\xC3\x97"},    // ×
    {"\xC2\xB7", Tok::Op, "\xC2\xB7"},    // ·
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      SourcePos pos{line_, col_};
      if (i_ >= s_.size()) {
        out.push_back({Tok::End, "", pos});
        return out;
      }
      char c = s_[i_];
      if (const Alias* a = match_alias()) {
        advance(std::string_view(a->utf8).size());
        out.push_back({a->kind, a->text, pos});
        continue;
      }
      if (c == '(' || c == ')' || c == '{' || c == '}' || c == ',' || c == ';') {
        advance(1);
        out.push_back({Tok::Punct, std::string(1, c), pos});
        continue;
      }
      if (c == '"') {
        advance(1);
        std::string str;
        while (i_ < s_.size() && s_[i_] != '"' && s_[i_] != '\n') {
          str += s_[i_];
          advance(1);
        }
        if (i_ >= s_.size() || s_[i_] != '"') throw Error(ErrorKind::SyntaxError, "unterminated string", pos);
        advance(1);
        out.push_back({Tok::String, str, pos});
        continue;
      }
      if (c == '?') {
        advance(1);
        std::string name = ident();
        if (name.empty()) throw Error(ErrorKind::SyntaxError, "expected a name after '?'", pos);
        out.push_back({Tok::Meta, name, pos});
        continue;
      }
      if (is_op_char(c)) {
        std::string op;
        while (i_ < s_.size() && is_op_char(s_[i_])) {
          op += s_[i_];
          advance(1);
        }
        out.push_back({Tok::Op, op, pos});
        continue;
      }
      if (is_ident_char(static_cast<unsigned char>(c))) {
        out.push_back({Tok::Ident, ident(), pos});
        continue;
      }
      throw Error(ErrorKind::SyntaxError, std::string("unexpected character '") + c + "'", pos);
    }
  }

 private:
  const Alias* match_alias() const {
    for (const auto& a : kAliases)
      if (s_.compare(i_, std::string_view(a.utf8).size(), a.utf8) == 0) return &a;
    return nullptr;
  }

  std::string ident() {
    std::string out;
    while (i_ < s_.size() && is_ident_char(static_cast<unsigned char>(s_[i_])) && !match_alias()) {
      out += s_[i_];
      advance(1);
    }
    return out;
  }

  void skip_space() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        advance(1);
      } else if (s_.compare(i_, 2, "--") == 0) {
        while (i_ < s_.size() && s_[i_] != '\n') advance(1);
      } else {
        return;
      }
    }
  }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < s_.size(); ++k) {
      unsigned char c = static_cast<unsigned char>(s_[i_]);
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++col_;
      }
      ++i_;
    }
  }

  const std::string& s_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

constexpr int kArrowLevel = 25;

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string file, std::filesystem::path base, std::vector<Notation>& notations,
         std::set<std::filesystem::path>& active)
      : t_(std::move(toks)), file_(std::move(file)), base_(std::move(base)), notations_(notations),
        active_(active) {}

  void script(Script& out) {
    while (peek().kind != Tok::End) command(out);
  }

  ExprPtr lone_term() {
    ExprPtr e = term();
    if (peek().kind != Tok::End) fail("unexpected " + describe(peek()));
    return e;
  }

 private:
  // Tokens.
  const Token& peek(std::size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }
  Token next() { return t_[p_ < t_.size() - 1 ? p_++ : p_]; }

  bool is(Tok k, const std::string& text, std::size_t ahead = 0) const {
    return peek(ahead).kind == k && peek(ahead).text == text;
  }
  bool is_kw(const std::string& kw, std::size_t ahead = 0) const { return is(Tok::Ident, kw, ahead); }
  bool is_op(const std::string& op, std::size_t ahead = 0) const { return is(Tok::Op, op, ahead); }
  bool is_punct(const std::string& p, std::size_t ahead = 0) const { return is(Tok::Punct, p, ahead); }

  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorKind::SyntaxError, msg, peek().pos); }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    if (t.kind == Tok::Meta) return "'?" + t.text + "'";
    return "'" + t.text + "'";
  }

  void expect_op(const std::string& op) {
    if (!is_op(op)) fail("expected '" + op + "', found " + describe(peek()));
    next();
  }
  void expect_punct(const std::string& p) {
    if (!is_punct(p)) fail("expected '" + p + "', found " + describe(peek()));
    next();
  }
  void expect_kw(const std::string& kw) {
    if (!is_kw(kw)) fail("expected '" + kw + "', found " + describe(peek()));
    next();
  }

  std::string name() {
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) fail("expected a name, found " + describe(peek()));
    return next().text;
  }

  // Names of declared constants may also be operator-free symbols such as `0`.
  std::size_t number() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || t.text.empty() ||
        t.text.find_first_not_of("0123456789") != std::string::npos)
      fail("expected a number, found " + describe(t));
    return std::stoul(next().text);
  }

  int signed_number() {
    bool neg = false;
    if (is_op("-")) {
      next();
      neg = true;
    }
    int n = static_cast<int>(number());
    return neg ? -n : n;
  }

  // Commands.
  void command(Script& out) {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail("expected a command, found " + describe(t));
    if (t.text == "include") {
      next();
      if (peek().kind != Tok::String) fail("expected a file name after include");
      Token f = next();
      include(f, out);
      return;
    }
    Command c;
    c.pos = t.pos;
    c.file = file_;
    const std::string kw = t.text;
    if (kw == "def" || kw == "opaque") {
      next();
      if (kw == "opaque") {
        expect_kw("def");
        c.reducibility = Reducibility::Opaque;
      }
      c.kind = CommandKind::Def;
      c.name = decl_name();
      c.binders = binder_groups();
      expect_op(":");
      c.type = term();
      expect_op(":=");
      c.value = term();
    } else if (kw == "axiom") {
      next();
      c.kind = CommandKind::Axiom;
      c.name = decl_name();
      c.binders = binder_groups();
      expect_op(":");
      c.type = term();
    } else if (kw == "structure") {
      next();
      c.kind = CommandKind::Structure;
      c.name = name();
      c.binders = binder_groups();
      expect_op(":=");
      expect_punct("{");
      while (!is_punct("}")) {
        FieldSyntax f;
        f.pos = peek().pos;
        if (is_kw("field")) {
          f.kind = FieldKind::Data;
        } else if (is_kw("prop")) {
          f.kind = FieldKind::Property;
        } else {
          fail("expected 'field' or 'prop', found " + describe(peek()));
        }
        next();
        f.name = name();
        expect_op(":");
        f.type = term();
        expect_punct(";");
        c.fields.push_back(std::move(f));
      }
      expect_punct("}");
    } else if (kw == "coercion") {
      next();
      c.kind = CommandKind::Coercion;
      c.name = name();
      expect_kw("at");
      c.arg_index = number();
    } else if (kw == "nonuniform") {
      next();
      expect_kw("coercion");
      c.kind = CommandKind::Nonuniform;
      if (peek().kind == Tok::Ident && !kKeywords.count(peek().text) && (is_punct("(", 1) || is_op(":", 1)))
        c.name = name();
      c.binders = binder_groups();
      if (!c.name.empty() && is_op(":")) next();
      ExprPtr arrow = term();
      split_arrow(arrow, c);
      expect_op(":=");
      c.pattern = term();
      expect_op("=>");
      c.result = term();
      if (is_kw("priority")) {
        next();
        c.priority = signed_number();
      }
    } else if (kw == "hint") {
      next();
      c.kind = CommandKind::Hint;
      if (peek().kind == Tok::Ident && !kKeywords.count(peek().text)) c.name = name();
      if (is_kw("priority")) {
        next();
        c.priority = signed_number();
      }
      while (is_punct("(")) {
        next();
        if (is_punct(")")) {
          next();
          continue;
        }
        BinderGroup g;
        g.pos = peek().pos;
        while (peek().kind == Tok::Meta || (peek().kind == Tok::Ident && !kKeywords.count(peek().text)))
          g.names.push_back(next().text);
        if (g.names.empty()) fail("expected metavariable names");
        expect_op(":");
        g.type = term();
        expect_punct(")");
        c.binders.push_back(std::move(g));
      }
      expect_op("|-");
      expect_punct("(");
      while (!is_punct(")")) {
        TelescopeSyntax e;
        e.pos = peek().pos;
        if (peek().kind == Tok::Meta || (peek().kind == Tok::Ident && !kKeywords.count(peek().text)))
          e.name = next().text;
        else
          fail("expected a telescope entry, found " + describe(peek()));
        expect_op(":=");
        e.definition = term();
        c.telescope.push_back(std::move(e));
        if (is_punct(";")) {
          next();
        } else if (!is_punct(")")) {
          fail("expected ';' or ')' in hint telescope, found " + describe(peek()));
        }
      }
      next();
      expect_op(":");
      c.lhs = term();
      expect_op("==");
      c.rhs = term();
    } else if (kw == "check") {
      next();
      c.kind = CommandKind::Check;
      c.value = term();
      expect_op(":");
      c.type = term();
    } else if (kw == "infer") {
      next();
      c.kind = CommandKind::Infer;
      c.value = term();
    } else if (kw == "conjecture") {
      next();
      c.kind = CommandKind::Conjecture;
      c.name = name();
      c.binders = binder_groups();
      expect_op(":");
      c.type = term();
    } else if (kw == "rewrite") {
      next();
      c.kind = CommandKind::Rewrite;
      if (is_op("<-")) {
        next();
        c.reverse = true;
      }
      c.value = term();
      expect_kw("in");
      c.name = name();
      if (is_kw("at")) {
        next();
        c.occurrence = number();
        if (*c.occurrence == 0) fail("occurrences are numbered from 1");
      }
    } else if (kw == "expand") {
      next();
      c.kind = CommandKind::Expand;
      c.name = name();
    } else if (kw == "infixl" || kw == "infixr" || kw == "infix" || kw == "prefix") {
      next();
      c.kind = CommandKind::Notation;
      Notation n;
      n.fixity = kw == "infixl"   ? Fixity::InfixL
                 : kw == "infixr" ? Fixity::InfixR
                 : kw == "infix"  ? Fixity::Infix
                                  : Fixity::Prefix;
      n.level = static_cast<int>(number());
      if (peek().kind != Tok::Op || kReservedOps.count(peek().text)) fail("expected an operator symbol");
      n.symbol = next().text;
      n.constant = name();
      if (is_kw("implicit")) {
        next();
        n.implicit = number();
      }
      c.notation = n;
      c.name = n.constant;
      notations_.push_back(n);
    } else if (kw == "dump") {
      next();
      if (is_kw("hints") || (peek().kind == Tok::Ident && peek().text == "hints")) {
        c.kind = CommandKind::DumpHints;
      } else if (peek().kind == Tok::Ident && peek().text == "coercions") {
        c.kind = CommandKind::DumpCoercions;
      } else {
        fail("expected 'hints' or 'coercions' after dump");
      }
      next();
    } else {
      fail("unknown command " + describe(t));
    }
    out.commands.push_back(std::move(c));
  }

  std::string decl_name() {
    if (peek().kind == Tok::Ident && !kKeywords.count(peek().text)) return next().text;
    fail("expected a declaration name, found " + describe(peek()));
  }

  void include(const Token& f, Script& out) {
    std::filesystem::path path = base_ / f.text;
    std::filesystem::path canon = std::filesystem::weakly_canonical(path);
    if (active_.count(canon)) throw Error(ErrorKind::SyntaxError, "recursive include of " + f.text, f.pos);
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::SyntaxError, "cannot open included file " + f.text, f.pos);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    active_.insert(canon);
    Parser sub(Lexer(text).run(), path.string(), path.parent_path(), notations_, active_);
    sub.script(out);
    active_.erase(canon);
  }

  // `S -> T` split at the outermost arrow whose codomain is not an arrow.
  void split_arrow(const ExprPtr& e, Command& c) {
    if (e->kind != ExprKind::Arrow) throw Error(ErrorKind::SyntaxError, "expected 'S -> T' in coercion branch", e->pos);
    const Expr* cur = e.get();
    std::vector<const Expr*> spine;
    while (cur->kind == ExprKind::Arrow && cur->args[1]->kind == ExprKind::Arrow) {
      spine.push_back(cur);
      cur = cur->args[1].get();
    }
    c.target = cur->args[1];
    ExprPtr source = cur->args[0];
    for (auto it = spine.rbegin(); it != spine.rend(); ++it)
      source = make_expr(ExprKind::Arrow, (*it)->pos, "", {(*it)->args[0], source});
    c.source = source;
  }

  // `(a b : A) (c : C)` groups.
  std::vector<BinderGroup> binder_groups() {
    std::vector<BinderGroup> out;
    while (is_punct("(")) {
      next();
      BinderGroup g;
      g.pos = peek().pos;
      while (peek().kind == Tok::Ident && !kKeywords.count(peek().text)) g.names.push_back(next().text);
      if (g.names.empty()) fail("expected binder names");
      expect_op(":");
      g.type = term();
      expect_punct(")");
      out.push_back(std::move(g));
    }
    return out;
  }

  // Terms.
  bool starts_binder() const { return is_kw("fun") || is_kw("Pi") || is_kw("forall"); }

  ExprPtr term() {
    if (starts_binder()) return binder_term();
    return op_expr(0);
  }

  ExprPtr binder_term() {
    Token kw = next();
    bool lam = kw.text == "fun";
    std::vector<BinderGroup> groups;
    if (is_punct("(")) {
      groups = binder_groups();
    } else {
      BinderGroup g;
      g.pos = peek().pos;
      while (peek().kind == Tok::Ident && !kKeywords.count(peek().text)) g.names.push_back(next().text);
      if (g.names.empty()) fail("expected binder names");
      if (is_op(":")) {
        next();
        g.type = lam ? op_expr(kArrowLevel) : term_until_dot();
      } else if (!lam) {
        fail("expected ':' in Pi binder");
      }
      groups.push_back(std::move(g));
    }
    if (lam)
      expect_op("=>");
    else
      expect_op(".");
    ExprPtr body = term();
    return make_expr(lam ? ExprKind::Lam : ExprKind::Pi, kw.pos, "", {body}, std::move(groups));
  }

  ExprPtr term_until_dot() { return op_expr(0); }

  const Notation* infix_notation(const std::string& sym) const {
    for (auto it = notations_.rbegin(); it != notations_.rend(); ++it)
      if (it->symbol == sym && it->fixity != Fixity::Prefix) return &*it;
    return nullptr;
  }
  const Notation* prefix_notation(const std::string& sym) const {
    for (auto it = notations_.rbegin(); it != notations_.rend(); ++it)
      if (it->symbol == sym && it->fixity == Fixity::Prefix) return &*it;
    return nullptr;
  }

  ExprPtr apply_notation(const Notation& n, SourcePos pos, std::vector<ExprPtr> operands) {
    ExprPtr e = make_expr(ExprKind::Var, pos, n.constant);
    for (std::size_t i = 0; i < n.implicit; ++i) e = make_expr(ExprKind::App, pos, "", {e, make_expr(ExprKind::Hole, pos)});
    for (auto& o : operands) e = make_expr(ExprKind::App, pos, "", {e, o});
    return e;
  }

  ExprPtr op_expr(int min_level) {
    ExprPtr lhs;
    if (peek().kind == Tok::Op && !kReservedOps.count(peek().text)) {
      const Notation* n = prefix_notation(peek().text);
      if (!n) fail("unknown prefix operator " + describe(peek()));
      Token op = next();
      ExprPtr operand = op_expr(n->level);
      lhs = apply_notation(*n, op.pos, {operand});
    } else {
      lhs = app_expr();
    }
    while (true) {
      const Token& t = peek();
      if (t.kind != Tok::Op) break;
      if (t.text == "->") {
        if (kArrowLevel < min_level) break;
        Token op = next();
        ExprPtr rhs = starts_binder() ? binder_term() : op_expr(kArrowLevel);
        lhs = make_expr(ExprKind::Arrow, op.pos, "", {lhs, rhs});
        continue;
      }
      if (kReservedOps.count(t.text)) break;
      const Notation* n = infix_notation(t.text);
      if (!n) {
        if (prefix_notation(t.text)) break;
        fail("unknown infix operator " + describe(t));
      }
      if (n->level < min_level) break;
      Token op = next();
      int rhs_level = n->fixity == Fixity::InfixR ? n->level : n->level + 1;
      ExprPtr rhs = starts_binder() ? binder_term() : op_expr(rhs_level);
      lhs = apply_notation(*n, op.pos, {lhs, rhs});
      if (n->fixity == Fixity::Infix) {
        const Token& after = peek();
        if (after.kind == Tok::Op) {
          const Notation* m = infix_notation(after.text);
          if (m && m->level == n->level && m->fixity == Fixity::Infix)
            fail("non-associative operator " + describe(after) + " needs parentheses");
        }
      }
    }
    return lhs;
  }

  bool starts_atom() const {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
        if (t.text == "Type" || t.text == "Unit" || t.text == "star" || t.text == "case1") return true;
        return !kKeywords.count(t.text);
      case Tok::Meta:
        return true;
      case Tok::Punct:
        return t.text == "(";
      case Tok::Op:
        return t.text == "<|";
      default:
        return false;
    }
  }

  ExprPtr app_expr() {
    if (!starts_atom()) fail("expected a term, found " + describe(peek()));
    ExprPtr e;
    if (is_kw("case1")) {
      Token k = next();
      ExprPtr m = atom();
      ExprPtr b = atom();
      ExprPtr s = atom();
      e = make_expr(ExprKind::Case1, k.pos, "", {m, b, s});
    } else {
      e = atom();
    }
    while (starts_atom() && !is_kw("case1")) {
      ExprPtr a = atom();
      e = make_expr(ExprKind::App, a->pos, "", {e, a});
    }
    return e;
  }

  ExprPtr atom() {
    Token t = peek();
    if (t.kind == Tok::Meta) {
      next();
      return make_expr(ExprKind::Meta, t.pos, t.text);
    }
    if (t.kind == Tok::Ident) {
      next();
      if (t.text == "Type") return make_expr(ExprKind::Sort, t.pos);
      if (t.text == "Unit") return make_expr(ExprKind::UnitTy, t.pos);
      if (t.text == "star") return make_expr(ExprKind::Star, t.pos);
      if (t.text == "_") return make_expr(ExprKind::Hole, t.pos);
      if (t.text == "case1") fail("case1 needs parentheses in argument position");
      return make_expr(ExprKind::Var, t.pos, t.text);
    }
    if (is_punct("(")) {
      next();
      // Parenthesised operator used as a function: `(+)`.
      if (peek().kind == Tok::Op && !kReservedOps.count(peek().text) && is_punct(")", 1)) {
        Token op = next();
        next();
        const Notation* n = infix_notation(op.text);
        if (!n) n = prefix_notation(op.text);
        if (!n) throw Error(ErrorKind::SyntaxError, "unknown operator '" + op.text + "'", op.pos);
        return make_expr(ExprKind::Var, op.pos, n->constant);
      }
      ExprPtr e = term();
      if (is_op(":")) {
        next();
        ExprPtr ty = term();
        expect_punct(")");
        return make_expr(ExprKind::Ascribe, t.pos, "", {e, ty});
      }
      expect_punct(")");
      return e;
    }
    if (is_op("<|")) {
      next();
      std::vector<ExprPtr> fields;
      if (!is_op("|>")) {
        fields.push_back(term());
        while (is_punct(",")) {
          next();
          fields.push_back(term());
        }
      }
      expect_op("|>");
      return make_expr(ExprKind::Anon, t.pos, "", std::move(fields));
    }
    fail("expected a term, found " + describe(t));
  }

  std::vector<Token> t_;
  std::size_t p_ = 0;
  std::string file_;
  std::filesystem::path base_;
  std::vector<Notation>& notations_;
  std::set<std::filesystem::path>& active_;
};

}  // namespace

Script parse_script(const std::string& text, const std::string& file, const std::filesystem::path& base_dir) {
  std::vector<Notation> notations = prelude_notations();
  std::set<std::filesystem::path> active;
  Parser p(Lexer(text).run(), file, base_dir, notations, active);
  Script s;
  p.script(s);
  return s;
}

Script parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SyntaxError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_script(ss.str(), path.string(), path.parent_path());
}

ExprPtr parse_term(const std::string& text, const std::vector<Notation>& extra) {
  std::vector<Notation> notations = prelude_notations();
  notations.insert(notations.end(), extra.begin(), extra.end());
  std::set<std::filesystem::path> active;
  Parser p(Lexer(text).run(), "<term>", {}, notations, active);
  return p.lone_term();
}

}  // namespace hintelab
