#include "hintelab/printer.hpp"

#include <set>
#include <sstream>

namespace hintelab {

namespace {

constexpr int kBinderLevel = 0;
constexpr int kArrowLevel = 25;
constexpr int kAppLevel = 1000;
constexpr int kAtomLevel = 1001;

bool is_op_char(char c) {
  return std::string_view("+-*/<>=!@#$%^&|~.:").find(c) != std::string_view::npos;
}

class Printer {
 public:
  Printer(const GlobalEnv& env, const RenderOptions& opts) : env_(env), opts_(opts) {}

  std::string print(const Term& t, int prec) {
    switch (t.kind()) {
      case Kind::Sort: return "Type";
      case Kind::UnitTy: return "Unit";
      case Kind::Star: return "star";
      case Kind::BVar: {
        auto i = t.as<node::BVar>().index;
        if (i < names_.size()) return names_[names_.size() - 1 - i];
        return "#" + std::to_string(i);
      }
      case Kind::FVar: return t.as<node::FVar>().name;
      case Kind::Const: return t.as<node::Const>().name;
      case Kind::Meta: return meta_name(t.as<node::Meta>().id);
      case Kind::App: return print_app(t, prec);
      case Kind::Lam: return print_lam(t, prec);
      case Kind::Pi: return print_pi(t, prec);
      case Kind::Mk: {
        const auto& m = t.as<node::Mk>();
        std::string out = "(<| ";
        for (std::size_t i = 0; i < m.fields.size(); ++i) {
          if (i) out += ", ";
          out += print(m.fields[i], kBinderLevel);
        }
        out += " |> : " + print(mk_app(mk_const(m.structure), m.params), kBinderLevel) + ")";
        return out;
      }
      case Kind::Proj:
      case Kind::Case1:
        return print_app(t, prec);
    }
    return "?";
  }

 private:
  std::string meta_name(MetaId id) const {
    if (opts_.metas) {
      if (const MetaVar* m = opts_.metas->find(id); m && !m->name.empty()) return "?" + m->name;
    }
    return "?" + std::to_string(id);
  }

  static std::string paren(std::string s, bool needed) { return needed ? "(" + s + ")" : s; }

  std::string print_app(const Term& t, int prec) {
    const Term& head = app_head(t);
    std::vector<Term> args = app_args(t);
    std::string head_text;
    std::vector<std::string> pieces;

    if (head.is<node::Const>() && opts_.notations) {
      if (const Notation* n = env_.notation_for_const(head.as<node::Const>().name)) {
        if (auto s = print_notation(*n, args, prec)) return *s;
      }
    }
    if (head.is<node::Proj>()) {
      const auto& p = head.as<node::Proj>();
      head_text = env_.field_name(p.structure, p.index);
      pieces.push_back(print(p.scrutinee, kAtomLevel));
    } else if (head.is<node::Case1>()) {
      const auto& c = head.as<node::Case1>();
      head_text = "case1";
      pieces.push_back(print(c.motive, kAtomLevel));
      pieces.push_back(print(c.branch, kAtomLevel));
      pieces.push_back(print(c.scrutinee, kAtomLevel));
    } else {
      head_text = print(head, kAtomLevel);
    }
    for (const auto& a : args) pieces.push_back(print(a, kAtomLevel));
    if (pieces.empty()) return head_text;
    std::string out = head_text;
    for (const auto& p : pieces) out += " " + p;
    return paren(out, prec > kAppLevel);
  }

  std::optional<std::string> print_notation(const Notation& n, const std::vector<Term>& args, int prec) {
    if (n.fixity == Fixity::Prefix) {
      if (args.size() != n.implicit + 1) return std::nullopt;
      std::string operand = print(args.back(), n.level);
      std::string sep = (!operand.empty() && is_op_char(operand[0])) ? " " : "";
      return paren(n.symbol + sep + operand, prec > n.level);
    }
    if (args.size() != n.implicit + 2) return std::nullopt;
    int lp = n.fixity == Fixity::InfixL ? n.level : n.level + 1;
    int rp = n.fixity == Fixity::InfixR ? n.level : n.level + 1;
    std::string lhs = print(args[args.size() - 2], lp);
    std::string rhs = print(args.back(), rp);
    return paren(lhs + " " + n.symbol + " " + rhs, prec > n.level);
  }

  std::string fresh_name(const std::string& base, const Term& body) {
    std::string stem = (base.empty() || base == "_") ? "x" : base;
    std::set<std::string> taken(names_.begin(), names_.end());
    for_each(body, [&](const Term& s) {
      if (s.is<node::FVar>()) taken.insert(s.as<node::FVar>().name);
      if (s.is<node::Const>()) taken.insert(s.as<node::Const>().name);
      return true;
    });
    if (!taken.count(stem)) return stem;
    for (int i = 1;; ++i) {
      std::string cand = stem + std::to_string(i);
      if (!taken.count(cand)) return cand;
    }
  }

  std::string print_lam(const Term& t, int prec) {
    const auto& l = t.as<node::Lam>();
    std::string dom = print(l.type, kBinderLevel);
    std::string name = fresh_name(l.binder, l.body);
    names_.push_back(name);
    std::string body = print(l.body, kBinderLevel);
    names_.pop_back();
    return paren("fun " + name + " : " + dom + " => " + body, prec > kBinderLevel);
  }

  std::string print_pi(const Term& t, int prec) {
    const auto& p = t.as<node::Pi>();
    if (p.codomain.loose_bound() == 0 || !uses_bvar0(p.codomain)) {
      std::string dom = print(p.domain, kArrowLevel + 1);
      names_.push_back("_");
      std::string cod = print(p.codomain, kArrowLevel);
      names_.pop_back();
      return paren(dom + " -> " + cod, prec > kArrowLevel);
    }
    // Group consecutive dependent binders over the same domain.
    std::string dom = print(p.domain, kBinderLevel);
    std::vector<std::string> binders;
    Term cur = t;
    Term domain = p.domain;
    std::size_t pushed = 0;
    while (true) {
      const auto& q = cur.as<node::Pi>();
      std::string name = fresh_name(q.binder, q.codomain);
      binders.push_back(name);
      names_.push_back(name);
      ++pushed;
      Term next = q.codomain;
      if (next.is<node::Pi>() && uses_bvar0(next.as<node::Pi>().codomain) &&
          next.as<node::Pi>().domain == lift_loose(domain, 1)) {
        domain = next.as<node::Pi>().domain;
        cur = next;
        continue;
      }
      std::string body = print(next, kBinderLevel);
      for (std::size_t i = 0; i < pushed; ++i) names_.pop_back();
      std::string out = "Pi";
      for (const auto& b : binders) out += " " + b;
      return paren(out + " : " + dom + ". " + body, prec > kBinderLevel);
    }
  }

  static bool uses_bvar0(const Term& body) {
    bool found = false;
    std::function<void(const Term&, std::uint32_t)> go = [&](const Term& s, std::uint32_t depth) {
      if (found || s.loose_bound() <= depth) return;
      switch (s.kind()) {
        case Kind::BVar:
          if (s.as<node::BVar>().index == depth) found = true;
          return;
        case Kind::App:
          go(s.as<node::App>().fn, depth);
          go(s.as<node::App>().arg, depth);
          return;
        case Kind::Lam:
          go(s.as<node::Lam>().type, depth);
          go(s.as<node::Lam>().body, depth + 1);
          return;
        case Kind::Pi:
          go(s.as<node::Pi>().domain, depth);
          go(s.as<node::Pi>().codomain, depth + 1);
          return;
        case Kind::Mk:
          for (const auto& x : s.as<node::Mk>().params) go(x, depth);
          for (const auto& x : s.as<node::Mk>().fields) go(x, depth);
          return;
        case Kind::Proj:
          go(s.as<node::Proj>().scrutinee, depth);
          return;
        case Kind::Case1:
          go(s.as<node::Case1>().motive, depth);
          go(s.as<node::Case1>().branch, depth);
          go(s.as<node::Case1>().scrutinee, depth);
          return;
        default:
          return;
      }
    };
    go(body, 0);
    return found;
  }

  const GlobalEnv& env_;
  const RenderOptions& opts_;
  std::vector<std::string> names_;
};

}  // namespace

std::string render_term(const GlobalEnv& env, const Term& t, const RenderOptions& opts) {
  Printer p(env, opts);
  return p.print(t, kBinderLevel);
}

std::string render_context(const GlobalEnv& env, const LocalContext& ctx, const RenderOptions& opts) {
  std::string out;
  for (const auto& d : ctx.decls()) {
    if (!out.empty()) out += ", ";
    out += d.name + " : " + render_term(env, d.type, opts);
  }
  return out;
}

}  // namespace hintelab
