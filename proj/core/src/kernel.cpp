#include "hintelab/kernel.hpp"

#include <algorithm>

#include "hintelab/error.hpp"
#include "hintelab/printer.hpp"

namespace hintelab {

void Fuel::consume(std::uint64_t n) {
  if (remaining_ < n) {
    remaining_ = 0;
    throw Error(ErrorKind::FuelExhausted, "reduction fuel exhausted");
  }
  remaining_ -= n;
}

Term subst(const Term& t, const Assignment& a) {
  if (a.fvars.empty() && a.metas.empty()) return t;
  return replace(t, [&](const Term& s, std::uint32_t) -> std::optional<Term> {
    if (!s.has_fvar() && !s.has_meta()) return s;
    if (s.is<node::FVar>()) {
      auto it = a.fvars.find(s.as<node::FVar>().id);
      return it == a.fvars.end() ? s : it->second;
    }
    if (s.is<node::Meta>()) {
      const auto& m = s.as<node::Meta>();
      auto it = a.metas.find(m.id);
      if (it == a.metas.end()) return s;
      for (FVarId v : collect_fvars(it->second)) {
        if (std::find(m.scope.begin(), m.scope.end(), v) == m.scope.end())
          throw Error(ErrorKind::ScopeViolation,
                      "replacement for ?" + std::to_string(m.id) + " mentions a variable outside its scope");
      }
      return it->second;
    }
    return std::nullopt;
  });
}

bool unfoldable(const GlobalEnv& env, const std::string& name, Policy policy) {
  if (policy == Policy::NoDelta) return false;
  const DefDecl* d = env.find_def(name);
  if (!d) return false;
  switch (d->reducibility) {
    case Reducibility::Opaque:
      return false;
    case Reducibility::CoercionReducible:
      return policy == Policy::Full;
    case Reducibility::Reducible:
      return policy == Policy::Full || !env.is_instance(name);
  }
  return false;
}

Term whnf(const GlobalEnv& env, const Term& t, Policy policy, Fuel& fuel) {
  Term cur = t;
  while (true) {
    const Term& head = app_head(cur);
    switch (head.kind()) {
      case Kind::Lam: {
        if (!cur.is<node::App>()) return cur;
        fuel.consume();
        std::vector<Term> args = app_args(cur);
        Term body = head;
        std::size_t used = 0;
        while (body.is<node::Lam>() && used < args.size()) {
          body = instantiate(body.as<node::Lam>().body, args[used]);
          ++used;
        }
        cur = mk_app(body, std::span<const Term>(args).subspan(used));
        continue;
      }
      case Kind::Const: {
        const auto& name = head.as<node::Const>().name;
        if (!unfoldable(env, name, policy)) return cur;
        fuel.consume();
        std::vector<Term> args = app_args(cur);
        cur = mk_app(env.find_def(name)->body, args);
        continue;
      }
      case Kind::Proj: {
        const auto& p = head.as<node::Proj>();
        Term s = whnf(env, p.scrutinee, policy, fuel);
        if (s.is<node::Mk>() && s.as<node::Mk>().structure == p.structure &&
            p.index < s.as<node::Mk>().fields.size()) {
          fuel.consume();
          cur = mk_app(s.as<node::Mk>().fields[p.index], app_args(cur));
          continue;
        }
        if (s.same_ptr(p.scrutinee)) return cur;
        return mk_app(mk_proj(p.structure, p.index, s), app_args(cur));
      }
      case Kind::Case1: {
        const auto& c = head.as<node::Case1>();
        Term s = whnf(env, c.scrutinee, policy, fuel);
        if (s.is<node::Star>()) {
          fuel.consume();
          cur = mk_app(c.branch, app_args(cur));
          continue;
        }
        if (s.same_ptr(c.scrutinee)) return cur;
        return mk_app(mk_case1(c.motive, c.branch, s), app_args(cur));
      }
      default:
        return cur;
    }
  }
}

Term whnf(const GlobalEnv& env, const Term& t, Policy policy) {
  Fuel fuel;
  return whnf(env, t, policy, fuel);
}

Term normalize_full(const GlobalEnv& env, const Term& t, Fuel& fuel) {
  Term w = whnf(env, t, Policy::Full, fuel);
  auto rec = [&](const Term& s) { return normalize_full(env, s, fuel); };
  switch (w.kind()) {
    case Kind::App: {
      std::vector<Term> args = app_args(w);
      for (auto& a : args) a = rec(a);
      return mk_app(rec(app_head(w)), args);
    }
    case Kind::Lam: {
      const auto& l = w.as<node::Lam>();
      return mk_lam(l.binder, rec(l.type), rec(l.body));
    }
    case Kind::Pi: {
      const auto& p = w.as<node::Pi>();
      return mk_pi(p.binder, rec(p.domain), rec(p.codomain));
    }
    case Kind::Mk: {
      const auto& m = w.as<node::Mk>();
      std::vector<Term> ps, fs;
      for (const auto& x : m.params) ps.push_back(rec(x));
      for (const auto& x : m.fields) fs.push_back(rec(x));
      return mk_mk(m.structure, std::move(ps), std::move(fs));
    }
    case Kind::Proj: {
      const auto& p = w.as<node::Proj>();
      return mk_proj(p.structure, p.index, rec(p.scrutinee));
    }
    case Kind::Case1: {
      const auto& c = w.as<node::Case1>();
      return mk_case1(rec(c.motive), rec(c.branch), rec(c.scrutinee));
    }
    default:
      return w;
  }
}

namespace {

Term beta(const Term& lam, const std::vector<Term>& args, std::size_t& used) {
  Term body = lam;
  used = 0;
  while (body.is<node::Lam>() && used < args.size()) {
    body = instantiate(body.as<node::Lam>().body, args[used]);
    ++used;
  }
  return body;
}

Term greedy(const GlobalEnv& env, const Term& t);

// Unfolds a coercion-plumbing constant applied to `args` when the unfolded body
// contracts a Case1-over-star or projection-over-literal redex at its head.
std::optional<Term> unlock(const GlobalEnv& env, const DefDecl& def, const std::vector<Term>& args) {
  std::size_t used = 0;
  Term body = beta(def.body, args, used);
  if (used < args.size() && body.is<node::Lam>()) return std::nullopt;
  std::vector<Term> rest(args.begin() + static_cast<std::ptrdiff_t>(used), args.end());
  if (body.is<node::Case1>()) {
    const auto& c = body.as<node::Case1>();
    Term s = greedy(env, c.scrutinee);
    if (!s.is<node::Star>()) return std::nullopt;
    return greedy(env, mk_app(c.branch, rest));
  }
  if (body.is<node::Proj>()) {
    const auto& p = body.as<node::Proj>();
    Term s = greedy(env, p.scrutinee);
    if (!s.is<node::Mk>() || s.as<node::Mk>().structure != p.structure) return std::nullopt;
    return greedy(env, mk_app(s.as<node::Mk>().fields[p.index], rest));
  }
  return std::nullopt;
}

Term greedy(const GlobalEnv& env, const Term& t) {
  switch (t.kind()) {
    case Kind::App: {
      std::vector<Term> args = app_args(t);
      for (auto& a : args) a = greedy(env, a);
      Term head = greedy(env, app_head(t));
      if (head.is<node::Lam>()) {
        std::size_t used = 0;
        Term body = beta(head, args, used);
        return greedy(env, mk_app(body, std::span<const Term>(args).subspan(used)));
      }
      if (head.is<node::Const>()) {
        const DefDecl* def = env.find_def(head.as<node::Const>().name);
        if (def && def->reducibility == Reducibility::CoercionReducible) {
          if (auto r = unlock(env, *def, args)) return *r;
        }
      }
      if (head.is<node::App>()) {
        // The head reduced to an application (e.g. a projection yielded `f a`).
        return greedy(env, mk_app(head, args));
      }
      return mk_app(head, args);
    }
    case Kind::Lam: {
      const auto& l = t.as<node::Lam>();
      return mk_lam(l.binder, greedy(env, l.type), greedy(env, l.body));
    }
    case Kind::Pi: {
      const auto& p = t.as<node::Pi>();
      return mk_pi(p.binder, greedy(env, p.domain), greedy(env, p.codomain));
    }
    case Kind::Mk: {
      const auto& m = t.as<node::Mk>();
      std::vector<Term> ps, fs;
      for (const auto& x : m.params) ps.push_back(greedy(env, x));
      for (const auto& x : m.fields) fs.push_back(greedy(env, x));
      return mk_mk(m.structure, std::move(ps), std::move(fs));
    }
    case Kind::Proj: {
      const auto& p = t.as<node::Proj>();
      Term s = greedy(env, p.scrutinee);
      if (s.is<node::Mk>() && s.as<node::Mk>().structure == p.structure)
        return s.as<node::Mk>().fields[p.index];
      return mk_proj(p.structure, p.index, s);
    }
    case Kind::Case1: {
      const auto& c = t.as<node::Case1>();
      Term s = greedy(env, c.scrutinee);
      Term b = greedy(env, c.branch);
      if (s.is<node::Star>()) return b;
      return mk_case1(greedy(env, c.motive), b, s);
    }
    case Kind::Const: {
      // A bare coercion constant with no arguments cannot be unlocked.
      return t;
    }
    default:
      return t;
  }
}

}  // namespace

Term normalize_greedy(const GlobalEnv& env, const Term& t) { return greedy(env, t); }

bool has_greedy_redex(const Term& t) {
  bool found = false;
  for_each(t, [&](const Term& s) {
    if (found) return false;
    if (s.is<node::Proj>()) {
      const auto& p = s.as<node::Proj>();
      if (p.scrutinee.is<node::Mk>() && p.scrutinee.as<node::Mk>().structure == p.structure) found = true;
    } else if (s.is<node::Case1>()) {
      if (s.as<node::Case1>().scrutinee.is<node::Star>()) found = true;
    }
    return !found;
  });
  return found;
}

bool conv(const GlobalEnv& env, const Term& a, const Term& b, Fuel& fuel) {
  if (a == b) return true;
  return normalize_full(env, a, fuel) == normalize_full(env, b, fuel);
}

bool conv(const GlobalEnv& env, const Term& a, const Term& b, std::uint64_t fuel) {
  Fuel f(fuel);
  return conv(env, a, b, f);
}

namespace {

class Checker {
 public:
  Checker(const GlobalEnv& env, const MetaTyping& metas, InferMode mode, Fuel& fuel)
      : env_(env), metas_(metas), mode_(mode), fuel_(fuel) {}

  Term infer(LocalContext& ctx, const Term& t) {
    switch (t.kind()) {
      case Kind::Sort:
      case Kind::UnitTy:
        return mk_sort();
      case Kind::Star:
        return mk_unit_ty();
      case Kind::BVar:
        throw Error(ErrorKind::Internal, "loose bound variable during type inference");
      case Kind::FVar: {
        const auto* d = ctx.find(t.as<node::FVar>().id);
        if (!d) throw Error(ErrorKind::UnboundName, "unbound local variable " + t.as<node::FVar>().name);
        return d->type;
      }
      case Kind::Const: {
        auto ty = env_.const_type(t.as<node::Const>().name);
        if (!ty) throw Error(ErrorKind::UnboundName, "unknown constant " + t.as<node::Const>().name);
        return *ty;
      }
      case Kind::Meta: {
        MetaId id = t.as<node::Meta>().id;
        const MetaVar* m = metas_.metas ? metas_.metas->find(id) : nullptr;
        if (!m) throw Error(ErrorKind::IllTyped, "unexpected metavariable ?" + std::to_string(id));
        return metas_.subst ? instantiate_metas(m->type, *metas_.subst) : m->type;
      }
      case Kind::App: {
        Term fty = infer(ctx, t.as<node::App>().fn);
        Term pi = whnf(env_, fty, Policy::Full, fuel_);
        if (!pi.is<node::Pi>())
          throw Error(ErrorKind::TypeMismatch,
                      "function expected, got term of type " + render_term(env_, fty));
        const Term& arg = t.as<node::App>().arg;
        if (mode_ == InferMode::Check) {
          Term aty = infer(ctx, arg);
          expect_conv(pi.as<node::Pi>().domain, aty, arg);
        }
        return instantiate(pi.as<node::Pi>().codomain, arg);
      }
      case Kind::Lam: {
        const auto& l = t.as<node::Lam>();
        if (mode_ == InferMode::Check) expect_sort(ctx, l.type);
        Term x = ctx.push(l.binder, l.type);
        Term body_ty = infer(ctx, instantiate(l.body, x));
        ctx.pop();
        return mk_pi(l.binder, l.type, abstract_fvar(body_ty, x.as<node::FVar>().id));
      }
      case Kind::Pi: {
        const auto& p = t.as<node::Pi>();
        if (mode_ == InferMode::Check) {
          expect_sort(ctx, p.domain);
          Term x = ctx.push(p.binder, p.domain);
          expect_sort(ctx, instantiate(p.codomain, x));
          ctx.pop();
        }
        return mk_sort();
      }
      case Kind::Mk:
        return infer_mk(ctx, t.as<node::Mk>());
      case Kind::Proj:
        return infer_proj(ctx, t.as<node::Proj>());
      case Kind::Case1: {
        const auto& c = t.as<node::Case1>();
        if (mode_ == InferMode::Check) {
          expect_conv(mk_pi("_", mk_unit_ty(), mk_sort()), infer(ctx, c.motive), c.motive);
          expect_conv(apply_motive(c.motive, mk_star()), infer(ctx, c.branch), c.branch);
          expect_conv(mk_unit_ty(), infer(ctx, c.scrutinee), c.scrutinee);
        }
        return apply_motive(c.motive, c.scrutinee);
      }
    }
    throw Error(ErrorKind::Internal, "unhandled term kind");
  }

 private:
  Term apply_motive(const Term& motive, const Term& arg) {
    if (motive.is<node::Lam>()) return instantiate(motive.as<node::Lam>().body, arg);
    return mk_app(motive, arg);
  }

  void expect_sort(LocalContext& ctx, const Term& ty) {
    Term s = whnf(env_, infer(ctx, ty), Policy::Full, fuel_);
    if (!s.is<node::Sort>()) throw Error(ErrorKind::TypeMismatch, "type expected: " + render_term(env_, ty));
  }

  void expect_conv(const Term& expected, const Term& actual, const Term& what) {
    Term e = metas_.subst ? instantiate_metas(expected, *metas_.subst) : expected;
    Term a = metas_.subst ? instantiate_metas(actual, *metas_.subst) : actual;
    if (!conv(env_, e, a, fuel_))
      throw Error(ErrorKind::TypeMismatch, "term " + render_term(env_, what) + " has type " +
                                               render_term(env_, a) + " but is expected to have type " +
                                               render_term(env_, e));
  }

  Term infer_mk(LocalContext& ctx, const node::Mk& m) {
    const StructureDecl* s = env_.find_structure(m.structure);
    if (!s) throw Error(ErrorKind::UnboundName, "unknown structure " + m.structure);
    if (m.params.size() != s->params.size() || m.fields.size() != s->fields.size())
      throw Error(ErrorKind::TypeMismatch, "structure " + m.structure + " expects " +
                                               std::to_string(s->params.size()) + " parameters and " +
                                               std::to_string(s->fields.size()) + " fields");
    std::vector<Term> tele;
    if (mode_ == InferMode::Check) {
      for (std::size_t i = 0; i < m.params.size(); ++i) {
        expect_conv(instantiate_rev(s->params[i].type, tele), infer(ctx, m.params[i]), m.params[i]);
        tele.push_back(m.params[i]);
      }
      for (std::size_t i = 0; i < m.fields.size(); ++i) {
        expect_conv(instantiate_rev(s->fields[i].type, tele), infer(ctx, m.fields[i]), m.fields[i]);
        tele.push_back(m.fields[i]);
      }
    }
    return mk_app(mk_const(m.structure), m.params);
  }

  Term infer_proj(LocalContext& ctx, const node::Proj& p) {
    const StructureDecl* s = env_.find_structure(p.structure);
    if (!s) throw Error(ErrorKind::UnboundName, "unknown structure " + p.structure);
    if (p.index >= s->fields.size()) throw Error(ErrorKind::TypeMismatch, "projection index out of range");
    Term sty = infer(ctx, p.scrutinee);
    if (metas_.subst) sty = instantiate_metas(sty, *metas_.subst);
    Term w = whnf(env_, sty, Policy::Full, fuel_);
    const Term& h = app_head(w);
    if (!h.is<node::Const>() || h.as<node::Const>().name != p.structure ||
        app_arity(w) != s->params.size())
      throw Error(ErrorKind::TypeMismatch, "projection " + s->fields[p.index].name + " applied to " +
                                               render_term(env_, p.scrutinee) + " of type " +
                                               render_term(env_, sty) + ", expected " + p.structure);
    std::vector<Term> tele = app_args(w);
    for (std::size_t j = 0; j < p.index; ++j) tele.push_back(mk_proj(p.structure, j, p.scrutinee));
    return instantiate_rev(s->fields[p.index].type, tele);
  }

  const GlobalEnv& env_;
  MetaTyping metas_;
  InferMode mode_;
  Fuel& fuel_;
};

}  // namespace

Term infer_type(const GlobalEnv& env, const LocalContext& ctx, const Term& t, const MetaTyping& metas,
                InferMode mode, Fuel& fuel) {
  LocalContext local = ctx;
  Checker c(env, metas, mode, fuel);
  return c.infer(local, t);
}

Term infer_type_core(const GlobalEnv& env, const LocalContext& ctx, const Term& t) {
  if (t.has_meta()) throw Error(ErrorKind::IllTyped, "infer_type_core on a term with metavariables");
  Fuel fuel;
  return infer_type(env, ctx, t, MetaTyping{}, InferMode::Check, fuel);
}

Term expand_instance(const GlobalEnv& env, const std::string& name) {
  const DefDecl* d = env.find_def(name);
  if (!d) throw Error(ErrorKind::NotAnInstance, name + " is not a definition");
  Fuel fuel;
  Term body = whnf(env, d->body, Policy::Full, fuel);
  if (!body.is<node::Mk>()) throw Error(ErrorKind::NotAnInstance, name + " does not reduce to a structure literal");
  const auto& mk = body.as<node::Mk>();
  const StructureDecl* s = env.find_structure(mk.structure);
  std::vector<Term> fields;
  for (std::size_t i = 0; i < mk.fields.size(); ++i) {
    if (s->fields[i].kind == FieldKind::Property)
      fields.push_back(mk_proj(mk.structure, i, mk_const(name)));
    else
      fields.push_back(normalize_full(env, mk.fields[i], fuel));
  }
  std::vector<Term> params;
  for (const auto& p : mk.params) params.push_back(normalize_full(env, p, fuel));
  return mk_mk(mk.structure, std::move(params), std::move(fields));
}

}  // namespace hintelab
