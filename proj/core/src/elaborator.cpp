#include "hintelab/elaborator.hpp"

#include <functional>
#include <set>

#include "hintelab/error.hpp"
#include "hintelab/kernel.hpp"
#include "hintelab/printer.hpp"

namespace hintelab {

namespace {

using FlatBinders = std::vector<std::pair<std::string, ExprPtr>>;

FlatBinders flatten(const std::vector<BinderGroup>& groups) {
  FlatBinders out;
  for (const auto& g : groups)
    for (const auto& n : g.names) out.emplace_back(n, g.type);
  return out;
}

Term beta(const Term& f, const Term& a) {
  if (f.is<node::Lam>()) return instantiate(f.as<node::Lam>().body, a);
  return mk_app(f, a);
}

template <typename F>
auto at_pos(SourcePos pos, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (Error& e) {
    e.set_pos(pos);
    throw;
  }
}

}  // namespace

Elaborator::Elaborator(GlobalEnv& env, HintDb& db, MetaContext& metas, Unifier& u)
    : env_(env), db_(db), metas_(metas), u_(u) {}

void Elaborator::begin_command() {
  named_.clear();
  u_.reset_fuel();
}

Term Elaborator::push_local(LocalContext& ctx, const std::string& name, Term type) {
  Term x = ctx.push(name, std::move(type));
  const LocalDecl& d = ctx.decls().back();
  locals_[d.id] = d;
  return x;
}

const LocalDecl* Elaborator::local(FVarId id) const {
  auto it = locals_.find(id);
  return it == locals_.end() ? nullptr : &it->second;
}

std::string Elaborator::show(const Term& t) const {
  return render_term(env_, u_.instantiate(t), RenderOptions{&metas_, true});
}

Term Elaborator::whnf_type(const Term& t) { return whnf(env_, u_.instantiate(t), Policy::Full, u_.fuel()); }

Elaborator::Spine Elaborator::spine_of(const ExprPtr& e) {
  Spine s;
  const Expr* cur = e.get();
  ExprPtr head = e;
  std::vector<ExprPtr> rev;
  while (cur->kind == ExprKind::App) {
    rev.push_back(cur->args[1]);
    head = cur->args[0];
    cur = head.get();
  }
  s.head = head;
  s.args.assign(rev.rbegin(), rev.rend());
  return s;
}

Term Elaborator::named_meta(LocalContext& ctx, const std::string& name, std::optional<Term> type) {
  if (auto it = named_.find(name); it != named_.end()) return it->second;
  Term ty = type ? *type : metas_.fresh("", mk_sort(), ctx.ids(), MetaOrigin::UserPlaceholder);
  Term m = metas_.fresh(name, ty, ctx.ids(), MetaOrigin::UserPlaceholder);
  named_[name] = m;
  return m;
}

Term Elaborator::detach(const LocalContext&, FVarId x, const Term& t) {
  Term cur = u_.instantiate(t);
  for (MetaId m : collect_metas(cur)) {
    if (u_.subst().assigned(m)) continue;
    const MetaVar& mv = metas_.get(m);
    if (std::find(mv.scope.begin(), mv.scope.end(), x) == mv.scope.end()) continue;
    const LocalDecl* d = local(x);
    if (!d) continue;
    std::vector<FVarId> scope;
    for (FVarId s : mv.scope)
      if (s != x) scope.push_back(s);
    Term ty = mk_pi(d->name, u_.instantiate(d->type), abstract_fvar(u_.instantiate(mv.type), x));
    Term outer = metas_.fresh(mv.name, ty, scope, mv.origin);
    u_.assign(m, mk_app(outer, mk_fvar(x, d->name)));
  }
  return u_.instantiate(cur);
}

Term Elaborator::close_binder(const LocalContext& ctx, FVarId x, const Term& t) {
  return abstract_fvar(detach(ctx, x, t), x);
}

Term Elaborator::coerce(const LocalContext& ctx, const Term& t, const Term& actual, const Term& expected,
                        SourcePos pos) {
  if (u_.unify(ctx, actual, expected)) return t;
  if (auto r = promote(u_, ctx, t, actual, expected)) return *r;
  throw Error(ErrorKind::TypeMismatch,
              show(t) + " has type " + show(actual) + " but is expected to have type " + show(expected), pos);
}

std::vector<Term> Elaborator::elab_binders(LocalContext& ctx, const std::vector<BinderGroup>& groups) {
  std::vector<Term> out;
  for (const auto& g : groups) {
    if (!g.type) throw Error(ErrorKind::SyntaxError, "binder needs a type", g.pos);
    Term ty = elab_type(ctx, g.type);
    for (const auto& n : g.names) out.push_back(push_local(ctx, n, ty));
  }
  return out;
}

Term Elaborator::elab_type(LocalContext& ctx, const ExprPtr& e) {
  return at_pos(e->pos, [&] {
    auto [t, ty] = infer(ctx, e);
    Term w = whnf_type(ty);
    if (w.is<node::Sort>()) return t;
    return coerce(ctx, t, ty, mk_sort(), e->pos);
  });
}

std::pair<Term, Term> Elaborator::infer(LocalContext& ctx, const ExprPtr& e) {
  return at_pos(e->pos, [&]() -> std::pair<Term, Term> {
    switch (e->kind) {
      case ExprKind::Var: {
        if (const LocalDecl* d = ctx.find_by_name(e->name)) return {mk_fvar(d->id, d->name), d->type};
        if (auto ty = env_.const_type(e->name)) return {mk_const(e->name), *ty};
        if (env_.find_projection(e->name) || env_.find_constructor(e->name)) return infer_app(ctx, e);
        throw Error(ErrorKind::UnboundName, "unknown identifier " + e->name, e->pos);
      }
      case ExprKind::Hole: {
        Term ty = metas_.fresh("", mk_sort(), ctx.ids(), MetaOrigin::UserPlaceholder);
        return {metas_.fresh("", ty, ctx.ids(), MetaOrigin::UserPlaceholder), ty};
      }
      case ExprKind::Meta: {
        Term m = named_meta(ctx, e->name, std::nullopt);
        return {m, metas_.get(m.as<node::Meta>().id).type};
      }
      case ExprKind::Sort:
        return {mk_sort(), mk_sort()};
      case ExprKind::UnitTy:
        return {mk_unit_ty(), mk_sort()};
      case ExprKind::Star:
        return {mk_star(), mk_unit_ty()};
      case ExprKind::App:
        return infer_app(ctx, e);
      case ExprKind::Lam:
        return infer_lam(ctx, e);
      case ExprKind::Pi:
        return {elab_pi(ctx, flatten(e->binders), 0, e->args[0]), mk_sort()};
      case ExprKind::Arrow: {
        Term d = elab_type(ctx, e->args[0]);
        Term c = elab_type(ctx, e->args[1]);
        return {mk_arrow(d, c), mk_sort()};
      }
      case ExprKind::Ascribe: {
        Term ty = elab_type(ctx, e->args[1]);
        return {check(ctx, e->args[0], ty), ty};
      }
      case ExprKind::Anon:
        throw Error(ErrorKind::TypeMismatch, "cannot infer the structure of <| ... |>; add a type ascription", e->pos);
      case ExprKind::Case1:
        return infer_case1(ctx, e);
    }
    throw Error(ErrorKind::Internal, "unhandled expression", e->pos);
  });
}

Term Elaborator::check(LocalContext& ctx, const ExprPtr& e, const Term& expected) {
  return at_pos(e->pos, [&]() -> Term {
    switch (e->kind) {
      case ExprKind::Hole:
        return metas_.fresh("", expected, ctx.ids(), MetaOrigin::UserPlaceholder);
      case ExprKind::Meta:
        if (!named_.count(e->name)) return named_meta(ctx, e->name, expected);
        break;
      case ExprKind::Lam:
        return check_lam(ctx, flatten(e->binders), 0, e->args[0], expected, e->pos);
      case ExprKind::Anon:
        return check_anon(ctx, e, expected);
      default:
        break;
    }
    auto [t, ty] = infer(ctx, e);
    return coerce(ctx, t, ty, expected, e->pos);
  });
}

Term Elaborator::check_arg(LocalContext& ctx, const ExprPtr& arg, const Term& domain, const std::string& binder) {
  if (arg->kind == ExprKind::Hole)
    return metas_.fresh(binder == "_" ? "" : binder, domain, ctx.ids(), MetaOrigin::UserPlaceholder);
  return check(ctx, arg, domain);
}

std::pair<Term, Term> Elaborator::infer_app(LocalContext& ctx, const ExprPtr& e) {
  Spine sp = spine_of(e);
  const Expr& h = *sp.head;
  std::optional<std::string> callable;
  std::size_t needed = 0;
  if (h.kind == ExprKind::Var && !ctx.find_by_name(h.name) && !env_.const_type(h.name)) {
    if (auto p = env_.find_projection(h.name)) {
      callable = h.name;
      needed = env_.find_structure(p->structure)->params.size() + 1;
    } else if (const StructureDecl* s = env_.find_constructor(h.name)) {
      callable = h.name;
      needed = s->params.size() + s->fields.size();
    }
  }

  Term fn;
  Term fty;
  if (callable) {
    fty = callable_type(env_, *callable);
  } else {
    std::tie(fn, fty) = infer(ctx, sp.head);
  }
  std::vector<Term> args;
  if (callable && env_.find_projection(*callable)) {
    // Structure parameters of a projection are implicit.
    for (std::size_t i = 0; i + 1 < needed; ++i) {
      const auto& pi = fty.as<node::Pi>();
      Term m = metas_.fresh(pi.binder, pi.domain, ctx.ids(), MetaOrigin::UserPlaceholder);
      args.push_back(m);
      fty = instantiate(pi.codomain, m);
    }
  }
  for (const auto& a : sp.args) {
    Term w = whnf_type(fty);
    if (!w.is<node::Pi>()) {
      std::string what = callable ? *callable : show(fn);
      throw Error(ErrorKind::TypeMismatch, what + " is applied to too many arguments; its type is " + show(fty),
                  a->pos);
    }
    const auto& pi = w.as<node::Pi>();
    Term v = check_arg(ctx, a, pi.domain, pi.binder);
    args.push_back(v);
    if (!callable) fn = mk_app(fn, v);
    fty = instantiate(pi.codomain, v);
  }
  if (!callable) return {fn, fty};
  if (args.size() >= needed) return {apply_callable(env_, *callable, args), fty};

  // Eta-expand partially applied projections and constructors.
  Term result_ty = fty;
  std::vector<Term> locals;
  while (args.size() < needed) {
    Term w = whnf_type(fty);
    const auto& pi = w.as<node::Pi>();
    Term x = push_local(ctx, pi.binder, pi.domain);
    locals.push_back(x);
    args.push_back(x);
    fty = instantiate(pi.codomain, x);
  }
  Term body = apply_callable(env_, *callable, args);
  for (auto it = locals.rbegin(); it != locals.rend(); ++it) {
    FVarId id = it->as<node::FVar>().id;
    body = mk_lam(it->as<node::FVar>().name, local(id)->type, close_binder(ctx, id, body));
    ctx.pop();
  }
  return {body, result_ty};
}

std::pair<Term, Term> Elaborator::infer_lam(LocalContext& ctx, const ExprPtr& e) {
  FlatBinders bs = flatten(e->binders);
  std::vector<Term> xs;
  for (const auto& [name, tyx] : bs) {
    Term ty = tyx ? elab_type(ctx, tyx) : metas_.fresh("", mk_sort(), ctx.ids(), MetaOrigin::UserPlaceholder);
    xs.push_back(push_local(ctx, name, ty));
  }
  auto [body, bty] = infer(ctx, e->args[0]);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
    const auto& fv = it->as<node::FVar>();
    Term dom = u_.instantiate(local(fv.id)->type);
    body = mk_lam(fv.name, dom, close_binder(ctx, fv.id, body));
    bty = mk_pi(fv.name, dom, close_binder(ctx, fv.id, bty));
    ctx.pop();
  }
  return {body, bty};
}

Term Elaborator::check_lam(LocalContext& ctx, const FlatBinders& binders, std::size_t i, const ExprPtr& body,
                           const Term& expected, SourcePos pos) {
  if (i == binders.size()) return check(ctx, body, expected);
  Term w = whnf_type(expected);
  if (!w.is<node::Pi>()) {
    if (i != 0) throw Error(ErrorKind::TypeMismatch, "function expected to have type " + show(expected), pos);
    std::vector<BinderGroup> groups;
    for (const auto& [n, t] : binders) groups.push_back(BinderGroup{{n}, t, pos});
    auto [t, ty] = infer_lam(ctx, make_expr(ExprKind::Lam, pos, "", {body}, groups));
    return coerce(ctx, t, ty, expected, pos);
  }
  const auto& pi = w.as<node::Pi>();
  Term dom = pi.domain;
  if (binders[i].second) {
    Term given = elab_type(ctx, binders[i].second);
    if (!u_.unify(ctx, given, dom))
      throw Error(ErrorKind::TypeMismatch,
                  "binder " + binders[i].first + " has type " + show(given) + ", expected " + show(dom),
                  binders[i].second->pos);
  }
  Term x = push_local(ctx, binders[i].first, dom);
  FVarId id = x.as<node::FVar>().id;
  Term b = check_lam(ctx, binders, i + 1, body, instantiate(pi.codomain, x), pos);
  Term out = mk_lam(binders[i].first, u_.instantiate(dom), close_binder(ctx, id, b));
  ctx.pop();
  return out;
}

Term Elaborator::elab_pi(LocalContext& ctx, const FlatBinders& binders, std::size_t i, const ExprPtr& body) {
  if (i == binders.size()) return elab_type(ctx, body);
  if (!binders[i].second) throw Error(ErrorKind::SyntaxError, "Pi binder needs a type", body->pos);
  Term dom = elab_type(ctx, binders[i].second);
  Term x = push_local(ctx, binders[i].first, dom);
  FVarId id = x.as<node::FVar>().id;
  Term cod = elab_pi(ctx, binders, i + 1, body);
  Term out = mk_pi(binders[i].first, u_.instantiate(dom), close_binder(ctx, id, cod));
  ctx.pop();
  return out;
}

Term Elaborator::check_anon(LocalContext& ctx, const ExprPtr& e, const Term& expected) {
  Term w = whnf_type(expected);
  const Term& head = app_head(w);
  const StructureDecl* s = head.is<node::Const>() ? env_.find_structure(head.as<node::Const>().name) : nullptr;
  if (!s) throw Error(ErrorKind::TypeMismatch, "<| ... |> is expected to have type " + show(expected) +
                                                   ", which is not a structure", e->pos);
  std::vector<Term> params = app_args(w);
  if (params.size() != s->params.size())
    throw Error(ErrorKind::TypeMismatch, "structure " + s->name + " is not fully applied", e->pos);
  if (e->args.size() != s->fields.size())
    throw Error(ErrorKind::TypeMismatch, s->name + " has " + std::to_string(s->fields.size()) + " fields, got " +
                                             std::to_string(e->args.size()), e->pos);
  std::vector<Term> tele = params;
  std::vector<Term> fields;
  for (std::size_t i = 0; i < s->fields.size(); ++i) {
    Term fty = instantiate_rev(s->fields[i].type, tele);
    Term v = check_arg(ctx, e->args[i], fty, s->fields[i].name);
    fields.push_back(v);
    tele.push_back(v);
  }
  return mk_mk(s->name, params, fields);
}

std::pair<Term, Term> Elaborator::infer_case1(LocalContext& ctx, const ExprPtr& e) {
  Term motive = check(ctx, e->args[0], mk_arrow(mk_unit_ty(), mk_sort()));
  Term scrut = check(ctx, e->args[2], mk_unit_ty());
  motive = u_.instantiate(motive);
  Term branch = check(ctx, e->args[1], beta(motive, mk_star()));
  return {mk_case1(motive, branch, scrut), beta(motive, scrut)};
}


ElabResult Elaborator::finish(Term term, Term type) {
  u_.solve_postponed();
  auto norm = [&](const Term& t) { return normalize_greedy(env_, u_.instantiate(t)); };
  Term t = norm(term);
  Term ty = norm(type);

  std::vector<Obligation> obs;
  std::function<void(MetaId)> obligate = [&](MetaId m) {
    if (u_.subst().assigned(m)) return;
    const MetaVar& mv = metas_.get(m);
    Term mt = norm(mv.type);
    for (MetaId inner : collect_metas(mt)) obligate(inner);
    mt = norm(mt);
    if (obligations_fail_)
      throw Error(ErrorKind::UnsolvedObligation,
                  "unsolved metavariable " + show(mk_meta(m)) + " : " + show(mt));
    std::vector<Term> args;
    std::vector<const LocalDecl*> decls;
    for (FVarId id : mv.scope) {
      if (const LocalDecl* d = local(id)) {
        decls.push_back(d);
        args.push_back(mk_fvar(id, d->name));
      } else if (occurs_fvar(mt, id)) {
        throw Error(ErrorKind::Internal, "obligation mentions an unknown local");
      }
    }
    Term closed = mt;
    for (auto it = decls.rbegin(); it != decls.rend(); ++it)
      closed = mk_pi((*it)->name, norm((*it)->type), abstract_fvar(closed, (*it)->id));
    std::string name = "obligation_" + std::to_string(++obligation_counter_);
    while (env_.contains(name)) name = "obligation_" + std::to_string(++obligation_counter_);
    env_.add(AxiomDecl{name, closed});
    u_.assign(m, mk_app(mk_const(name), args));
    obs.push_back({name, closed});
  };
  for (MetaId m : collect_metas(t)) obligate(m);
  for (MetaId m : collect_metas(ty)) obligate(m);
  return {norm(t), norm(ty), std::move(obs)};
}

ElabResult Elaborator::elaborate_check(const ExprPtr& e, const ExprPtr& type) {
  LocalContext ctx;
  Term ty = elab_type(ctx, type);
  Term t = check(ctx, e, ty);
  return finish(t, ty);
}

ElabResult Elaborator::elaborate_infer(const ExprPtr& e) {
  LocalContext ctx;
  auto [t, ty] = infer(ctx, e);
  return finish(t, ty);
}

RewriteResult Elaborator::rewrite_goal(const Goal& goal, const ExprPtr& eq, RewriteDirection dir,
                                       std::optional<std::size_t> occurrence) {
  LocalContext ctx = goal.ctx;
  auto [proof, pty] = infer(ctx, eq);
  Term ety;
  while (true) {
    Term w = whnf_type(pty);
    const Term& h = app_head(w);
    if (h.is<node::Const>() && h.as<node::Const>().name == "eq" && app_arity(w) == 3) {
      ety = w;
      break;
    }
    if (!w.is<node::Pi>())
      throw Error(ErrorKind::TypeMismatch, show(proof) + " is not an equation; its type is " + show(pty), eq->pos);
    const auto& pi = w.as<node::Pi>();
    Term m = metas_.fresh(pi.binder, pi.domain, ctx.ids(), MetaOrigin::UserPlaceholder);
    proof = mk_app(proof, m);
    pty = instantiate(pi.codomain, m);
  }
  std::vector<Term> eargs = app_args(ety);
  const Term& A = eargs[0];
  const Term& from = dir == RewriteDirection::LeftToRight ? eargs[1] : eargs[2];
  const Term& to = dir == RewriteDirection::LeftToRight ? eargs[2] : eargs[1];

  Term statement = u_.instantiate(goal.statement);
  std::vector<Term> cands;
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (t.loose_bound() == 0 && std::find(cands.begin(), cands.end(), t) == cands.end()) cands.push_back(t);
    switch (t.kind()) {
      case Kind::App: {
        const Term& h = app_head(t);
        if (!h.is<node::Const>() && !h.is<node::FVar>()) walk(h);
        for (const auto& a : app_args(t)) walk(a);
        break;
      }
      case Kind::Lam:
        walk(t.as<node::Lam>().type);
        walk(t.as<node::Lam>().body);
        break;
      case Kind::Pi:
        walk(t.as<node::Pi>().domain);
        walk(t.as<node::Pi>().codomain);
        break;
      case Kind::Mk:
        for (const auto& f : t.as<node::Mk>().fields) walk(f);
        break;
      case Kind::Proj:
        walk(t.as<node::Proj>().scrutinee);
        break;
      case Kind::Case1:
        walk(t.as<node::Case1>().branch);
        walk(t.as<node::Case1>().scrutinee);
        break;
      default:
        break;
    }
  };
  walk(statement);

  std::size_t want = occurrence.value_or(1);
  std::size_t seen = 0;
  std::optional<Term> matched;
  MetaTyping typing{&metas_, &u_.subst()};
  for (const auto& c : cands) {
    auto cp = u_.checkpoint();
    Term cty;
    try {
      cty = infer_type(env_, ctx, c, typing, InferMode::Synthesize, u_.fuel());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DepthExceeded || e.kind() == ErrorKind::FuelExhausted) throw;
      continue;
    }
    if (u_.unify(ctx, from, c) && u_.unify(ctx, A, cty) && ++seen == want) {
      matched = c;
      break;
    }
    u_.rollback(cp);
  }
  if (!matched)
    throw Error(ErrorKind::NoMatch, "no subterm of " + goal.name + " matches " + show(from), eq->pos);

  Term target = u_.instantiate(*matched);
  Term body = replace(statement, [&](const Term& s, std::uint32_t off) -> std::optional<Term> {
    if (s == target) return mk_bvar(off);
    return std::nullopt;
  });
  Term Ai = u_.instantiate(A);
  Term motive = mk_lam("z", Ai, body);
  Term next = normalize_greedy(env_, u_.instantiate(mk_app(motive, to)));

  Term e = dir == RewriteDirection::LeftToRight
               ? mk_app(mk_const("eqSym"), {Ai, u_.instantiate(from), u_.instantiate(to), proof})
               : proof;
  Term step = mk_lam("h", next, mk_app(mk_const("eqInd"), {Ai, u_.instantiate(to), motive, mk_bvar(0),
                                                           u_.instantiate(from), e}));
  ElabResult r = finish(step, mk_pi("h", next, statement));
  RewriteResult out;
  out.goal = Goal{goal.name, goal.ctx, normalize_greedy(env_, u_.instantiate(next))};
  out.matched = u_.instantiate(target);
  out.motive = u_.instantiate(motive);
  out.proof = r.term;
  out.obligations = std::move(r.obligations);
  return out;
}

HintSpec Elaborator::elaborate_hint(const Command& c) {
  LocalContext ctx;
  auto cp = u_.checkpoint();
  HintSpec spec;
  spec.name = c.name;
  spec.priority = c.priority;
  std::set<MetaId> tel;
  for (const auto& g : c.binders) {
    Term ty = elab_type(ctx, g.type);
    for (const auto& n : g.names) {
      if (named_.count(n)) throw Error(ErrorKind::NonlinearPattern, "?" + n + " bound twice", g.pos);
      Term m = metas_.fresh(n, ty, {}, MetaOrigin::HintPattern);
      named_[n] = m;
      spec.context.push_back(m.as<node::Meta>().id);
    }
  }
  for (const auto& e : c.telescope) {
    if (named_.count(e.name)) throw Error(ErrorKind::NonlinearPattern, "?" + e.name + " bound twice", e.pos);
    auto [d, dty] = infer(ctx, e.definition);
    Term m = metas_.fresh(e.name, normalize_greedy(env_, u_.instantiate(dty)), {}, MetaOrigin::HintPattern);
    MetaId id = m.as<node::Meta>().id;
    u_.assign(id, d);
    named_[e.name] = m;
    tel.insert(id);
    spec.telescope.push_back({id, d});
  }
  auto [p, pty] = infer(ctx, c.lhs);
  auto [q, qty] = infer(ctx, c.rhs);
  u_.unify(ctx, pty, qty);
  u_.solve_postponed();

  MetaSubstitution keep;
  for (const auto& [id, v] : u_.subst().assignments())
    if (!tel.count(id)) keep.assign(id, v);
  auto fin = [&](const Term& t) { return instantiate_metas(t, keep); };
  for (MetaId id : spec.context) metas_.set_type(id, fin(metas_.get(id).type));
  for (auto& e : spec.telescope) {
    e.definition = fin(e.definition);
    metas_.set_type(e.meta, fin(metas_.get(e.meta).type));
  }
  spec.lhs = fin(p);
  spec.rhs = fin(q);
  u_.rollback(cp);

  std::set<MetaId> declared(spec.context.begin(), spec.context.end());
  declared.insert(tel.begin(), tel.end());
  auto check_closed = [&](const Term& t) {
    for (MetaId m : collect_metas(t))
      if (!declared.count(m))
        throw Error(ErrorKind::IllTyped, "hint has an unsolved placeholder " + show(mk_meta(m)), c.pos);
  };
  check_closed(spec.lhs);
  check_closed(spec.rhs);
  for (const auto& e : spec.telescope) check_closed(e.definition);
  return spec;
}

NonuniformBranch Elaborator::elaborate_branch(const Command& c) {
  LocalContext ctx;
  auto cp = u_.checkpoint();
  elab_binders(ctx, c.binders);
  Term source = elab_type(ctx, c.source);
  Term target = elab_type(ctx, c.target);
  Term pattern = check(ctx, c.pattern, source);
  Term result = check(ctx, c.result, target);
  u_.solve_postponed();

  // Placeholders left in the branch become extra context variables.
  std::size_t fresh = 0;
  for (const Term* t : {&pattern, &result}) {
    for (MetaId m : collect_metas(u_.instantiate(*t))) {
      if (u_.subst().assigned(m)) continue;
      const MetaVar& mv = metas_.get(m);
      std::string name = mv.name.empty() ? "h" + std::to_string(++fresh) : mv.name;
      while (ctx.find_by_name(name)) name += "'";
      Term x = push_local(ctx, name, u_.instantiate(mv.type));
      u_.assign(m, x);
    }
  }
  NonuniformBranch b;
  b.context = ctx;
  b.source = u_.instantiate(source);
  b.target = u_.instantiate(target);
  b.pattern = u_.instantiate(pattern);
  b.result = u_.instantiate(result);
  u_.rollback(cp);
  return b;
}

}  // namespace hintelab
