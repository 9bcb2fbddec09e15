#include "hintelab/coercions.hpp"

#include <set>

#include "hintelab/error.hpp"
#include "hintelab/kernel.hpp"
#include "hintelab/printer.hpp"
#include "hintelab/syntax.hpp"

namespace hintelab {

void declare_prelude(GlobalEnv& env) {
  const Term type = mk_sort();
  const Term unit = mk_unit_ty();
  auto v = [](std::uint32_t i) { return mk_bvar(i); };

  // force : Pi (S : Type) (s : S) (T : Type) (t : T) (l : Unit). Type
  Term force_ty = mk_pi("S", type, mk_pi("s", v(0), mk_pi("T", type, mk_pi("t", v(0), mk_pi("l", unit, type)))));
  Term force_body =
      mk_lam("S", type, mk_lam("s", v(0), mk_lam("T", type, mk_lam("t", v(0), mk_lam("l", unit,
          mk_case1(mk_lam("_", unit, type), v(2), v(0)))))));
  env.add(DefDecl{"force", force_ty, force_body, Reducibility::CoercionReducible});

  // k : Pi (S : Type) (s : S) (T : Type) (t : T) (l : Unit). force S s T t l
  Term force_app = mk_app(mk_const("force"), {v(4), v(3), v(2), v(1), v(0)});
  Term k_ty = mk_pi("S", type, mk_pi("s", v(0), mk_pi("T", type, mk_pi("t", v(0), mk_pi("l", unit, force_app)))));
  Term motive = mk_lam("l", unit, mk_app(mk_const("force"), {v(5), v(4), v(3), v(2), v(0)}));
  Term k_body = mk_lam("S", type, mk_lam("s", v(0), mk_lam("T", type, mk_lam("t", v(0), mk_lam("l", unit,
      mk_case1(motive, v(1), v(0)))))));
  env.add(DefDecl{"k", k_ty, k_body, Reducibility::CoercionReducible});

  // eq : Pi (A : Type). A -> A -> Type
  env.add(AxiomDecl{"eq", mk_pi("A", type, mk_arrow(v(0), mk_arrow(v(0), type)))});
  auto eq = [](Term a, Term x, Term y) { return mk_app(mk_const("eq"), {std::move(a), std::move(x), std::move(y)}); };
  // eqRefl : Pi (A : Type) (a : A). eq A a a
  env.add(AxiomDecl{"eqRefl", mk_pi("A", type, mk_pi("a", v(0), eq(v(1), v(0), v(0))))});
  // eqInd : Pi (A : Type) (a : A) (P : A -> Type). P a -> Pi (b : A). eq A a b -> P b
  Term ind = mk_pi("A", type, mk_pi("a", v(0), mk_pi("P", mk_arrow(v(1), type),
      mk_pi("h", mk_app(v(0), v(1)), mk_pi("b", v(3), mk_pi("e", eq(v(4), v(3), v(0)), mk_app(v(3), v(1))))))));
  env.add(AxiomDecl{"eqInd", ind});
  // eqSym : Pi (A : Type) (a b : A). eq A a b -> eq A b a
  env.add(AxiomDecl{"eqSym", mk_pi("A", type, mk_pi("a", v(0), mk_pi("b", v(1),
      mk_arrow(eq(v(2), v(1), v(0)), eq(v(2), v(0), v(1))))))});
  for (const auto& n : prelude_notations()) env.add_notation(n);
}

Term callable_type(const GlobalEnv& env, const std::string& name) {
  if (auto ty = env.const_type(name)) return *ty;
  if (auto pinfo = env.find_projection(name)) {
    const StructureDecl& s = *env.find_structure(pinfo->structure);
    LocalContext ctx;
    std::vector<Term> params;
    for (const auto& b : s.params) params.push_back(ctx.push(b.name, instantiate_rev(b.type, params)));
    Term self = ctx.push("s", mk_app(mk_const(s.name), params));
    std::vector<Term> tele = params;
    for (std::size_t j = 0; j < pinfo->index; ++j) tele.push_back(mk_proj(s.name, j, self));
    return ctx.close_pi(instantiate_rev(s.fields[pinfo->index].type, tele));
  }
  if (const StructureDecl* s = env.find_constructor(name)) return s->constructor_type();
  throw Error(ErrorKind::UnboundName, "unknown constant " + name);
}

Term apply_callable(const GlobalEnv& env, const std::string& name, const std::vector<Term>& args) {
  if (env.const_type(name)) return mk_app(mk_const(name), args);
  if (auto pinfo = env.find_projection(name)) {
    std::size_t np = env.find_structure(pinfo->structure)->params.size();
    if (args.size() <= np) throw Error(ErrorKind::TypeMismatch, "projection " + name + " needs its structure argument");
    Term t = mk_proj(pinfo->structure, pinfo->index, args[np]);
    return mk_app(t, std::span<const Term>(args).subspan(np + 1));
  }
  if (const StructureDecl* s = env.find_constructor(name)) {
    std::size_t np = s->params.size(), nf = s->fields.size();
    if (args.size() < np + nf) throw Error(ErrorKind::TypeMismatch, "constructor " + name + " is not fully applied");
    Term t = mk_mk(s->name, std::vector<Term>(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(np)),
                   std::vector<Term>(args.begin() + static_cast<std::ptrdiff_t>(np),
                                     args.begin() + static_cast<std::ptrdiff_t>(np + nf)));
    return mk_app(t, std::span<const Term>(args).subspan(np + nf));
  }
  throw Error(ErrorKind::UnboundName, "unknown constant " + name);
}

std::size_t pi_arity(const Term& type) {
  std::size_t n = 0;
  const Term* t = &type;
  while (t->is<node::Pi>()) {
    ++n;
    t = &t->as<node::Pi>().codomain;
  }
  return n;
}

const UniformCoercion& declare_uniform(const GlobalEnv& env, HintDb& db, const std::string& fn,
                                       std::size_t arg_index) {
  Term ty = callable_type(env, fn);
  std::size_t arity = pi_arity(ty);
  if (arg_index == 0 || arg_index > arity)
    throw Error(ErrorKind::InvalidArgIndex, fn + " has " + std::to_string(arity) + " arguments; position " +
                                                std::to_string(arg_index) + " is out of range");
  const Term* t = &ty;
  for (std::size_t i = 1; i < arg_index; ++i) t = &t->as<node::Pi>().codomain;
  Term source = t->as<node::Pi>().domain;
  Term target = ty;
  for (std::size_t i = 0; i < arity; ++i) target = target.as<node::Pi>().codomain;
  UniformCoercion c;
  c.fn = fn;
  c.arg_index = arg_index;
  c.arity = arity;
  c.fn_type = ty;
  c.source_key = key_of(env, source, db.key_depth());
  c.target_key = key_of(env, target, db.key_depth());
  return db.add_coercion(env, std::move(c));
}

HintSpec compile_nonuniform(MetaContext& metas, const NonuniformBranch& b) {
  HintSpec spec;
  Assignment a;
  std::set<std::string> names;
  for (const auto& d : b.context.decls()) {
    Term ty = subst(d.type, a);
    Term m = metas.fresh(d.name, ty, {}, MetaOrigin::HintPattern);
    a.fvars[d.id] = m;
    spec.context.push_back(m.as<node::Meta>().id);
    names.insert(d.name);
  }
  auto fresh_name = [&](std::string n) {
    while (names.count(n)) n += "'";
    names.insert(n);
    return n;
  };
  Term source = subst(b.source, a);
  Term target = subst(b.target, a);
  Term pattern = subst(b.pattern, a);
  Term result = subst(b.result, a);

  Term mt = metas.fresh(fresh_name("T"), mk_sort(), {}, MetaOrigin::HintPattern);
  Term mtt = metas.fresh(fresh_name("t"), target, {}, MetaOrigin::HintPattern);
  Term ml = metas.fresh(fresh_name("l"), mk_unit_ty(), {}, MetaOrigin::HintPattern);
  spec.telescope.push_back({mt.as<node::Meta>().id, target});
  spec.telescope.push_back({mtt.as<node::Meta>().id, result});
  spec.telescope.push_back({ml.as<node::Meta>().id, mk_star()});
  spec.lhs = mk_app(mk_const("force"), {source, pattern, mt, mtt, ml});
  spec.rhs = target;
  spec.from_coercion = true;
  return spec;
}

const Hint& declare_nonuniform(const GlobalEnv& env, HintDb& db, MetaContext& metas, const NonuniformBranch& branch,
                               std::string name, std::optional<int> priority) {
  HintSpec spec = compile_nonuniform(metas, branch);
  spec.name = name.empty() ? "coercion_" + std::to_string(db.hints().size() + 1) : std::move(name);
  spec.priority = priority;
  return db.declare_hint(env, metas, std::move(spec));
}

namespace {

std::optional<Term> apply_uniform(Unifier& u, const LocalContext& ctx, const UniformCoercion& c, const Term& term,
                                  const Term& actual, const Term& expected) {
  const GlobalEnv& env = u.env();
  std::vector<Term> args;
  Term ty = c.fn_type;
  std::vector<std::pair<Term, Term>> problems;
  for (std::size_t i = 1; i <= c.arity; ++i) {
    const auto& p = ty.as<node::Pi>();
    Term arg;
    if (i == c.arg_index) {
      arg = term;
      problems.emplace_back(p.domain, actual);
    } else {
      arg = u.metas().fresh("", p.domain, ctx.ids(), MetaOrigin::CoercionSlot);
    }
    args.push_back(arg);
    ty = instantiate(p.codomain, arg);
  }
  problems.emplace_back(ty, expected);
  for (const auto& [x, y] : problems)
    if (!u.unify(ctx, x, y)) return std::nullopt;
  return normalize_greedy(env, u.instantiate(apply_callable(env, c.fn, args)));
}

}  // namespace

std::optional<Term> promote(Unifier& u, const LocalContext& ctx, const Term& term, const Term& actual,
                            const Term& expected) {
  const GlobalEnv& env = u.env();
  Term a = u.instantiate(actual);
  Term e = u.instantiate(expected);
  for (std::size_t idx : u.db().retrieve_coercions(env, a, e)) {
    const UniformCoercion& c = u.db().coercions()[idx];
    auto cp = u.checkpoint();
    if (auto r = apply_uniform(u, ctx, c, term, a, e)) return r;
    u.rollback(cp);
  }

  auto scope = ctx.ids();
  Term mt = u.metas().fresh("T", mk_sort(), scope, MetaOrigin::CoercionSlot);
  Term mtt = u.metas().fresh("t", mt, scope, MetaOrigin::CoercionSlot);
  Term ml = u.metas().fresh("l", mk_unit_ty(), scope, MetaOrigin::CoercionSlot);
  Term forced = mk_app(mk_const("force"), {a, term, mt, mtt, ml});
  if (!u.unify(ctx, forced, e)) return std::nullopt;
  Term promoted = u.instantiate(mk_app(mk_const("k"), {a, term, mt, mtt, ml}));
  return normalize_greedy(env, promoted);
}

}  // namespace hintelab
