#include "hintelab/unifier.hpp"

#include <algorithm>
#include <set>

#include "hintelab/error.hpp"
#include "hintelab/printer.hpp"

namespace hintelab {

namespace {

bool subset(const std::vector<FVarId>& xs, const std::vector<FVarId>& ys) {
  return std::all_of(xs.begin(), xs.end(), [&](FVarId x) { return std::find(ys.begin(), ys.end(), x) != ys.end(); });
}

// Partial application of `t`'s head to all but its last `drop` arguments.
Term drop_args(const Term& t, std::size_t drop) {
  std::vector<Term> args = app_args(t);
  args.resize(args.size() - drop);
  return mk_app(app_head(t), args);
}

std::vector<Term> last_args(const Term& t, std::size_t n) {
  std::vector<Term> args = app_args(t);
  return std::vector<Term>(args.end() - static_cast<std::ptrdiff_t>(n), args.end());
}

}  // namespace

Unifier::Unifier(const GlobalEnv& env, const HintDb& db, MetaContext& metas, UnifierConfig config)
    : env_(env), db_(db), metas_(metas), config_(config), fuel_(config.fuel) {}

void Unifier::rollback(const Checkpoint& s) {
  subst_ = s.subst;
  postponed_.resize(s.postponed);
}

std::string Unifier::show(const Term& t) const {
  return render_term(env_, instantiate(t), RenderOptions{&metas_, true});
}

void Unifier::trace(std::size_t depth, const std::string& msg) {
  if (trace_) trace_("[depth " + std::to_string(depth) + "] " + msg);
}

bool Unifier::unify(const LocalContext& ctx, const Term& a, const Term& b) {
  Snapshot s = save();
  try {
    if (unify_at(ctx, a, b, 0)) {
      if (observer_) observer_(ctx, instantiate(a), instantiate(b));
      return true;
    }
  } catch (...) {
    restore(s);
    throw;
  }
  restore(s);
  return false;
}

bool Unifier::is_flex(const Term& t) const {
  const Term& h = app_head(t);
  if (!h.is<node::Meta>()) return false;
  MetaId id = h.as<node::Meta>().id;
  if (subst_.assigned(id)) return false;
  const MetaVar* m = metas_.find(id);
  return !m || m->origin != MetaOrigin::HintPattern;
}

bool Unifier::unify_at(const LocalContext& ctx, const Term& a0, const Term& b0, std::size_t depth) {
  fuel_.consume();
  Term a = instantiate(a0);
  Term b = instantiate(b0);
  if (a == b) return true;

  Snapshot s = save();
  if (structural(ctx, a, b, depth)) return true;
  restore(s);
  if (try_hints(ctx, a, b, depth)) return true;
  restore(s);

  Term fa = whnf(env_, a, Policy::Full, fuel_);
  Term fb = whnf(env_, b, Policy::Full, fuel_);
  if (fa == a && fb == b) return false;
  trace(depth, "unfold " + show(a) + " =?= " + show(b));
  if (unify_at(ctx, fa, fb, depth)) return true;
  restore(s);
  return false;
}

bool Unifier::structural(const LocalContext& ctx, const Term& a0, const Term& b0, std::size_t depth) {
  Term a = whnf(env_, a0, Policy::NoDelta, fuel_);
  Term b = whnf(env_, b0, Policy::NoDelta, fuel_);
  if (a == b) return true;

  bool fa = is_flex(a), fb = is_flex(b);
  if (fa && fb && a.is<node::Meta>() && b.is<node::Meta>()) {
    // Newer metavariable points at the older one.
    bool a_newer = a.as<node::Meta>().id > b.as<node::Meta>().id;
    int r = a_newer ? assign_pattern(ctx, a, b, depth) : assign_pattern(ctx, b, a, depth);
    if (r == 1) return true;
    r = a_newer ? assign_pattern(ctx, b, a, depth) : assign_pattern(ctx, a, b, depth);
    return r == 1;
  }
  if (fa || fb) {
    int ra = fa ? assign_pattern(ctx, a, b, depth) : -1;
    if (ra == 1) return true;
    int rb = fb ? assign_pattern(ctx, b, a, depth) : -1;
    if (rb == 1) return true;
    if (ra == 0 || rb == 0) return false;
    postponed_.push_back({ctx, a, b, depth});
    return true;
  }

  // Same constant head: try the arguments before unfolding anything.
  const Term& ha = app_head(a);
  const Term& hb = app_head(b);
  if (ha.is<node::Const>() && hb.is<node::Const>() && ha.as<node::Const>().name == hb.as<node::Const>().name &&
      app_arity(a) == app_arity(b)) {
    Snapshot s = save();
    if (args_pairwise(ctx, app_args(a), app_args(b), depth)) return true;
    restore(s);
  }

  Term a2 = whnf(env_, a, Policy::NoInstanceDelta, fuel_);
  Term b2 = whnf(env_, b, Policy::NoInstanceDelta, fuel_);
  if (!(a2 == a) || !(b2 == b)) {
    if (a2 == b2) return true;
    if (is_flex(a2) || is_flex(b2)) return structural(ctx, a2, b2, depth);
  }
  return rigid(ctx, a2, b2, depth);
}

bool Unifier::args_pairwise(const LocalContext& ctx, const std::vector<Term>& xs, const std::vector<Term>& ys,
                            std::size_t depth) {
  if (xs.size() != ys.size()) return false;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!unify_at(ctx, xs[i], ys[i], depth)) return false;
  return true;
}

bool Unifier::binders(const LocalContext& ctx, const std::string& name, const Term& d1, const Term& b1,
                      const Term& d2, const Term& b2, std::size_t depth) {
  if (!unify_at(ctx, d1, d2, depth)) return false;
  LocalContext inner = ctx;
  Term x = inner.push(name, instantiate(d1));
  return unify_at(inner, hintelab::instantiate(b1, x), hintelab::instantiate(b2, x), depth);
}

bool Unifier::rigid(const LocalContext& ctx, const Term& a, const Term& b, std::size_t depth) {
  if (a.kind() == b.kind()) {
    switch (a.kind()) {
      case Kind::Sort:
      case Kind::UnitTy:
      case Kind::Star:
        return true;
      case Kind::FVar:
        return a.as<node::FVar>().id == b.as<node::FVar>().id;
      case Kind::Const:
        return a.as<node::Const>().name == b.as<node::Const>().name;
      case Kind::Meta:
        return a.as<node::Meta>().id == b.as<node::Meta>().id;
      case Kind::Pi: {
        const auto& p = a.as<node::Pi>();
        const auto& q = b.as<node::Pi>();
        return binders(ctx, p.binder, p.domain, p.codomain, q.domain, q.codomain, depth);
      }
      case Kind::Lam: {
        const auto& p = a.as<node::Lam>();
        const auto& q = b.as<node::Lam>();
        return binders(ctx, p.binder, p.type, p.body, q.type, q.body, depth);
      }
      case Kind::Mk: {
        const auto& p = a.as<node::Mk>();
        const auto& q = b.as<node::Mk>();
        return p.structure == q.structure && args_pairwise(ctx, p.params, q.params, depth) &&
               args_pairwise(ctx, p.fields, q.fields, depth);
      }
      case Kind::Proj: {
        const auto& p = a.as<node::Proj>();
        const auto& q = b.as<node::Proj>();
        return p.structure == q.structure && p.index == q.index && unify_at(ctx, p.scrutinee, q.scrutinee, depth);
      }
      case Kind::Case1: {
        const auto& p = a.as<node::Case1>();
        const auto& q = b.as<node::Case1>();
        return unify_at(ctx, p.motive, q.motive, depth) && unify_at(ctx, p.branch, q.branch, depth) &&
               unify_at(ctx, p.scrutinee, q.scrutinee, depth);
      }
      case Kind::BVar:
      case Kind::App:
        break;
    }
  }
  // Eta.
  if (a.is<node::Lam>() != b.is<node::Lam>()) {
    const Term& lam = a.is<node::Lam>() ? a : b;
    const Term& other = a.is<node::Lam>() ? b : a;
    const auto& l = lam.as<node::Lam>();
    LocalContext inner = ctx;
    Term x = inner.push(l.binder, l.type);
    Term body = hintelab::instantiate(l.body, x);
    Term applied = mk_app(other, x);
    return a.is<node::Lam>() ? unify_at(inner, body, applied, depth) : unify_at(inner, applied, body, depth);
  }
  // Spine decomposition: align the trailing arguments, unify the partial heads.
  std::size_t n = app_arity(a), m = app_arity(b);
  std::size_t k = std::min(n, m);
  if (k == 0) return false;
  const Term& ha = app_head(a);
  const Term& hb = app_head(b);
  auto atom = [](const Term& h) { return h.is<node::Const>() || h.is<node::FVar>(); };
  if (atom(ha) && atom(hb) && !(ha == hb)) return false;
  if (!unify_at(ctx, drop_args(a, k), drop_args(b, k), depth)) return false;
  return args_pairwise(ctx, last_args(a, k), last_args(b, k), depth);
}

bool Unifier::prune(const Term& value, const std::vector<FVarId>& allowed) {
  for (MetaId id : collect_metas(value)) {
    if (subst_.assigned(id)) continue;
    const MetaVar& mv = metas_.get(id);
    if (subset(mv.scope, allowed)) continue;
    if (mv.origin == MetaOrigin::HintPattern) return false;
    std::vector<FVarId> scope;
    for (FVarId f : mv.scope)
      if (std::find(allowed.begin(), allowed.end(), f) != allowed.end()) scope.push_back(f);
    Term ty = instantiate(mv.type);
    if (!subset(collect_fvars(ty), scope)) return false;
    Term fresh = metas_.fresh(mv.name, ty, scope, mv.origin);
    subst_.assign(id, fresh);
  }
  return true;
}

int Unifier::assign_pattern(const LocalContext& ctx, const Term& flex, const Term& value0, std::size_t depth) {
  const Term& head = app_head(flex);
  MetaId id = head.as<node::Meta>().id;
  const MetaVar& mv = metas_.get(id);
  std::vector<Term> args = app_args(flex);
  std::vector<FVarId> xs;
  for (const auto& x : args) {
    if (!x.is<node::FVar>()) return -1;
    FVarId f = x.as<node::FVar>().id;
    if (std::find(xs.begin(), xs.end(), f) != xs.end()) return -1;
    xs.push_back(f);
  }
  Term value = instantiate(value0);
  if (occurs_meta(value, id)) return 0;
  Snapshot snap = save();
  auto fail = [&] {
    restore(snap);
    return 0;
  };
  std::vector<FVarId> allowed = mv.scope;
  allowed.insert(allowed.end(), xs.begin(), xs.end());
  if (!subset(collect_fvars(value), allowed)) return 0;
  if (!prune(value, allowed)) return fail();
  value = instantiate(value);

  for (auto i = xs.size(); i-- > 0;) {
    const LocalDecl* d = ctx.find(xs[i]);
    if (!d) return fail();
    value = mk_lam(d->name, d->type, abstract_fvar(value, xs[i]));
  }

  // The solution must have the metavariable's type.
  std::optional<Term> vty;
  try {
    Fuel local(config_.fuel);
    vty = infer_type(env_, ctx, value, MetaTyping{&metas_, &subst_}, InferMode::Synthesize, local);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::FuelExhausted || e.kind() == ErrorKind::DepthExceeded) throw;
  }
  subst_.assign(id, value);
  ++stats_.assignments;
  if (vty && !unify_at(ctx, mv.type, *vty, depth)) return fail();
  if (mv.origin != MetaOrigin::HintFresh)
    trace(depth, "assign " + render_term(env_, mk_meta(id), RenderOptions{&metas_, true}) + " := " + show(value));
  return 1;
}

bool Unifier::try_hints(const LocalContext& ctx, const Term& a, const Term& b, std::size_t depth) {
  // A flexible side matches every pattern; hints only refine rigid problems.
  if (is_flex(a) || is_flex(b)) return false;
  std::vector<HintCandidate> cands = db_.retrieve_hints(env_, a, b);
  if (cands.empty()) return false;
  if (depth + 1 > config_.max_hint_depth)
    throw Error(ErrorKind::DepthExceeded, "hint depth bound " + std::to_string(config_.max_hint_depth) +
                                              " exceeded while unifying " + show(a) + " =?= " + show(b));
  std::size_t level = depth + 1;
  stats_.max_depth = std::max(stats_.max_depth, level);
  std::vector<FVarId> scope = ctx.ids();
  for (const auto& c : cands) {
    const Hint& h = db_.hints()[c.index];
    ++stats_.hint_attempts;
    bool lr = c.orientation == Orientation::LeftToRight;
    trace(level, "hint " + h.name + (lr ? " " : " (reversed) ") + "on " + show(a) + " =?= " + show(b));
    Snapshot s = save();

    // Fresh copies of every pattern metavariable.
    MetaSubstitution rename;
    auto freshen = [&](MetaId old) {
      const MetaVar& mv = metas_.get(old);
      Term ty = instantiate_metas(mv.type, rename);
      Term fresh = metas_.fresh(mv.name, ty, scope, MetaOrigin::HintFresh);
      MetaId nid = fresh.as<node::Meta>().id;
      metas_.set_name(nid, mv.name + "_" + std::to_string(nid));
      rename.assign(old, fresh);
    };
    for (MetaId m : h.context) freshen(m);
    for (const auto& e : h.telescope) freshen(e.meta);
    Term p = instantiate_metas(h.lhs, rename);
    Term q = instantiate_metas(h.rhs, rename);

    bool ok = lr ? unify_at(ctx, p, a, level) && unify_at(ctx, q, b, level)
                 : unify_at(ctx, q, a, level) && unify_at(ctx, p, b, level);
    for (std::size_t i = 0; ok && i < h.telescope.size(); ++i) {
      const auto& e = h.telescope[i];
      ok = unify_at(ctx, *rename.lookup(e.meta), instantiate_metas(e.definition, rename), level);
    }
    if (ok) {
      ++stats_.hint_successes;
      trace(level, "hint " + h.name + " solved " + show(a) + " =?= " + show(b));
      return true;
    }
    trace(level, "hint " + h.name + " failed");
    restore(s);
  }
  return false;
}

bool Unifier::solve_postponed() {
  bool progress = true;
  while (progress && !postponed_.empty()) {
    progress = false;
    std::vector<Postponed> work;
    work.swap(postponed_);
    for (auto& p : work) {
      Term l = instantiate(p.lhs);
      Term r = instantiate(p.rhs);
      std::size_t before = postponed_.size();
      if (!unify_at(p.ctx, l, r, p.depth)) return false;
      bool requeued = postponed_.size() > before && postponed_.back().lhs == l && postponed_.back().rhs == r;
      if (!requeued) progress = true;
    }
  }
  return postponed_.empty();
}

}  // namespace hintelab
