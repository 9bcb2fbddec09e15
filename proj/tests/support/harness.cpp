#include "harness.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <set>
#include <sstream>

#include "hintelab/coercions.hpp"
#include "hintelab/error.hpp"
#include "hintelab/kernel.hpp"
#include "hintelab/printer.hpp"

#ifndef HINTELAB_CORPUS_DIR
#error "HINTELAB_CORPUS_DIR must be defined"
#endif

namespace hintelab::testing {

std::filesystem::path corpus_dir() { return HINTELAB_CORPUS_DIR; }

namespace {

Run finish_run(std::unique_ptr<Session> s, const std::function<int(Session&, std::ostream&, std::ostream&)>& go) {
  Run r;
  std::ostringstream out, err;
  auto t0 = std::chrono::steady_clock::now();
  r.code = go(*s, out, err);
  r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.session = std::move(s);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

Run run_corpus(const std::string& file, SessionOptions opts) {
  auto path = corpus_dir() / file;
  return finish_run(std::make_unique<Session>(opts),
                    [&](Session& s, std::ostream& o, std::ostream& e) { return s.run_file(path, o, e); });
}

Run run_source(const std::string& text, SessionOptions opts) {
  return finish_run(std::make_unique<Session>(opts), [&](Session& s, std::ostream& o, std::ostream& e) {
    Script script;
    try {
      script = parse_script(text, "<input>", corpus_dir());
    } catch (const Error& err) {
      e << "<input>: error: [" << to_string(err.kind()) << "] " << err.what() << "\n";
      return static_cast<int>(kExitSyntax);
    }
    return s.run(script, o, e);
  });
}

std::vector<std::string> lines_with(const std::string& text, const std::string& prefix) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(prefix, 0) == 0) out.push_back(line.substr(prefix.size()));
  return out;
}

std::vector<std::string> corpus_scripts() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir())) {
    auto name = e.path().filename().string();
    if (e.path().extension() != ".hl" || name.find("_decls") != std::string::npos) continue;
    out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t unsound_solutions(Session& s) {
  std::size_t bad = 0;
  for (const auto& p : s.solved()) {
    try {
      if (!conv(s.env(), p.lhs, p.rhs)) ++bad;
    } catch (const Error&) {
      ++bad;
    }
  }
  return bad;
}

// Random problems

namespace {

class IntTermGen {
 public:
  IntTermGen(Session& s, std::mt19937_64& rng) : s_(s), rng_(rng) {}

  Term term(int depth) {
    int pick = depth <= 0 ? roll(4) : roll(11);
    switch (pick) {
      case 0: return mk_const(atom());
      case 1: return mk_const("0");
      case 2: return unit();
      case 3: return meta();
      case 4: case 5: return mk_app(mk_const("zplus"), {term(depth - 1), term(depth - 1)});
      case 6: return mk_app(mk_const("zneg"), {term(depth - 1)});
      case 7: case 8: return apply_callable(s_.env(), "op", {group(), term(depth - 1), term(depth - 1)});
      case 9: return apply_callable(s_.env(), "inv", {group(), term(depth - 1)});
      default: return mk_const(atom());
    }
  }

  // A variant of `t` that should often unify with it: metas, hints and unfolding all play a part.
  Term mutate(const Term& t) {
    if (roll(6) == 0) return meta();
    const Term& h = app_head(t);
    std::vector<Term> args = app_args(t);
    for (auto& a : args) a = mutate(a);
    if (h.is<node::Const>()) {
      const std::string& n = h.as<node::Const>().name;
      bool swap = roll(2) == 0;
      if (n == "zplus" && args.size() == 2 && swap) return apply_callable(s_.env(), "op", {group(), args[0], args[1]});
      if (n == "zneg" && args.size() == 1 && swap) return apply_callable(s_.env(), "inv", {group(), args[0]});
      if (n == "0" && swap) return unit();
      return mk_app(h, args);
    }
    if (h.is<node::Proj>()) {
      const auto& p = h.as<node::Proj>();
      if (roll(3) == 0) {
        if (p.index == 1 && args.size() == 2) return mk_app(mk_const("zplus"), args);
        if (p.index == 2 && args.size() == 1) return mk_app(mk_const("zneg"), args);
        if (p.index == 3 && args.empty()) return mk_const("0");
      }
      return mk_app(mk_proj(p.structure, p.index, roll(4) == 0 ? group() : p.scrutinee), args);
    }
    return mk_app(h, args);
  }

 private:
  int roll(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::string atom() { return std::string(1, static_cast<char>('a' + roll(3))); }
  Term meta() { return s_.metas().fresh("x", mk_const("Int"), {}, MetaOrigin::UserPlaceholder); }
  Term group() {
    if (roll(2) == 0) return mk_const("Z");
    return s_.metas().fresh("G", mk_const("Group"), {}, MetaOrigin::UserPlaceholder);
  }
  Term unit() { return apply_callable(s_.env(), "unit", {group()}); }

  Session& s_;
  std::mt19937_64& rng_;
};

}  // namespace

RandomReport random_unification(std::size_t count, std::uint64_t seed) {
  Run base = run_source("include \"group_decls.hl\"\naxiom a : Int\naxiom b : Int\naxiom c : Int\n");
  Session& s = *base.session;
  Unifier& u = s.unifier();
  std::mt19937_64 rng(seed);
  IntTermGen gen(s, rng);
  RandomReport rep;
  LocalContext ctx;
  for (std::size_t i = 0; i < count; ++i) {
    Term lhs = gen.term(3);
    Term rhs = (i % 4 == 0) ? gen.term(3) : gen.mutate(lhs);
    ++rep.problems;
    auto cp = u.checkpoint();
    u.reset_fuel();
    try {
      if (u.unify(ctx, lhs, rhs) && u.solve_postponed()) {
        ++rep.solved;
        if (!conv(s.env(), u.instantiate(lhs), u.instantiate(rhs))) ++rep.unsound;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DepthExceeded && e.kind() != ErrorKind::FuelExhausted) ++rep.unsound;
    }
    u.rollback(cp);
  }
  return rep;
}

// Index oracle

namespace {

constexpr std::uint64_t kOracleFuel = 10'000;

bool whnf_safe(const GlobalEnv& env, const Term& t, Term& out) {
  try {
    Fuel fuel(kOracleFuel);
    out = whnf(env, t, Policy::NoInstanceDelta, fuel);
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool opaque_head(const Term& h) {
  return h.is<node::Meta>() || h.is<node::FVar>() || h.is<node::BVar>() || h.is<node::Case1>();
}

// A projection out of an unknown structure can become anything once a hint fires.
bool stuck_projection(const GlobalEnv& env, const Term& h) {
  if (!h.is<node::Proj>()) return false;
  Term s;
  if (!whnf_safe(env, h.as<node::Proj>().scrutinee, s)) return true;
  return app_head(s).is<node::Meta>();
}

bool match(const GlobalEnv& env, const Term& p, const Term& q, bool root) {
  Term pw, qw;
  if (!whnf_safe(env, p, pw) || !whnf_safe(env, q, qw)) return true;
  const Term& hp = app_head(pw);
  const Term& hq = app_head(qw);
  if (opaque_head(hp) || opaque_head(hq)) return true;
  if (!root && (stuck_projection(env, hp) || stuck_projection(env, hq))) return true;
  if (hp.kind() != hq.kind()) return false;
  std::vector<Term> ap = app_args(pw), aq = app_args(qw);
  if (ap.size() != aq.size()) return false;
  auto all = [&](const std::vector<Term>& xs, const std::vector<Term>& ys) {
    if (xs.size() != ys.size()) return false;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!match(env, xs[i], ys[i], false)) return false;
    return true;
  };
  bool heads = true;
  switch (hp.kind()) {
    case Kind::Const:
      heads = hp.as<node::Const>().name == hq.as<node::Const>().name;
      break;
    case Kind::Proj: {
      const auto& x = hp.as<node::Proj>();
      const auto& y = hq.as<node::Proj>();
      heads = x.structure == y.structure && x.index == y.index && match(env, x.scrutinee, y.scrutinee, false);
      break;
    }
    case Kind::Pi: {
      const auto& x = hp.as<node::Pi>();
      const auto& y = hq.as<node::Pi>();
      heads = match(env, x.domain, y.domain, false) && match(env, x.codomain, y.codomain, false);
      break;
    }
    case Kind::Lam: {
      const auto& x = hp.as<node::Lam>();
      const auto& y = hq.as<node::Lam>();
      heads = match(env, x.type, y.type, false) && match(env, x.body, y.body, false);
      break;
    }
    case Kind::Mk: {
      const auto& x = hp.as<node::Mk>();
      const auto& y = hq.as<node::Mk>();
      heads = x.structure == y.structure && all(x.params, y.params) && all(x.fields, y.fields);
      break;
    }
    default:
      break;
  }
  return heads && all(ap, aq);
}

void subterms(const Term& t, std::vector<Term>& out) {
  for_each(t, [&](const Term& s) {
    if (s.loose_bound() == 0) out.push_back(s);
    return true;
  });
}

}  // namespace

bool oracle_matches(const GlobalEnv& env, const Term& pattern, const Term& query) {
  return match(env, pattern, query, true);
}

IndexReport index_against_oracle(Session& s, const std::vector<std::pair<Term, Term>>& queries) {
  IndexReport rep;
  const auto& hints = s.db().hints();
  for (const auto& [a, b] : queries) {
    ++rep.queries;
    auto got = s.db().retrieve_hints(s.env(), a, b);
    auto retrieved = [&](std::size_t i, Orientation o) {
      return std::any_of(got.begin(), got.end(), [&](const HintCandidate& c) { return c.index == i && c.orientation == o; });
    };
    for (std::size_t i = 0; i < hints.size(); ++i) {
      const Hint& h = hints[i];
      if (oracle_matches(s.env(), h.lhs, a) && oracle_matches(s.env(), h.rhs, b)) {
        ++rep.oracle_hits;
        if (!retrieved(i, Orientation::LeftToRight)) ++rep.missed;
      }
      if (oracle_matches(s.env(), h.rhs, a) && oracle_matches(s.env(), h.lhs, b)) {
        ++rep.oracle_hits;
        if (!retrieved(i, Orientation::RightToLeft)) ++rep.missed;
      }
    }
  }
  return rep;
}

std::vector<std::pair<Term, Term>> index_queries(Session& s, std::size_t random_count, std::uint64_t seed) {
  std::vector<std::pair<Term, Term>> out;
  std::vector<Term> pool;
  for (const auto& p : s.solved()) {
    out.emplace_back(p.lhs, p.rhs);
    subterms(p.lhs, pool);
    subterms(p.rhs, pool);
  }
  for (const auto& h : s.db().hints()) {
    Term l = hint_side_instantiated(h, h.lhs);
    Term r = hint_side_instantiated(h, h.rhs);
    out.emplace_back(l, r);
    out.emplace_back(r, l);
    out.emplace_back(h.lhs, h.rhs);
    subterms(l, pool);
    subterms(r, pool);
  }
  if (pool.empty()) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (std::size_t i = 0; i < random_count; ++i) out.emplace_back(pool[pick(rng)], pool[pick(rng)]);
  return out;
}

// Kernel invariants

namespace {

struct Subject {
  LocalContext ctx;
  Term term;
  std::string where;
};

}  // namespace

InvariantReport kernel_invariants(Session& s) {
  InvariantReport rep;
  const GlobalEnv& env = s.env();
  Unifier& u = s.unifier();
  std::vector<Subject> subjects;
  for (const auto& r : s.records()) {
    if (r.result) {
      subjects.push_back({{}, r.result->term, "result term"});
      subjects.push_back({{}, r.result->type, "result type"});
    }
    if (r.rewrite) {
      subjects.push_back({r.rewrite->goal.ctx, r.rewrite->goal.statement, "rewritten goal"});
      subjects.push_back({r.rewrite->goal.ctx, r.rewrite->proof, "rewrite proof"});
    }
  }
  for (const auto& d : env.declarations()) {
    if (const auto* def = std::get_if<DefDecl>(&d)) {
      subjects.push_back({{}, def->body, def->name + " body"});
      subjects.push_back({{}, def->type, def->name + " type"});
    } else if (const auto* ax = std::get_if<AxiomDecl>(&d)) {
      subjects.push_back({{}, ax->type, ax->name + " type"});
    }
  }
  MetaTyping typing{&s.metas(), &u.subst()};
  auto type_of = [&](const LocalContext& ctx, const Term& t) {
    Fuel fuel;
    return infer_type(env, ctx, t, typing, InferMode::Check, fuel);
  };
  for (const auto& sub : subjects) {
    ++rep.terms;
    auto fail = [&](const std::string& what) {
      rep.failures.push_back(sub.where + ": " + what + ": " + s.render(sub.term));
    };
    try {
      Term t = u.instantiate(sub.term);
      Term w = whnf(env, t);
      if (!(whnf(env, w) == w)) fail("whnf not idempotent");
      Term g = normalize_greedy(env, t);
      if (!(normalize_greedy(env, g) == g)) fail("greedy not idempotent");
      if (has_greedy_redex(g)) fail("greedy left a redex");
      if (!conv(env, t, w) || !conv(env, t, g)) fail("reduct not convertible");
      Term ty = type_of(sub.ctx, t);
      if (!conv(env, ty, type_of(sub.ctx, w))) fail("whnf changed the type");
      if (!conv(env, ty, type_of(sub.ctx, g))) fail("greedy changed the type");
    } catch (const Error& e) {
      fail(std::string("error ") + e.what());
    }
  }
  for (const auto& d : env.declarations()) {
    const auto* def = std::get_if<DefDecl>(&d);
    if (!def || !def->body.is<node::Mk>()) continue;
    ++rep.instances;
    try {
      Term x = expand_instance(env, def->name);
      if (!conv(env, x, mk_const(def->name))) rep.failures.push_back("expand " + def->name + " not convertible");
      if (!conv(env, type_of({}, x), def->type)) rep.failures.push_back("expand " + def->name + " changed the type");
    } catch (const Error& e) {
      rep.failures.push_back("expand " + def->name + ": " + e.what());
    }
  }
  return rep;
}

}  // namespace hintelab::testing
