#include "doctest.h"
#include "harness.hpp"
#include "hintelab/coercions.hpp"
#include "hintelab/error.hpp"
#include "hintelab/syntax.hpp"

using namespace hintelab;
using namespace hintelab::testing;

namespace {

struct Fixture {
  Run run = run_source("include \"group_decls.hl\"\naxiom a : Int\naxiom b : Int\n");
  Session& s = *run.session;
  Unifier& u = s.unifier();
  LocalContext ctx;

  Term meta(const std::string& name, Term type, std::vector<FVarId> scope = {}) {
    return s.metas().fresh(name, type, scope, MetaOrigin::UserPlaceholder);
  }
  Term term(const std::string& text) {
    return s.elaborator().elaborate_infer(parse_term(text, s.env().notations())).term;
  }
};

Term c(const std::string& n) { return mk_const(n); }

}  // namespace

TEST_CASE("first-order assignment") {
  Fixture f;
  Term x = f.meta("x", c("Int"));
  CHECK(f.u.unify(f.ctx, mk_app(c("zplus"), {x, c("b")}), f.term("a + b")));
  CHECK(f.u.instantiate(x) == c("a"));
}

TEST_CASE("failure leaves the state unchanged") {
  Fixture f;
  Term x = f.meta("x", c("Int"));
  std::size_t before = f.u.subst().size();
  CHECK_FALSE(f.u.unify(f.ctx, mk_app(c("zplus"), {x, c("a")}), f.term("b + b")));
  CHECK(f.u.subst().size() == before);
  CHECK_FALSE(f.u.subst().assigned(x.as<node::Meta>().id));
}

TEST_CASE("occurs check") {
  Fixture f;
  Term x = f.meta("x", c("Int"));
  CHECK_FALSE(f.u.unify(f.ctx, x, mk_app(c("zneg"), {x})));
}

TEST_CASE("higher-order patterns abstract their arguments") {
  Fixture f;
  Term y = f.ctx.push("y", c("Int"));
  FVarId yid = y.as<node::FVar>().id;
  Term fm = f.meta("f", mk_arrow(c("Int"), c("Int")));
  CHECK(f.u.unify(f.ctx, mk_app(fm, {y}), mk_app(c("zplus"), {y, c("a")})));
  Term sol = f.u.instantiate(fm);
  REQUIRE(sol.is<node::Lam>());
  CHECK(f.u.instantiate(mk_app(fm, {c("b")})) == mk_app(c("zplus"), {c("b"), c("a")}));
  CHECK_FALSE(occurs_fvar(sol, yid));
}

TEST_CASE("metavariables cannot capture locals outside their scope") {
  Fixture f;
  Term y = f.ctx.push("y", c("Int"));
  Term x = f.meta("x", c("Int"));
  CHECK_FALSE(f.u.unify(f.ctx, x, mk_app(c("zneg"), {y})));
  Term x2 = f.meta("x", c("Int"), {y.as<node::FVar>().id});
  CHECK(f.u.unify(f.ctx, x2, mk_app(c("zneg"), {y})));
}

TEST_CASE("hints solve projections of unknown instances") {
  Fixture f;
  Term g = f.meta("G", c("Group"));
  CHECK(f.u.unify(f.ctx, apply_callable(f.s.env(), "op", {g, c("a"), c("b")}), f.term("a + b")));
  CHECK(f.u.instantiate(g) == c("Z"));
  CHECK(f.u.stats().hint_successes >= 1);
}

TEST_CASE("unfolding finds convertible instances without hints") {
  Fixture f;
  CHECK(f.u.unify(f.ctx, f.term("op Z a b"), f.term("a + b")));
  CHECK(f.u.unify(f.ctx, f.term("unit Z"), c("0")));
  CHECK_FALSE(f.u.unify(f.ctx, f.term("unit Z"), c("a")));
}

TEST_CASE("checkpoints roll back assignments") {
  Fixture f;
  Term x = f.meta("x", c("Int"));
  auto cp = f.u.checkpoint();
  CHECK(f.u.unify(f.ctx, x, c("a")));
  f.u.rollback(cp);
  CHECK_FALSE(f.u.subst().assigned(x.as<node::Meta>().id));
}

TEST_CASE("the depth bound is configurable") {
  Run deep = run_corpus("cyclic.hl", SessionOptions{.max_hint_depth = 20});
  CHECK(deep.code == kExitOk);
  Run shallow = run_corpus("cyclic.hl", SessionOptions{.max_hint_depth = 3});
  CHECK(shallow.err.find("hint depth bound 3 exceeded") != std::string::npos);
}

TEST_CASE("the trace reports hint depth") {
  Run r = run_corpus("product.hl", SessionOptions{.trace = true});
  CHECK(r.err.find("[depth 1] hint prod_group (reversed) on") != std::string::npos);
  CHECK(r.err.find("[depth 2] hint carr_Z (reversed) on") != std::string::npos);
}
