#include "doctest.h"
#include "hintelab/env.hpp"
#include "hintelab/term.hpp"

using namespace hintelab;

TEST_CASE("equality ignores binder names") {
  Term a = mk_lam("x", mk_const("A"), mk_bvar(0));
  Term b = mk_lam("y", mk_const("A"), mk_bvar(0));
  CHECK(a == b);
  CHECK(a != mk_lam("x", mk_const("B"), mk_bvar(0)));
}

TEST_CASE("abstract and instantiate are inverse") {
  FVarId x = fresh_fvar_id();
  Term fx = mk_fvar(x, "x");
  Term t = mk_app(mk_const("f"), {fx, mk_lam("y", mk_const("A"), mk_app(mk_const("g"), {fx, mk_bvar(0)}))});
  Term body = abstract_fvar(t, x);
  CHECK(body.loose_bound() == 1);
  CHECK_FALSE(occurs_fvar(body, x));
  CHECK(instantiate(body, fx) == t);
}

TEST_CASE("application spines") {
  Term t = mk_app(mk_const("f"), {mk_const("a"), mk_const("b")});
  CHECK(app_head(t) == mk_const("f"));
  CHECK(app_arity(t) == 2);
  CHECK(app_args(t) == std::vector<Term>{mk_const("a"), mk_const("b")});
}

TEST_CASE("metavariables are collected in first-occurrence order") {
  Term t = mk_app(mk_const("f"), {mk_meta(3), mk_meta(1), mk_meta(3)});
  CHECK(collect_metas(t) == std::vector<MetaId>{3, 1});
  CHECK(t.has_meta());
  CHECK(occurs_meta(t, 1));
  CHECK_FALSE(occurs_meta(t, 2));
}

TEST_CASE("lift_loose shifts only loose variables") {
  Term t = mk_lam("x", mk_const("A"), mk_app(mk_bvar(0), {mk_bvar(1)}));
  Term lifted = lift_loose(t, 2);
  CHECK(lifted == mk_lam("x", mk_const("A"), mk_app(mk_bvar(0), {mk_bvar(3)})));
}

TEST_CASE("term size counts nodes") {
  CHECK(term_size(mk_const("a")) == 1);
  CHECK(term_size(mk_app(mk_const("f"), {mk_const("a")})) == 3);
}
