#include "doctest.h"
#include "harness.hpp"
#include "hintelab/coercions.hpp"
#include "hintelab/error.hpp"

using namespace hintelab;
using namespace hintelab::testing;

TEST_CASE("hints are retrieved in priority order, both orientations") {
  Run r = run_corpus("group_decls.hl");
  Session& s = *r.session;
  const GlobalEnv& env = s.env();
  Term g = s.metas().fresh("G", mk_const("Group"), {}, MetaOrigin::UserPlaceholder);
  auto fwd = s.db().retrieve_hints(env, apply_callable(env, "carr", {g}), mk_const("Int"));
  REQUIRE(fwd.size() == 1);
  CHECK(s.db().hints()[fwd[0].index].name == "carr_Z");
  CHECK(fwd[0].orientation == Orientation::LeftToRight);
  auto back = s.db().retrieve_hints(env, mk_const("zplus"), apply_callable(env, "op", {g}));
  REQUIRE(back.size() == 1);
  CHECK(back[0].orientation == Orientation::RightToLeft);
  CHECK(s.db().retrieve_hints(env, mk_const("zplus"), mk_const("Int")).empty());
}

TEST_CASE("explicit priorities reorder candidates") {
  Run r = run_source(
      "include \"group_decls.hl\"\n"
      "def Z2 : Group := <| Int, zplus, zneg, 0, zplus_assoc, zneg_cancel, zplus_zero, zplus_closed |>\n"
      "hint carr_Z2 priority -1 |- (?g := Z2) : carr ?g == Int\n");
  REQUIRE(r.code == 0);
  Session& s = *r.session;
  auto c = s.db().retrieve_hints(s.env(), apply_callable(s.env(), "carr", {mk_meta(999)}), mk_const("Int"));
  REQUIRE(c.size() == 2);
  CHECK(s.db().hints()[c[0].index].name == "carr_Z2");
  CHECK(s.db().hints()[c[1].index].name == "carr_Z");
}

TEST_CASE("acceptability and linearity are enforced") {
  Run bad = run_source("include \"group_decls.hl\"\nhint wrong |- (?g := Z) : carr ?g == Group\n");
  CHECK(bad.code == kExitError);
  CHECK(bad.err.find("[NotAcceptable]") != std::string::npos);
  Run nl = run_corpus("nonlinear.hl");
  CHECK(nl.err.find("[NonlinearPattern]") != std::string::npos);
}

TEST_CASE("coercions with the same source and target are rejected") {
  Run r = run_source("include \"carrier.hl\"\ncoercion S at 1\n");
  CHECK(r.code == kExitError);
  CHECK(r.err.find("[DuplicateCoercion]") != std::string::npos);
  Run idx = run_source("include \"group_decls.hl\"\ncoercion carr at 3\n");
  CHECK(idx.err.find("[InvalidArgIndex]") != std::string::npos);
}

TEST_CASE("expanding an instance rewrites telescopes") {
  Run r = run_corpus("group_decls.hl");
  Session& s = *r.session;
  Term x = expand_instance(s.env(), "Z");
  CHECK(s.db().expand_in_telescopes(s.env(), s.metas(), "Z", x) == 4);
  for (const auto& h : s.db().hints()) CHECK(h.telescope[0].definition == x);
  CHECK(s.db().expand_in_telescopes(s.env(), s.metas(), "Z", x) == 0);
}

TEST_CASE("hint dumps are stable") {
  Run a = run_corpus("grid.hl", SessionOptions{.dump_hints = true});
  Run b = run_corpus("grid.hl", SessionOptions{.dump_hints = true});
  CHECK(a.out == b.out);
  CHECK(a.out.find("hint carr_Z priority 0") != std::string::npos);
  CHECK(a.out.find("keys: [carr/1 *] == [Int]") != std::string::npos);
}
