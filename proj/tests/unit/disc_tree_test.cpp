#include <algorithm>

#include "doctest.h"
#include "harness.hpp"
#include "hintelab/coercions.hpp"
#include "hintelab/disc_tree.hpp"
#include "hintelab/syntax.hpp"

using namespace hintelab;
using namespace hintelab::testing;

namespace {

Term app(const std::string& f, std::vector<Term> args) { return mk_app(mk_const(f), args); }
Term c(const std::string& n) { return mk_const(n); }

}  // namespace

TEST_CASE("keys flatten the skeleton in pre-order") {
  GlobalEnv env;
  PathKey k = key_of(env, app("f", {c("a"), app("g", {mk_meta(1)})}));
  CHECK(render_key(env, k) == "[f/2 a g/1 *]");
  CHECK(skip_subtree(k, 0) == k.size());
  CHECK(skip_subtree(k, 2) == 4);
}

TEST_CASE("keys are cut at the depth bound") {
  GlobalEnv env;
  Term deep = app("s", {app("s", {app("s", {app("s", {app("s", {c("z")})})})})});
  CHECK(render_key(env, key_of(env, deep, 3)) == "[s/1 s/1 s/1 *]");
}

TEST_CASE("wildcards swallow whole subtrees on either side") {
  GlobalEnv env;
  PathKey pat = key_of(env, app("f", {mk_meta(1), c("b")}));
  CHECK(keys_compatible(pat, key_of(env, app("f", {app("g", {c("a"), c("a")}), c("b")}))));
  CHECK(keys_compatible(key_of(env, mk_meta(2)), pat));
  CHECK_FALSE(keys_compatible(pat, key_of(env, app("f", {c("a"), c("a")}))));
}

TEST_CASE("retrieval returns every compatible payload once") {
  GlobalEnv env;
  DiscTree<int> tree;
  tree.insert(key_of(env, app("f", {mk_meta(1), c("b")})), 1);
  tree.insert(key_of(env, app("f", {c("a"), mk_meta(2)})), 2);
  tree.insert(key_of(env, app("g", {c("a")})), 3);
  tree.insert(key_of(env, mk_meta(3)), 4);
  tree.insert(key_of(env, app("g", {c("a")})), 3);
  CHECK(tree.size() == 4);
  auto sorted = [&](const Term& q) {
    auto v = tree.retrieve(key_of(env, q));
    std::sort(v.begin(), v.end());
    return v;
  };
  CHECK(sorted(app("f", {c("a"), c("b")})) == std::vector<int>{1, 2, 4});
  CHECK(sorted(app("f", {c("b"), c("b")})) == std::vector<int>{1, 4});
  CHECK(tree.retrieve(key_of(env, mk_meta(9))).size() == 4);
  CHECK(tree.retrieve(key_of(env, c("h"))) == std::vector<int>{4});
}

TEST_CASE("instances stay folded in keys") {
  Run r = run_corpus("group_decls.hl");
  const GlobalEnv& env = r.session->env();
  Term t = apply_callable(env, "carr", {c("Z")});
  CHECK(render_key(env, key_of(env, t)) == "[carr/1 Z]");
}

TEST_CASE("projections of unknown structures are wildcards below the root") {
  Run r = run_corpus("group_decls.hl");
  const GlobalEnv& env = r.session->env();
  Term t = app("zneg", {apply_callable(env, "unit", {mk_meta(1)})});
  CHECK(render_key(env, key_of(env, t)) == "[zneg/1 *]");
  CHECK(render_key(env, key_of(env, apply_callable(env, "unit", {mk_meta(1)}))) == "[unit/1 *]");
}

TEST_CASE("the oracle rejects rigid mismatches") {
  Run r = run_corpus("group_decls.hl");
  const GlobalEnv& env = r.session->env();
  CHECK(oracle_matches(env, app("zplus", {mk_meta(1), c("0")}), app("zplus", {c("0"), c("0")})));
  CHECK_FALSE(oracle_matches(env, app("zplus", {mk_meta(1), c("0")}), app("zplus", {c("0"), app("zneg", {c("0")})})));
  CHECK_FALSE(oracle_matches(env, c("Int"), apply_callable(env, "carr", {c("Z")})));
  CHECK(oracle_matches(env, apply_callable(env, "carr", {mk_meta(1)}), apply_callable(env, "carr", {c("Z")})));
}
