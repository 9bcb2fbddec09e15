// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "harness.hpp"
#include "hintelab/coercions.hpp"
#include "hintelab/error.hpp"
#include "hintelab/kernel.hpp"

using namespace hintelab;
using namespace hintelab::testing;

namespace {

struct Check {
  std::vector<std::string> problems;
  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  void expect_eq(const std::vector<std::string>& got, const std::vector<std::string>& want, const std::string& what) {
    if (got == want) return;
    std::string g;
    for (const auto& s : got) g += "\n    " + s;
    problems.push_back(what + ", got:" + (g.empty() ? " (nothing)" : g));
  }
};

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

void semigroup(Check& c) {
  Run r = run_corpus("semigroup.hl");
  c.expect(r.code == 0, "semigroup exit code");
  c.expect_eq(lines_with(r.out, "TERM: "),
              {"(<| Int, zplus, zplus_assoc |> : SemiGroup)", "(<| List A, append A, append_assoc A |> : SemiGroup)"},
              "semigroup terms");
  c.expect_eq(lines_with(r.out, "TYPE: "), {"SemiGroup", "SemiGroup"}, "semigroup types");
}

void assocfun(Check& c) {
  Run r = run_corpus("assocfun.hl", SessionOptions{.trace = true});
  c.expect(r.code == 0, "assocfun exit code");
  c.expect_eq(lines_with(r.out, "TERM: "),
              {"(<| plus, plus_assoc |> : AssocFun N)", "(<| mult, obligation_1 |> : AssocFun N)", "assoc_comp N f g"},
              "assocfun terms");
  c.expect_eq(lines_with(r.out, "OBLIGATION "), {"obligation_1: Pi a b c : N. a * (b * c) = (a * b) * c"},
              "assocfun obligations");
  c.expect(contains(r.err, "hint af_comp on"), "f o g not promoted through af_comp");
  Run rev = run_corpus("assocfun_reversed.hl");
  c.expect(rev.code == 0, "reversed exit code");
  c.expect(lines_with(rev.out, "OBLIGATION ").size() == 3, "reversed order should leave three obligations");
  c.expect(lines_with(rev.out, "TERM: ") != lines_with(r.out, "TERM: "), "reversing the branches changed nothing");
}

void section4(Check& c) {
  Run g = run_corpus("grid.hl");
  c.expect(g.code == 0, "grid exit code");
  c.expect_eq(lines_with(g.out, "TERM: "), {"grid Z a"}, "grid _ a elaboration");
  c.expect_eq(lines_with(g.out, "GOAL c: "), {"a + 0 = a", "a = a"}, "rewrite with grid");
  Run p = run_corpus("product.hl", SessionOptions{.trace = true});
  c.expect(p.code == 0, "product exit code");
  c.expect_eq(lines_with(p.out, "TYPE: "), {"carr (gprod Z Z)"}, "carr ?1 against Int x Int");
  c.expect(contains(p.err, "[depth 1] hint prod_group"), "product hint not at depth 1");
  c.expect(contains(p.err, "[depth 2] hint carr_Z"), "nested carr hint not at depth 2");
}

void sugar(Check& c) {
  for (std::string base : {"semigroup", "assocfun"}) {
    SessionOptions opts{.dump_hints = true};
    Run s = run_corpus(base + ".hl", opts);
    Run h = run_corpus(base + "_hints.hl", opts);
    c.expect(s.code == 0 && h.code == 0, base + " exit codes");
    c.expect(s.out == h.out, base + ": sugar and hand-written hints differ");
    c.expect(!lines_with(s.out, "hint ").empty(), base + ": empty hint dump");
  }
}

bool proj_over_literal(const Term& t) {
  bool found = false;
  for_each(t, [&](const Term& s) {
    if (s.is<node::Proj>() && s.as<node::Proj>().scrutinee.is<node::Mk>()) found = true;
    return !found;
  });
  return found;
}

void invmul(Check& c) {
  Run r = run_corpus("invmul.hl");
  c.expect(r.code == 0, "invmul exit code");
  auto plain = lines_with(r.out, "GOAL plain: ");
  auto expanded = lines_with(r.out, "GOAL expanded: ");
  c.expect(plain.size() == 2 && contains(plain.back(), "op Z (inv Z x) (inv Z y)"), "plain rewrite result");
  c.expect_eq(expanded, {"x + -(y + x) = -y", "x + (-x + -y) = -y"}, "expanded rewrite result");
  const auto& goals = r.session->goals();
  auto it = goals.find("expanded");
  c.expect(it != goals.end() && !proj_over_literal(it->second.statement) && !has_greedy_redex(it->second.statement),
           "expanded goal still has projection redexes");
}

void soundness(Check& c) {
  std::size_t pairs = 0;
  for (const auto& f : corpus_scripts()) {
    Run r = run_corpus(f);
    pairs += r.session->solved().size();
    std::size_t bad = unsound_solutions(*r.session);
    c.expect(bad == 0, f + ": " + std::to_string(bad) + " unsound solutions");
  }
  c.expect(pairs > 50, "too few solved corpus problems");
  RandomReport rep = random_unification(1000, 7);
  c.expect(rep.problems == 1000, "random problem count");
  c.expect(rep.unsound == 0, std::to_string(rep.unsound) + " unsound random solutions");
  c.expect(rep.solved > 200, "random problems mostly unsolvable (" + std::to_string(rep.solved) + ")");
}

void index_superset(Check& c) {
  std::size_t hits = 0;
  for (const auto& f : corpus_scripts()) {
    Run r = run_corpus(f);
    if (r.session->db().hints().empty()) continue;
    IndexReport rep = index_against_oracle(*r.session, index_queries(*r.session, 300, 11));
    hits += rep.oracle_hits;
    c.expect(rep.missed == 0, f + ": index missed " + std::to_string(rep.missed) + " oracle matches");
  }
  c.expect(hits > 0, "oracle never matched");
}

void termination(Check& c) {
  Run r = run_corpus("cyclic.hl");
  c.expect(r.code == 1, "cyclic exit code");
  c.expect(contains(r.err, "[DepthExceeded] hint depth bound 8 exceeded"), "cyclic diagnostic");
  c.expect(r.millis < 100, "cyclic took " + std::to_string(r.millis) + " ms");

  // An unacceptable hint whose telescope poses the original problem again.
  Run base = run_source("axiom B : Type\naxiom loop : B -> B\naxiom b0 : B\n");
  Session& s = *base.session;
  Term b0 = mk_const("b0");
  Term x = s.metas().fresh("x", mk_const("B"), {}, MetaOrigin::HintPattern);
  HintSpec spec;
  spec.name = "loop_b0";
  spec.telescope = {{x.as<node::Meta>().id, mk_app(mk_const("loop"), {b0})}};
  spec.lhs = mk_app(mk_const("loop"), {x});
  spec.rhs = b0;
  s.db().declare_hint(s.env(), s.metas(), spec, HintCheckOptions{.check_acceptable = false});
  auto t0 = std::chrono::steady_clock::now();
  bool depth = false;
  try {
    LocalContext ctx;
    s.unifier().unify(ctx, mk_app(mk_const("loop"), {b0}), b0);
  } catch (const Error& e) {
    depth = e.kind() == ErrorKind::DepthExceeded;
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  c.expect(depth, "unchecked cyclic hint did not hit the depth bound");
  c.expect(ms < 100, "unchecked cyclic hint took " + std::to_string(ms) + " ms");

  Run f = run_corpus("fuel.hl");
  c.expect(f.code == 1 && contains(f.err, "[FuelExhausted]"), "fuel exhaustion");
}

void rejections(Check& c) {
  Run a = run_corpus("not_acceptable.hl");
  c.expect(a.code == 1 && contains(a.err, "error: [NotAcceptable]"), "NotAcceptable diagnostic");
  Run n = run_corpus("nonlinear.hl");
  c.expect(n.code == 1 && contains(n.err, "error: [NonlinearPattern]"), "NonlinearPattern diagnostic");
}

void invariants(Check& c) {
  std::size_t terms = 0, instances = 0;
  for (const auto& f : corpus_scripts()) {
    Run r = run_corpus(f);
    InvariantReport rep = kernel_invariants(*r.session);
    terms += rep.terms;
    instances += rep.instances;
    for (const auto& msg : rep.failures) c.problems.push_back(f + ": " + msg);
  }
  c.expect(terms > 100 && instances > 3, "too few terms checked");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Check&)> run;
  };
  std::vector<Criterion> criteria = {
      {"semigroup instances from Int and List A", semigroup},
      {"AssocFun branches, obligations and branch order", assocfun},
      {"grid, rewrite and nested product hints", section4},
      {"sugar and hand-written hints agree", sugar},
      {"invmul rewrite before and after expand Z", invmul},
      {"unifier solutions are convertible", soundness},
      {"discrimination tree covers the linear oracle", index_superset},
      {"depth bound and fuel exhaustion", termination},
      {"unacceptable and nonlinear hints are rejected", rejections},
      {"kernel reduction invariants", invariants},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].run(c);
    } catch (const std::exception& e) {
      c.problems.push_back(std::string("exception: ") + e.what());
    }
    std::printf("%s %zu %s\n", c.problems.empty() ? "PASS" : "FAIL", i + 1, criteria[i].name);
    for (const auto& p : c.problems) std::printf("  %s\n", p.c_str());
    if (!c.problems.empty()) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
