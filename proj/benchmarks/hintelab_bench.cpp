#include <benchmark/benchmark.h>

#include <sstream>

#include "hintelab/coercions.hpp"
#include "hintelab/kernel.hpp"
#include "hintelab/session.hpp"

using namespace hintelab;

namespace {

const std::filesystem::path kCorpus = HINTELAB_CORPUS_DIR;

std::unique_ptr<Session> load(const std::string& file) {
  auto s = std::make_unique<Session>();
  std::ostringstream out, err;
  s->run_file(kCorpus / file, out, err);
  return s;
}

// op G (op G x0 x1) (... ) with `n` leaves
Term op_tower(const GlobalEnv& env, const Term& g, int n) {
  Term t = mk_const("0");
  for (int i = 0; i < n; ++i) t = apply_callable(env, "op", {g, t, apply_callable(env, "inv", {g, mk_const("0")})});
  return t;
}

Term zplus_tower(int n) {
  Term t = mk_const("0");
  for (int i = 0; i < n; ++i) t = mk_app(mk_const("zplus"), {t, mk_app(mk_const("zneg"), {mk_const("0")})});
  return t;
}

void BM_UnifyWithHints(benchmark::State& state) {
  auto s = load("group_decls.hl");
  Unifier& u = s->unifier();
  LocalContext ctx;
  Term rhs = zplus_tower(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Term g = s->metas().fresh("G", mk_const("Group"), {}, MetaOrigin::UserPlaceholder);
    Term lhs = op_tower(s->env(), g, static_cast<int>(state.range(0)));
    auto cp = u.checkpoint();
    u.reset_fuel();
    benchmark::DoNotOptimize(u.unify(ctx, lhs, rhs));
    u.rollback(cp);
  }
}
BENCHMARK(BM_UnifyWithHints)->Arg(1)->Arg(8)->Arg(32);

void BM_HintRetrieval(benchmark::State& state) {
  auto s = load("product.hl");
  const GlobalEnv& env = s->env();
  Term lhs = apply_callable(env, "carr", {mk_meta(100000)});
  Term rhs = mk_app(mk_const("Prod"), {mk_const("Int"), mk_const("Int")});
  for (auto _ : state) benchmark::DoNotOptimize(s->db().retrieve_hints(env, lhs, rhs));
}
BENCHMARK(BM_HintRetrieval);

void BM_GreedyNormalize(benchmark::State& state) {
  auto s = load("group_decls.hl");
  Term lit = expand_instance(s->env(), "Z");
  Term t = op_tower(s->env(), lit, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(normalize_greedy(s->env(), t));
}
BENCHMARK(BM_GreedyNormalize)->Arg(8)->Arg(64);

void BM_ScriptReplay(benchmark::State& state, const char* file) {
  for (auto _ : state) {
    Session s;
    std::ostringstream out, err;
    benchmark::DoNotOptimize(s.run_file(kCorpus / file, out, err));
  }
}
BENCHMARK_CAPTURE(BM_ScriptReplay, assocfun, "assocfun.hl");
BENCHMARK_CAPTURE(BM_ScriptReplay, invmul, "invmul.hl");
BENCHMARK_CAPTURE(BM_ScriptReplay, product, "product.hl");

}  // namespace

BENCHMARK_MAIN();
