#pragma once

#include <cstdint>
#include <map>

#include "hintelab/env.hpp"
#include "hintelab/meta.hpp"
#include "hintelab/term.hpp"

namespace hintelab {

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

// Reduction budget shared by every step of one top-level kernel request.
class Fuel {
 public:
  explicit Fuel(std::uint64_t budget = kDefaultFuel) : remaining_(budget) {}
  void consume(std::uint64_t n = 1);
  std::uint64_t remaining() const { return remaining_; }

 private:
  std::uint64_t remaining_;
};

enum class Policy {
  Full,             // beta, iota, delta for every non-opaque constant
  NoDelta,          // beta and iota only
  NoInstanceDelta,  // Full minus structure instances and coercion plumbing
};

struct Assignment {
  std::map<FVarId, Term> fvars;
  std::map<MetaId, Term> metas;
};

// Simultaneous substitution of free variables and metavariables. A metavariable
// replacement may only mention free variables listed in that occurrence's scope.
Term subst(const Term& t, const Assignment& a);

bool unfoldable(const GlobalEnv& env, const std::string& name, Policy policy);

Term whnf(const GlobalEnv& env, const Term& t, Policy policy, Fuel& fuel);
Term whnf(const GlobalEnv& env, const Term& t, Policy policy = Policy::Full);

Term normalize_full(const GlobalEnv& env, const Term& t, Fuel& fuel);

// Contracts projection-over-literal, Case1-over-star and beta redexes everywhere,
// and unfolds coercion plumbing (force, k) only when that exposes such a redex.
Term normalize_greedy(const GlobalEnv& env, const Term& t);

// True when `t` still contains a projection-over-literal or Case1-over-star redex.
bool has_greedy_redex(const Term& t);

bool conv(const GlobalEnv& env, const Term& a, const Term& b, Fuel& fuel);
bool conv(const GlobalEnv& env, const Term& a, const Term& b, std::uint64_t fuel = kDefaultFuel);

struct MetaTyping {
  const MetaContext* metas = nullptr;
  const MetaSubstitution* subst = nullptr;
};

enum class InferMode { Check, Synthesize };

// Synthesize mode skips argument/domain agreement checks; it only computes types.
Term infer_type(const GlobalEnv& env, const LocalContext& ctx, const Term& t,
                const MetaTyping& metas, InferMode mode, Fuel& fuel);

// Type inference for metavariable-free terms.
Term infer_type_core(const GlobalEnv& env, const LocalContext& ctx, const Term& t);

Term expand_instance(const GlobalEnv& env, const std::string& name);

}  // namespace hintelab
