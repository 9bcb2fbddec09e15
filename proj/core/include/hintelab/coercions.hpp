#pragma once

#include <optional>
#include <string>

#include "hintelab/env.hpp"
#include "hintelab/hintdb.hpp"
#include "hintelab/meta.hpp"
#include "hintelab/unifier.hpp"

namespace hintelab {

// Unit-locked `force`/`k` plus equality (`eq`, `eqRefl`, `eqInd`, `eqSym`).
void declare_prelude(GlobalEnv& env);

// Type of anything that can head an application: constants, and projections
// seen as functions `Pi params. Pi (s : S params). field`.
Term callable_type(const GlobalEnv& env, const std::string& name);
// Applies a callable to arguments; projections become Proj nodes.
Term apply_callable(const GlobalEnv& env, const std::string& name, const std::vector<Term>& args);

// Number of leading Pi binders.
std::size_t pi_arity(const Term& type);

const UniformCoercion& declare_uniform(const GlobalEnv& env, HintDb& db, const std::string& fn, std::size_t arg_index);

struct NonuniformBranch {
  LocalContext context;
  Term source;
  Term target;
  Term pattern;
  Term result;
};

// Compiles `context |- source -> target, pattern => result` to the hint
// `context' |- (?T := target'; ?t := result'; ?l := star) : force source' pattern' ?T ?t ?l == target'`.
HintSpec compile_nonuniform(MetaContext& metas, const NonuniformBranch& branch);

const Hint& declare_nonuniform(const GlobalEnv& env, HintDb& db, MetaContext& metas, const NonuniformBranch& branch,
                               std::string name = {}, std::optional<int> priority = std::nullopt);

// Uniform coercions first, then the `k` fallback through nonuniform hints.
std::optional<Term> promote(Unifier& u, const LocalContext& ctx, const Term& term, const Term& actual,
                            const Term& expected);

}  // namespace hintelab
