#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hintelab/env.hpp"
#include "hintelab/hintdb.hpp"
#include "hintelab/kernel.hpp"
#include "hintelab/meta.hpp"
#include "hintelab/term.hpp"

namespace hintelab {

inline constexpr std::size_t kDefaultMaxHintDepth = 8;

struct UnifierConfig {
  std::size_t max_hint_depth = kDefaultMaxHintDepth;
  std::uint64_t fuel = kDefaultFuel;
};

struct UnifierStats {
  std::size_t hint_attempts = 0;
  std::size_t hint_successes = 0;
  std::size_t max_depth = 0;
  std::size_t assignments = 0;
};

using TraceSink = std::function<void(const std::string&)>;
// Sees both sides of every successful top-level unification, instantiated.
using SolvedObserver = std::function<void(const LocalContext&, const Term&, const Term&)>;

// Higher-order pattern unification extended with unification hints. State is
// the metavariable substitution plus the problems postponed for later.
class Unifier {
 public:
  Unifier(const GlobalEnv& env, const HintDb& db, MetaContext& metas, UnifierConfig config = {});

  // Tries to make `a` and `b` convertible. On failure the state is unchanged.
  // DepthExceeded and FuelExhausted escape as errors.
  bool unify(const LocalContext& ctx, const Term& a, const Term& b);

  // Retries postponed flex problems; false if some remain unsolved.
  bool solve_postponed();
  std::size_t postponed_count() const { return postponed_.size(); }

  struct Checkpoint {
    MetaSubstitution subst;
    std::size_t postponed;
  };
  Checkpoint checkpoint() const { return {subst_, postponed_.size()}; }
  void rollback(const Checkpoint& c);

  Term instantiate(const Term& t) const { return instantiate_metas(t, subst_); }
  const MetaSubstitution& subst() const { return subst_; }
  // Direct assignment; used by elaboration for metavariables it fills itself.
  void assign(MetaId id, Term value) { subst_.assign(id, std::move(value)); }
  MetaContext& metas() { return metas_; }
  const GlobalEnv& env() const { return env_; }
  const HintDb& db() const { return db_; }

  Fuel& fuel() { return fuel_; }
  void reset_fuel() { fuel_ = Fuel(config_.fuel); }
  const UnifierConfig& config() const { return config_; }

  void set_trace(TraceSink sink) { trace_ = std::move(sink); }
  void set_observer(SolvedObserver obs) { observer_ = std::move(obs); }
  const UnifierStats& stats() const { return stats_; }

 private:
  struct Postponed {
    LocalContext ctx;
    Term lhs;
    Term rhs;
    std::size_t depth;
  };
  using Snapshot = Checkpoint;
  Snapshot save() const { return checkpoint(); }
  void restore(const Snapshot& s) { rollback(s); }

  bool unify_at(const LocalContext& ctx, const Term& a, const Term& b, std::size_t depth);
  bool structural(const LocalContext& ctx, const Term& a, const Term& b, std::size_t depth);
  bool rigid(const LocalContext& ctx, const Term& a, const Term& b, std::size_t depth);
  bool binders(const LocalContext& ctx, const std::string& name, const Term& d1, const Term& b1, const Term& d2,
               const Term& b2, std::size_t depth);
  bool args_pairwise(const LocalContext& ctx, const std::vector<Term>& xs, const std::vector<Term>& ys,
                     std::size_t depth);
  bool try_hints(const LocalContext& ctx, const Term& a, const Term& b, std::size_t depth);

  bool is_flex(const Term& t) const;
  // 1: assigned, 0: failed, -1: not a pattern.
  int assign_pattern(const LocalContext& ctx, const Term& flex, const Term& value, std::size_t depth);
  bool prune(const Term& value, const std::vector<FVarId>& allowed);

  void trace(std::size_t depth, const std::string& msg);
  std::string show(const Term& t) const;

  const GlobalEnv& env_;
  const HintDb& db_;
  MetaContext& metas_;
  UnifierConfig config_;
  Fuel fuel_;
  MetaSubstitution subst_;
  std::vector<Postponed> postponed_;
  TraceSink trace_;
  SolvedObserver observer_;
  UnifierStats stats_;
};

}  // namespace hintelab
