#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hintelab/coercions.hpp"
#include "hintelab/env.hpp"
#include "hintelab/hintdb.hpp"
#include "hintelab/meta.hpp"
#include "hintelab/syntax.hpp"
#include "hintelab/unifier.hpp"

namespace hintelab {

struct Obligation {
  std::string name;
  Term type;
};

struct ElabResult {
  Term term;
  Term type;
  std::vector<Obligation> obligations;
};

struct Goal {
  std::string name;
  LocalContext ctx;
  Term statement;
};

enum class RewriteDirection { LeftToRight, RightToLeft };

struct RewriteResult {
  Goal goal;
  Term matched;
  Term motive;
  // fun (h : new) => proof of the old statement
  Term proof;
  std::vector<Obligation> obligations;
};

// Surface terms to kernel terms. Placeholders become metavariables, type
// mismatches go through `promote`, leftovers become obligation axioms.
class Elaborator {
 public:
  Elaborator(GlobalEnv& env, HintDb& db, MetaContext& metas, Unifier& u);

  // Forget `?name` bindings; called between commands.
  void begin_command();
  void set_obligations_fail(bool v) { obligations_fail_ = v; }

  std::pair<Term, Term> infer(LocalContext& ctx, const ExprPtr& e);
  Term check(LocalContext& ctx, const ExprPtr& e, const Term& expected);
  Term elab_type(LocalContext& ctx, const ExprPtr& e);
  Term coerce(const LocalContext& ctx, const Term& t, const Term& actual, const Term& expected, SourcePos pos = {});

  // Adds binders to `ctx`, returning their free variables.
  std::vector<Term> elab_binders(LocalContext& ctx, const std::vector<BinderGroup>& groups);

  // Solves what is left, normalizes, and turns unassigned metas into axioms.
  ElabResult finish(Term term, Term type);

  ElabResult elaborate_check(const ExprPtr& e, const ExprPtr& type);
  ElabResult elaborate_infer(const ExprPtr& e);

  RewriteResult rewrite_goal(const Goal& goal, const ExprPtr& eq, RewriteDirection dir,
                             std::optional<std::size_t> occurrence = std::nullopt);

  HintSpec elaborate_hint(const Command& c);
  NonuniformBranch elaborate_branch(const Command& c);

  // Registers a local so obligations can be closed over it later.
  Term push_local(LocalContext& ctx, const std::string& name, Term type);
  const LocalDecl* local(FVarId id) const;

  Unifier& unifier() { return u_; }
  std::size_t obligation_count() const { return obligation_counter_; }

 private:
  struct Spine {
    ExprPtr head;
    std::vector<ExprPtr> args;
  };
  static Spine spine_of(const ExprPtr& e);

  std::pair<Term, Term> infer_app(LocalContext& ctx, const ExprPtr& e);
  Term check_arg(LocalContext& ctx, const ExprPtr& arg, const Term& domain, const std::string& binder);
  std::pair<Term, Term> infer_lam(LocalContext& ctx, const ExprPtr& e);
  Term check_lam(LocalContext& ctx, const std::vector<std::pair<std::string, ExprPtr>>& binders, std::size_t i,
                 const ExprPtr& body, const Term& expected, SourcePos pos);
  Term elab_pi(LocalContext& ctx, const std::vector<std::pair<std::string, ExprPtr>>& binders, std::size_t i,
               const ExprPtr& body);
  Term check_anon(LocalContext& ctx, const ExprPtr& e, const Term& expected);
  std::pair<Term, Term> infer_case1(LocalContext& ctx, const ExprPtr& e);
  Term named_meta(LocalContext& ctx, const std::string& name, std::optional<Term> type);

  // Re-homes metas whose scope mentions `x` so `x` can be abstracted.
  Term detach(const LocalContext& ctx, FVarId x, const Term& t);
  Term close_binder(const LocalContext& ctx, FVarId x, const Term& t);

  Term whnf_type(const Term& t);
  std::string show(const Term& t) const;

  GlobalEnv& env_;
  HintDb& db_;
  MetaContext& metas_;
  Unifier& u_;
  std::map<std::string, Term> named_;
  std::map<FVarId, LocalDecl> locals_;
  std::size_t obligation_counter_ = 0;
  bool obligations_fail_ = false;
};

}  // namespace hintelab
