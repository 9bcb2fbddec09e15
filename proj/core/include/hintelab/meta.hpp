#pragma once

#include <map>
#include <string>
#include <vector>

#include "hintelab/term.hpp"

namespace hintelab {

enum class MetaOrigin { UserPlaceholder, CoercionSlot, HintFresh, Obligation, HintPattern };

struct MetaVar {
  MetaId id;
  std::string name;  // display name; may be empty
  Term type;
  std::vector<FVarId> scope;
  MetaOrigin origin = MetaOrigin::UserPlaceholder;
};

// Declarations of every metavariable created in a session. Assignments live in
// MetaSubstitution so they can be snapshotted and rolled back independently.
class MetaContext {
 public:
  const MetaVar& declare(std::string name, Term type, std::vector<FVarId> scope, MetaOrigin origin);
  // Declares and returns the Meta term.
  Term fresh(std::string name, Term type, std::vector<FVarId> scope, MetaOrigin origin);
  const MetaVar& get(MetaId id) const;
  const MetaVar* find(MetaId id) const;
  void set_type(MetaId id, Term type);
  void set_name(MetaId id, std::string name);
  std::size_t size() const { return metas_.size(); }

 private:
  std::map<MetaId, MetaVar> metas_;
  MetaId next_ = 1;
};

class MetaSubstitution {
 public:
  bool assigned(MetaId id) const { return map_.count(id) != 0; }
  const Term* lookup(MetaId id) const;
  void assign(MetaId id, Term value) { map_.insert_or_assign(id, std::move(value)); }
  const std::map<MetaId, Term>& assignments() const { return map_; }
  std::size_t size() const { return map_.size(); }
  bool extends(const MetaSubstitution& base) const;

 private:
  std::map<MetaId, Term> map_;
};

// Replaces assigned metavariables, recursively, and beta-reduces heads that
// became lambdas through instantiation.
Term instantiate_metas(const Term& t, const MetaSubstitution& s);

}  // namespace hintelab
