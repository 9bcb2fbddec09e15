#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hintelab/disc_tree.hpp"
#include "hintelab/env.hpp"
#include "hintelab/meta.hpp"
#include "hintelab/term.hpp"

namespace hintelab {

struct TelescopeEntry {
  MetaId meta;
  Term definition;
};

// `context |- (telescope) : lhs == rhs`. All metavariables are declared in the
// session MetaContext with origin HintPattern; the stored patterns never have
// the telescope substituted in.
struct Hint {
  std::string name;
  std::vector<MetaId> context;
  std::vector<TelescopeEntry> telescope;
  Term lhs;
  Term rhs;
  int priority = 0;
  std::size_t decl_index = 0;
  PathKey lhs_key;
  PathKey rhs_key;
  // Set for hints compiled from nonuniform coercion branches.
  bool from_coercion = false;
};

struct HintSpec {
  std::string name;  // empty: generated
  std::vector<MetaId> context;
  std::vector<TelescopeEntry> telescope;
  Term lhs;
  Term rhs;
  std::optional<int> priority;
  bool from_coercion = false;
};

struct HintCheckOptions {
  bool check_acceptable = true;  // tests disable this to build cyclic hints
};

enum class Orientation { LeftToRight, RightToLeft };

struct HintCandidate {
  std::size_t index;
  Orientation orientation;
};

// `fn` applied with its source at 1-based argument position `arg_index`.
struct UniformCoercion {
  std::string fn;
  std::size_t arg_index;
  std::size_t arity;  // explicit arguments of `fn`
  Term fn_type;
  PathKey source_key;
  PathKey target_key;
  std::vector<PathKey> source_aliases;
  std::vector<PathKey> target_aliases;
};

// P[tel]: the pattern with telescope definitions substituted.
Term hint_side_instantiated(const Hint& h, const Term& side);

class HintDb {
 public:
  explicit HintDb(std::size_t key_depth = kDefaultKeyDepth) : key_depth_(key_depth) {}

  const Hint& declare_hint(const GlobalEnv& env, const MetaContext& metas, HintSpec spec,
                           const HintCheckOptions& opts = {});

  // Candidates whose patterns may match `lhs ≟ rhs`, in firing order.
  std::vector<HintCandidate> retrieve_hints(const GlobalEnv& env, const Term& lhs, const Term& rhs) const;

  const UniformCoercion& add_coercion(const GlobalEnv& env, UniformCoercion c);
  std::vector<std::size_t> retrieve_coercions(const GlobalEnv& env, const Term& source, const Term& target) const;

  // Replaces telescope definitions that are exactly `name` with `expanded`.
  // Returns the number of entries rewritten.
  std::size_t expand_in_telescopes(const GlobalEnv& env, const MetaContext& metas, const std::string& name,
                                   const Term& expanded);

  const std::vector<Hint>& hints() const { return hints_; }
  const std::vector<UniformCoercion>& coercions() const { return coercions_; }
  const Hint* find_hint(const std::string& name) const;
  std::size_t key_depth() const { return key_depth_; }

  std::string dump_hints(const GlobalEnv& env, const MetaContext& metas) const;
  std::string dump_coercions(const GlobalEnv& env) const;

 private:
  struct Entry {
    enum Tag { HintLhs, HintRhs, CoeSource, CoeTarget } tag;
    std::size_t index;
    bool operator==(const Entry&) const = default;
  };

  void add_aliases(std::size_t coercion, const Hint& h, const GlobalEnv& env);

  std::size_t key_depth_;
  std::vector<Hint> hints_;
  std::vector<UniformCoercion> coercions_;
  DiscTree<Entry> tree_;
};

}  // namespace hintelab
