#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hintelab/elaborator.hpp"
#include "hintelab/env.hpp"
#include "hintelab/hintdb.hpp"
#include "hintelab/meta.hpp"
#include "hintelab/syntax.hpp"
#include "hintelab/unifier.hpp"

namespace hintelab {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitSyntax = 2, kExitInternal = 3 };

struct SessionOptions {
  std::size_t max_hint_depth = kDefaultMaxHintDepth;
  std::uint64_t fuel = kDefaultFuel;
  bool obligations_fail = false;
  bool keep_going = false;
  bool trace = false;
  bool dump_hints = false;
  bool dump_coercions = false;
};

struct SolvedProblem {
  LocalContext ctx;
  Term lhs;
  Term rhs;
};

// What a command produced, kept for tests.
struct CommandRecord {
  CommandKind kind;
  std::optional<ElabResult> result;
  std::optional<RewriteResult> rewrite;
};

// Replays scripts against one environment with the prelude loaded.
class Session {
 public:
  explicit Session(SessionOptions opts = {});

  int run(const Script& script, std::ostream& out, std::ostream& err);
  int run_text(const std::string& text, std::ostream& out, std::ostream& err, const std::string& file = "<input>");
  int run_file(const std::filesystem::path& path, std::ostream& out, std::ostream& err);

  GlobalEnv& env() { return env_; }
  HintDb& db() { return db_; }
  MetaContext& metas() { return metas_; }
  Unifier& unifier() { return *unifier_; }
  Elaborator& elaborator() { return *elab_; }

  const std::map<std::string, Goal>& goals() const { return goals_; }
  const std::vector<CommandRecord>& records() const { return records_; }
  const std::vector<SolvedProblem>& solved() const { return solved_; }

  std::string render(const Term& t) const;

 private:
  void execute(const Command& c, std::ostream& out);
  void print_result(const ElabResult& r, std::ostream& out) const;

  SessionOptions opts_;
  GlobalEnv env_;
  HintDb db_;
  MetaContext metas_;
  std::unique_ptr<Unifier> unifier_;
  std::unique_ptr<Elaborator> elab_;
  std::map<std::string, Goal> goals_;
  std::vector<CommandRecord> records_;
  std::vector<SolvedProblem> solved_;
  std::ostream* trace_ = nullptr;
};

}  // namespace hintelab
