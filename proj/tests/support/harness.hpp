#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "hintelab/session.hpp"

namespace hintelab::testing {

std::filesystem::path corpus_dir();

struct Run {
  std::unique_ptr<Session> session;
  int code = 0;
  std::string out;
  std::string err;
  double millis = 0;
};

Run run_corpus(const std::string& file, SessionOptions opts = {});
Run run_source(const std::string& text, SessionOptions opts = {});

// Lines of `text` that start with `prefix`, prefix stripped.
std::vector<std::string> lines_with(const std::string& text, const std::string& prefix);

// Every script in the corpus that is not an include-only declaration file.
std::vector<std::string> corpus_scripts();

// Solved problems whose two sides are not convertible.
std::size_t unsound_solutions(Session& s);

struct RandomReport {
  std::size_t problems = 0;
  std::size_t solved = 0;
  std::size_t unsound = 0;
};

// Random unification problems over the group declarations.
RandomReport random_unification(std::size_t count, std::uint64_t seed);

// Reference matcher for the discrimination tree: naive first-order matching of
// a hint pattern against a problem side, up to NoInstanceDelta weak-head form.
bool oracle_matches(const GlobalEnv& env, const Term& pattern, const Term& query);

struct IndexReport {
  std::size_t queries = 0;
  std::size_t oracle_hits = 0;
  std::size_t missed = 0;
};

// Compares HintDb retrieval with a linear scan using `oracle_matches`.
IndexReport index_against_oracle(Session& s, const std::vector<std::pair<Term, Term>>& queries);

// Query pairs drawn from the solved problems plus random terms over the session's constants.
std::vector<std::pair<Term, Term>> index_queries(Session& s, std::size_t random_count, std::uint64_t seed);

struct InvariantReport {
  std::size_t terms = 0;
  std::size_t instances = 0;
  std::vector<std::string> failures;
};

// whnf/greedy idempotence, subject reduction and expand_instance convertibility.
InvariantReport kernel_invariants(Session& s);

}  // namespace hintelab::testing
