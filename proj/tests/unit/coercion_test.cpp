#include "doctest.h"
#include "harness.hpp"

using namespace hintelab;
using namespace hintelab::testing;

TEST_CASE("a structure used as a type goes through its carrier") {
  Run r = run_corpus("carrier.hl");
  CHECK(r.code == kExitOk);
  auto types = lines_with(r.out, "TYPE: ");
  REQUIRE(types.size() == 2);
  CHECK(types[0] == "Pi G : UnitalSemiGroup. Pi x : S G. (Pi y : S G. mul G y x = y) -> x = one G");
  CHECK(lines_with(r.out, "TERM: ")[1] == "L NatUSG x H");
}

TEST_CASE("nonuniform branches promote terms") {
  Run r = run_corpus("semigroup.hl");
  CHECK(r.code == kExitOk);
  CHECK(lines_with(r.out, "TERM: ")[0] == "(<| Int, zplus, zplus_assoc |> : SemiGroup)");
}

TEST_CASE("branches compose through hints on their context") {
  Run r = run_corpus("injective.hl");
  CHECK(r.code == kExitOk);
  CHECK(lines_with(r.out, "TERM: ") == std::vector<std::string>{"inj_comp R R R expI expI"});
}

TEST_CASE("branch order decides which branch fires") {
  Run fwd = run_corpus("assocfun.hl");
  Run rev = run_corpus("assocfun_reversed.hl");
  CHECK(lines_with(fwd.out, "OBLIGATION ").size() == 1);
  CHECK(lines_with(rev.out, "OBLIGATION ").size() == 3);
}

TEST_CASE("no coercion applies") {
  Run r = run_source("include \"semigroup_decls.hl\"\naxiom B : Type\naxiom b : B\ncheck b : SemiGroup\n");
  CHECK(r.code == kExitError);
  CHECK(r.err.find("error: [") != std::string::npos);
}

TEST_CASE("coercion dumps list keys") {
  Run r = run_corpus("carrier.hl");
  CHECK(r.out.find("coercion S at 1 : UnitalSemiGroup -> Type") != std::string::npos);
}
