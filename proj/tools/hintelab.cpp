#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hintelab/session.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hintelab: unification hints and nonuniform coercions"};
  app.require_subcommand(1);

  hintelab::SessionOptions opts;
  std::string file;
  std::string obligations = "emit";

  CLI::App* check = app.add_subcommand("check", "replay a script");
  check->add_option("file", file, "script to run")->required();
  check->add_flag("--trace", opts.trace, "write the unification trace to stderr");
  check->add_option("--max-hint-depth", opts.max_hint_depth, "bound on nested hint applications");
  check->add_option("--fuel", opts.fuel, "reduction steps per command");
  check->add_option("--obligations", obligations, "emit obligations as axioms, or fail")
      ->check(CLI::IsMember({"emit", "fail"}));
  check->add_flag("--dump-hints", opts.dump_hints, "print the hint database at the end");
  check->add_flag("--dump-coercions", opts.dump_coercions, "print uniform coercions at the end");
  check->add_flag("--keep-going", opts.keep_going, "continue after a failed command");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : hintelab::kExitSyntax;
  }
  opts.obligations_fail = obligations == "fail";

  try {
    hintelab::Session session(opts);
    return session.run_file(file, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << file << ": error: [Internal] " << e.what() << "\n";
    return hintelab::kExitInternal;
  }
}
