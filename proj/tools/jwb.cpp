#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "jwb/commands.hpp"

namespace {

using jwb::commands::Options;
using jwb::report::RunReport;

void add_common(CLI::App* sub, Options& opt) {
  sub->add_flag("--json", opt.json, "emit the report as JSON");
  sub->add_option("--seed", opt.seed, "seed for all randomized sampling");
  sub->add_option("--samples", opt.samples,
                  "sample count for randomized checks (0 = command default)");
  sub->add_option("--max-length", opt.max_length, "word-length window")
      ->check(CLI::Range(1, 12));
  sub->add_flag("--exhaustive", opt.exhaustive,
                "replace sampling by exhaustive basis sweeps where supported");
}

int emit(const RunReport& r, bool json) {
  std::cout << (json ? r.to_json() : r.to_text());
  return r.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "jwb: exact-arithmetic workbench for jordan maps, polynomial identities,\n"
      "and semigroup-graded counterexamples. All checks run over the rationals;\n"
      "a failed check exits 1 with a witness, malformed input exits 2."};
  app.require_subcommand(1);

  Options opt;
  std::string algebra_arg, map_arg, generator_arg, presentation_arg = "default";
  int grass_n = 4;

  CLI::App* verify = app.add_subcommand(
      "verify-identities",
      "run the full identity suite for a map (builtin name or JSON file)");
  verify->add_option("algebra", algebra_arg,
                     "builtin algebra name or algebra JSON file")->required();
  verify->add_option("map", map_arg,
                     "builtin map name or map JSON file (endomap of the algebra)")
      ->required();
  add_common(verify, opt);

  CLI::App* dec = app.add_subcommand(
      "decompose", "split a jordan map into hom/antihom parts by a central idempotent");
  dec->add_option("algebra", algebra_arg, "builtin algebra name or JSON file")
      ->required();
  dec->add_option("map", map_arg, "builtin map name or map JSON file")->required();
  add_common(dec, opt);

  CLI::App* grass = app.add_subcommand(
      "grassmann-demo",
      "build the exterior-algebra derivation counterexample and verify its chain");
  grass->add_option("n", grass_n, "number of exterior generators (4..8)")
      ->required()
      ->check(CLI::Range(4, 8));
  add_common(grass, opt);

  CLI::App* pe2 = app.add_subcommand(
      "pe2-demo",
      "build the semigroup-graded extension with a symmetric jordan embedding "
      "that defeats standard decomposition");
  pe2->add_option("presentation", presentation_arg,
                  "'default' or a presentation file (letters:/relations: lines)");
  pe2->add_option("generator", generator_arg,
                  "multilinear generator: 'comm', 'hall', or an expression");
  add_common(pe2, opt);

  CLI::App* tid = app.add_subcommand(
      "tideal", "evaluate the closure of a polynomial's values on an algebra");
  tid->add_option("generator", generator_arg,
                  "'hall', 'comm', or a polynomial expression")->required();
  tid->add_option("algebra", algebra_arg, "builtin algebra name or JSON file")
      ->required();
  add_common(tid, opt);

  CLI::App* cong = app.add_subcommand(
      "congruence", "length-graded congruence tables, refinement and cocycle checks");
  cong->add_option("presentation", presentation_arg,
                   "'default' or a presentation file");
  add_common(cong, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(verify))
      return emit(jwb::commands::verify_identities(algebra_arg, map_arg, opt), opt.json);
    if (app.got_subcommand(dec))
      return emit(jwb::commands::decompose(algebra_arg, map_arg, opt), opt.json);
    if (app.got_subcommand(grass))
      return emit(jwb::commands::grassmann_demo(grass_n, opt), opt.json);
    if (app.got_subcommand(pe2))
      return emit(jwb::commands::pe2_demo(presentation_arg, generator_arg, opt),
                  opt.json);
    if (app.got_subcommand(tid))
      return emit(jwb::commands::tideal(generator_arg, algebra_arg, opt), opt.json);
    if (app.got_subcommand(cong))
      return emit(jwb::commands::congruence(presentation_arg, opt), opt.json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
