// Copyright 2026 The hyperloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command line front end: solves an instance from CSV with the compact
// model, branch-and-price or both and writes a JSON report.

#include <cmath>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hyperloc/aggregation.h"
#include "hyperloc/branch_price.h"
#include "hyperloc/compact.h"
#include "hyperloc/error.h"
#include "hyperloc/io.h"
#include "hyperloc/logging.h"
#include "hyperloc/oracle.h"
#include "json.hpp"

namespace {

using namespace hyperloc;

struct Flags {
  std::string input;
  int p = 0;
  std::string objective = "weber";
  std::string residual = "vertical";
  std::string method = "bp";
  double time_limit = 600.0;
  uint32_t seed = 0;
  int aggregate = 0;
  std::string plot;
  double coef_bound = 0.0;
  int grid = 21;
  std::string output;
  std::string lp_dump;
  std::string log_level = "quiet";
};

int ExitCode(const MipResult& r) {
  if (r.status == SolveStatus::kOptimal) return 0;
  return r.has_solution ? 2 : 1;
}

MipResult Solve(const std::string& method, const Instance& instance, int p,
                const OrderedWeights& lambda, ResidualKind kind,
                const Flags& flags) {
  if (method == "compact") {
    CompactOptions build;
    build.coef_bound = flags.coef_bound;
    const CompactModel model = BuildCompact(instance, p, lambda, kind, build);
    if (!flags.lp_dump.empty())
      WriteTextFile(flags.lp_dump, ToLpFormat(model.lp, model.binaries));
    CompactSolveOptions solve;
    solve.time_limit_secs = flags.time_limit;
    solve.seed = flags.seed;
    return SolveCompact(model, solve);
  }
  BnpOptions options;
  options.time_limit_secs = flags.time_limit;
  options.seed = flags.seed;
  options.pricer.grid = flags.grid;
  options.pricer.coef_bound = flags.coef_bound;
  return SolveBnp(instance, p, lambda, kind, options);
}

int Run(const Flags& flags) {
  const Instance instance = LoadCsv(flags.input);
  const int n = instance.size();
  if (flags.p > n)
    throw Error(ErrorCode::kBadParam, "--p exceeds the number of points");
  if (flags.aggregate > n) {
    throw Error(ErrorCode::kBadParam,
                "--aggregate exceeds the number of points");
  }
  const OrderedWeights lambda = ParseOmSpec(flags.objective, n);
  const ResidualKind kind = ParseResidualKind(flags.residual);
  RequireSolvableKind(kind);

  nlohmann::json doc;
  MipResult main_result;
  int code = 0;
  if (flags.method == "both") {
    const MipResult compact =
        Solve("compact", instance, flags.p, lambda, kind, flags);
    const MipResult bp = Solve("bp", instance, flags.p, lambda, kind, flags);
    doc = ResultJson(bp, instance, lambda, kind);
    doc["results"] = {{"compact", ResultJson(compact, instance, lambda, kind)},
                      {"bp", ResultJson(bp, instance, lambda, kind)}};
    if (compact.has_solution && bp.has_solution) {
      const double delta =
          std::abs(compact.solution.objective - bp.solution.objective);
      doc["agreement"] = {{"abs_diff", delta}, {"agree", delta <= 1e-5}};
    } else {
      doc["agreement"] = nullptr;
    }
    code = std::max(ExitCode(compact), ExitCode(bp));
    if (ExitCode(compact) == 1 || ExitCode(bp) == 1) code = 1;
    main_result = bp;
  } else {
    main_result = Solve(flags.method, instance, flags.p, lambda, kind, flags);
    doc = ResultJson(main_result, instance, lambda, kind);
    code = ExitCode(main_result);
  }
  doc["method"] = flags.method;
  doc["input"] = {{"path", flags.input},
                  {"n", n},
                  {"d", instance.dim()},
                  {"p", flags.p},
                  {"objective", lambda.Label()},
                  {"lambda", lambda.lambda()},
                  {"residual", std::string(ResidualKindName(kind))},
                  {"seed", flags.seed}};

  if (flags.aggregate > 0 && main_result.has_solution) {
    const AggregationMap map = KMeansAggregate(
        instance, flags.aggregate, flags.seed, kind, flags.coef_bound);
    const std::string method = flags.method == "both" ? "bp" : flags.method;
    const AggregationReport report = BoundAndError(
        map, lambda,
        [&](const Instance& inst, const OrderedWeights& w) {
          return Solve(method, inst, flags.p, w, kind, flags);
        },
        main_result.solution.objective);
    doc["aggregation"] = AggregationJson(map, report);
  }
  if (!flags.plot.empty() && main_result.has_solution) {
    WriteSvg(main_result.solution, instance, flags.plot);
  }
  const std::string text = doc.dump(2) + "\n";
  if (flags.output.empty()) {
    std::cout << text;
  } else {
    WriteTextFile(flags.output, text);
  }
  return code;
}

// Exhaustive optimum of a small instance, for cross-checking.
int RunOracle(const Flags& flags) {
  const Instance instance = LoadCsv(flags.input);
  const OrderedWeights lambda = ParseOmSpec(flags.objective, instance.size());
  const ResidualKind kind = ParseResidualKind(flags.residual);
  const double value =
      oracle::BruteForceOptimum(instance, flags.p, lambda, kind);
  nlohmann::json doc = {{"objective", value},
                        {"p", flags.p},
                        {"objective_spec", lambda.Label()},
                        {"residual", std::string(ResidualKindName(kind))}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

void AddProblemFlags(CLI::App* app, Flags* flags) {
  app->add_option("--input", flags->input, "CSV file of points")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--p", flags->p, "Number of hyperplanes")
      ->required()
      ->check(CLI::PositiveNumber);
  app->add_option("--objective", flags->objective,
                  "weber | center | kcentrum:k | centdian:rho | file:<path>")
      ->capture_default_str();
  app->add_option("--residual", flags->residual, "vertical | l1")
      ->check(CLI::IsMember({"vertical", "l1"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Locate p hyperplanes minimizing an ordered median of residuals"};
  Flags flags;
  AddProblemFlags(&app, &flags);
  app.add_option("--method", flags.method, "compact | bp | both")
      ->check(CLI::IsMember({"compact", "bp", "both"}))
      ->capture_default_str();
  app.add_option("--time-limit", flags.time_limit, "Seconds per solve")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", flags.seed, "Seed of heuristics and k-means")
      ->capture_default_str();
  app.add_option("--aggregate", flags.aggregate,
                 "Also solve a k-means aggregation with k points")
      ->check(CLI::PositiveNumber);
  app.add_option("--plot", flags.plot, "SVG output (d = 2)");
  app.add_option("--coef-bound", flags.coef_bound,
                 "Slope bound B of the coefficient box (0: default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--grid", flags.grid,
                 "Grid points per coordinate of heuristic pricing")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();
  app.add_option("--output", flags.output, "JSON output (default stdout)");
  app.add_option("--lp-dump", flags.lp_dump,
                 "Write the root compact model in LP format");
  app.add_option("--log-level", flags.log_level, "quiet | info | debug")
      ->check(CLI::IsMember({"quiet", "info", "debug"}))
      ->capture_default_str();

  Flags oracle_flags;
  CLI::App* oracle = app.add_subcommand("oracle", "");
  oracle->group("");
  AddProblemFlags(oracle, &oracle_flags);
  // The main options are not required for the subcommand.
  app.require_subcommand(0, 1);
  for (const char* name : {"--input", "--p"}) {
    app.get_option(name)->required(false);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    if (*oracle) return RunOracle(oracle_flags);
    if (flags.input.empty() || flags.p <= 0) {
      std::cerr << "error: --input and --p are required\n";
      return 1;
    }
    SetLogLevel(flags.log_level == "debug"  ? LogLevel::kDebug
                : flags.log_level == "info" ? LogLevel::kInfo
                                            : LogLevel::kQuiet);
    return Run(flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
