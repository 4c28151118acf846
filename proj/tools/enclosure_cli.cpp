#include <cstdio>
#include <exception>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "enclosure/errors.hpp"
#include "enclosure/runner.hpp"

namespace {

using enclosure::RunOptions;

struct CommandSpec {
  const char* name;
  const char* help;
  bool needs_data;
  bool wants_seed;
  std::function<void(const RunOptions&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex support reconstruction from boundary Cauchy data"};
  app.require_subcommand(1);

  const CommandSpec commands[] = {
      {"synthesize", "Generate Cauchy data for a scenario's source", false, true,
       enclosure::run_synthesize},
      {"indicate", "Tabulate indicator values over directions and tau", true, false,
       enclosure::run_indicate},
      {"reconstruct", "Estimate supports and intersect the half-planes", true, false,
       enclosure::run_reconstruct},
      {"side-test", "Decide which side of a line the support reaches", true, false,
       enclosure::run_side_test},
      {"disk-demo", "Compare disk data against the closed-form indicator", false, true,
       enclosure::run_disk_demo},
      {"ibvp", "Solve the penetrable medium problem and emit its Cauchy data", false, false,
       enclosure::run_ibvp},
      {"report", "Summarize a hull result against the scenario truth", true, false,
       enclosure::run_report},
  };

  struct Bound {
    RunOptions opt;
    const CommandSpec* spec;
    CLI::App* sub;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  for (const CommandSpec& spec : commands) {
    auto b = std::make_unique<Bound>();
    b->spec = &spec;
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("--config", b->opt.config_path, "Scenario JSON file")->required();
    sub->add_option("--out", b->opt.out_dir, "Directory for output artifacts");
    if (spec.needs_data)
      sub->add_option("--data", b->opt.data_path, "Input data file from an earlier command");
    sub->add_option("--threads", b->opt.threads, "Worker thread count")
        ->check(CLI::Range(1, 256));
    if (spec.wants_seed) {
      auto* seed_opt = sub->add_option("--seed", b->opt.seed, "Noise seed override");
      sub->callback([bp = b.get(), seed_opt] { bp->opt.has_seed = seed_opt->count() > 0; });
    }
    b->sub = sub;
    bound.push_back(std::move(b));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Treat malformed invocations like malformed configs, except the
    // zero-exit help/version paths which CLI11 signals the same way.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (const auto& b : bound) {
      if (b->sub->parsed()) {
        b->spec->run(b->opt);
        return 0;
      }
    }
    std::fprintf(stderr, "no command selected\n");
    return 2;
  } catch (const enclosure::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const enclosure::InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 4;
  } catch (const enclosure::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
