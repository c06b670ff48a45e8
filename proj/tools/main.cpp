#include <iostream>

#include "CLI11.hpp"
#include "mixedtrails/cli.hpp"

int main(int argc, char** argv) {
  using namespace mixedtrails::cli;

  CLI::App app{"Bayesian comparison of hypotheses about heterogeneous sequence data"};
  app.require_subcommand(1);

  CompareArgs compare_args;
  auto* compare = app.add_subcommand(
      "compare", "Compute evidence curves for hypotheses against a transition dataset");
  compare->add_option("--data", compare_args.data, "transition TSV")->required();
  compare->add_option("--hypothesis", compare_args.hypotheses, "hypothesis spec (repeatable)")
      ->required();
  compare->add_option("--kappas", compare_args.kappas,
                      "comma-separated concentration factors, or 'grid'");
  compare->add_option("--samples", compare_args.samples, "samples per probabilistic hypothesis");
  compare->add_option("--seed", compare_args.seed, "RNG seed")->envname("MIXEDTRAILS_SEED");
  compare->add_option("--exact-cap", compare_args.exact_cap,
                      "enumerate probabilistic hypotheses exactly up to this many assignments");
  compare->add_option("--out", compare_args.out, "output CSV")->required();
  compare->add_option("--jobs", compare_args.jobs, "worker threads");
  compare->add_option("--states", compare_args.states, "states file (one label per line)");

  GenerateArgs generate_args;
  auto* generate = app.add_subcommand(
      "generate", "Generate a synthetic random-walk study (dataset, beliefs, hypotheses)");
  generate->add_option("--scenario", generate_args.scenario, "link|color|memory|violet")
      ->required();
  generate->add_option("--nodes", generate_args.nodes, "graph size");
  generate->add_option("--attach", generate_args.attach, "edges per new node");
  generate->add_option("--walkers", generate_args.walkers, "number of walkers");
  generate->add_option("--steps", generate_args.steps, "steps per walker");
  generate->add_option("--seed", generate_args.seed, "RNG seed")->envname("MIXEDTRAILS_SEED");
  generate->add_option("--outdir", generate_args.outdir, "output directory")->required();
  generate->add_option("--jobs", generate_args.jobs, "worker threads");

  PlotArgs plot_args;
  auto* plot = app.add_subcommand("plot", "Render an evidence-curve SVG from a results CSV");
  plot->add_option("--in", plot_args.in, "results CSV")->required();
  plot->add_option("--out", plot_args.out, "output SVG")->required();
  plot->add_flag("--log-x", plot_args.log_x, "log-scale the kappa axis (kappa=0 pinned left)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  if (compare->parsed()) return run_compare(compare_args);
  if (generate->parsed()) return run_generate(generate_args);
  if (plot->parsed()) return run_plot(plot_args);
  return kExitUsage;
}
