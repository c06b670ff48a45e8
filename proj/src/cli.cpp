#include "mixedtrails/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

#include "json.hpp"
#include "mixedtrails/elicitation.hpp"
#include "mixedtrails/evidence.hpp"
#include "mixedtrails/io.hpp"
#include "mixedtrails/synthgen.hpp"

namespace mixedtrails::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> default_kappa_grid() {
  return {0, 1, 2, 3, 4, 5, 10, 100, 1000, 10000};
}

std::vector<double> parse_kappas(const std::string& text) {
  if (text == "grid") return default_kappa_grid();
  std::vector<double> kappas;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string field =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    kappas.push_back(io::parse_double(field, "--kappas"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return kappas;
}

int run_compare(const CompareArgs& args) {
  try {
    std::vector<double> kappas;
    try {
      kappas = parse_kappas(args.kappas);
    } catch (const io::ParseError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }

    std::optional<StateSpace> states;
    if (!args.states.empty()) states = io::load_states(args.states);
    const TransitionDataset dataset =
        io::load_transitions(args.data, states ? &*states : nullptr);

    std::vector<Hypothesis> hypotheses;
    bool invalid = false;
    for (const std::string& path : args.hypotheses) {
      Hypothesis h = io::load_hypothesis_spec(path, dataset);
      const auto report = validate_hypothesis(h, dataset);
      for (const std::string& violation : report)
        std::cerr << path << ": " << violation << "\n";
      if (!report.empty()) invalid = true;
      hypotheses.push_back(std::move(h));
    }
    if (invalid) return kExitUsage;

    CurveOptions opts;
    opts.n_samples = args.samples;
    opts.seed = args.seed;
    opts.exact_cap = args.exact_cap;
    opts.jobs = args.jobs;

    std::vector<EvidenceCurve> curves;
    curves.reserve(hypotheses.size());
    for (const Hypothesis& h : hypotheses)
      curves.push_back(evidence_curve(dataset, h, kappas, opts));

    io::write_text_atomic(args.out, io::results_to_csv(io::results_from_curves(curves)));
    return kExitOk;
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

namespace {

json phi_file_entry(const std::string& file) { return json{{"file", file}}; }

void write_hypothesis_spec(const fs::path& dir, const std::string& file, json spec) {
  io::write_text_atomic(dir / file, spec.dump(2) + "\n");
}

}  // namespace

int run_generate(const GenerateArgs& args) {
  try {
    const auto scenario = synthgen::parse_scenario(args.scenario);
    if (args.outdir.empty()) {
      std::cerr << "error: --outdir is required\n";
      return kExitUsage;
    }

    synthgen::WalkerConfig cfg;
    cfg.scenario = scenario;
    cfg.n_walkers = args.walkers;
    cfg.n_steps = args.steps;
    cfg.seed = args.seed;
    cfg.jobs = args.jobs;

    const auto graph = synthgen::generate_ba_graph(args.nodes, args.attach, 0.5, args.seed);
    const auto thetas = synthgen::build_all_thetas(graph);
    const TransitionDataset dataset = synthgen::simulate_walkers(graph, thetas, cfg);

    fs::create_directories(args.outdir);
    const fs::path dir = args.outdir;
    io::write_states_tsv(dir / "states.tsv", dataset.space());
    io::write_dataset_tsv(dir / "transitions.tsv", dataset);
    io::write_belief_tsv(dir / "theta_link.tsv", thetas.link, dataset.space());
    io::write_belief_tsv(dir / "theta_red.tsv", thetas.red, dataset.space());
    io::write_belief_tsv(dir / "theta_blue.tsv", thetas.blue, dataset.space());

    write_hypothesis_spec(dir, "hyp_link.json",
                          json{{"name", "link"},
                               {"gamma", "single"},
                               {"phi", {{"all", phi_file_entry("theta_link.tsv")}}}});
    write_hypothesis_spec(dir, "hyp_link_color.json",
                          json{{"name", "link-color"},
                               {"groups", {"red", "blue"}},
                               {"gamma", {{"column", "walker_color"}}},
                               {"phi",
                                {{"red", phi_file_entry("theta_link.tsv")},
                                 {"blue", phi_file_entry("theta_link.tsv")}}}});
    write_hypothesis_spec(dir, "hyp_color.json",
                          json{{"name", "color"},
                               {"groups", {"red", "blue"}},
                               {"gamma", {{"column", "walker_color"}}},
                               {"phi",
                                {{"red", phi_file_entry("theta_red.tsv")},
                                 {"blue", phi_file_entry("theta_blue.tsv")}}}});
    write_hypothesis_spec(dir, "hyp_mem.json",
                          json{{"name", "mem"},
                               {"groups", {"red", "blue", "draw"}},
                               {"gamma", {{"column", "majority"}}},
                               {"phi",
                                {{"red", phi_file_entry("theta_red.tsv")},
                                 {"blue", phi_file_entry("theta_blue.tsv")},
                                 {"draw", phi_file_entry("theta_link.tsv")}}}});

    if (scenario == synthgen::Scenario::violet) {
      const auto* shades = dataset.metadata_column("shade");
      std::string gamma_tsv = "red\tblue\n";
      for (const std::string& s : *shades) {
        const double shade = io::parse_double(s, "shade");
        gamma_tsv += s + "\t" + io::format_double(1.0 - shade) + "\n";
      }
      io::write_text_atomic(dir / "gamma_violet.tsv", gamma_tsv);
      const json phi = {{"red", phi_file_entry("theta_red.tsv")},
                        {"blue", phi_file_entry("theta_blue.tsv")}};
      write_hypothesis_spec(dir, "hyp_violet.json",
                            json{{"name", "violet"},
                                 {"groups", {"red", "blue"}},
                                 {"gamma", {{"file", "gamma_violet.tsv"}}},
                                 {"phi", phi}});
      write_hypothesis_spec(dir, "hyp_violet_naive.json",
                            json{{"name", "violet-naive"},
                                 {"groups", {"red", "blue"}},
                                 {"gamma", {{"file", "gamma_violet.tsv"}}},
                                 {"phi", phi},
                                 {"naive_elicitation", true}});
    }
    return kExitOk;
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_plot(const PlotArgs& args) {
  try {
    const auto table = io::read_results_csv(args.in);
    io::write_text_atomic(args.out, io::render_curves_svg(table, args.log_x));
    return kExitOk;
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace mixedtrails::cli
