#include <atomic>
#include <unistd.h>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mixedtrails/cli.hpp"
#include "mixedtrails/evidence.hpp"
#include "mixedtrails/io.hpp"
#include "mixedtrails/synthgen.hpp"
#include "oracles.hpp"

using namespace mixedtrails;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("io");

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = fs::temp_directory_path() /
           ("mixedtrails_io_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter.fetch_add(1)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path kDataDir = MIXEDTRAILS_DATA_DIR;

}  // namespace

TEST_CASE("two-line transition file loads as one transition over two states") {
  TempDir tmp;
  write_file(tmp.path / "d.tsv", "src\tdst\ns1\ts2\n");
  const auto d = io::load_transitions(tmp.path / "d.tsv");
  CHECK(d.size() == 1);
  CHECK(d.n_states() == 2);
  CHECK(d.space().label(d.transition(0).src) == "s1");
  CHECK(d.space().label(d.transition(0).dst) == "s2");
}

TEST_CASE("loader errors carry file and line") {
  TempDir tmp;
  write_file(tmp.path / "missing.tsv", "src\tother\na\tb\n");
  CHECK_THROWS_WITH_AS(io::load_transitions(tmp.path / "missing.tsv"),
                       doctest::Contains("missing required column 'dst'"), io::ParseError);

  write_file(tmp.path / "short.tsv", "src\tdst\tmeta\na\tb\tx\na\tb\n");
  CHECK_THROWS_WITH_AS(io::load_transitions(tmp.path / "short.tsv"),
                       doctest::Contains("line 3"), io::ParseError);

  write_file(tmp.path / "states.tsv", "a\nb\n");
  const auto space = io::load_states(tmp.path / "states.tsv");
  write_file(tmp.path / "unknown.tsv", "src\tdst\na\tz\n");
  CHECK_THROWS_WITH_AS(io::load_transitions(tmp.path / "unknown.tsv", &space),
                       doctest::Contains("unknown state 'z'"), io::ParseError);

  CHECK_THROWS_AS(io::load_transitions(tmp.path / "nonexistent.tsv"), io::IoError);
}

TEST_CASE("sequence positions come from the file or from appearance order") {
  TempDir tmp;
  write_file(tmp.path / "seq.tsv",
             "src\tdst\tseq\na\tb\tw1\nb\ta\tw1\na\tb\tw2\n");
  const auto d = io::load_transitions(tmp.path / "seq.tsv");
  CHECK(d.sequence_labels().size() == 2);
  CHECK(d.transition(0).pos == 0);
  CHECK(d.transition(1).pos == 1);
  CHECK(d.transition(2).pos == 0);
}

TEST_CASE("belief triples normalize to (0.75, 0.25)") {
  TempDir tmp;
  write_file(tmp.path / "phi.tsv", "a\tb\t3\na\tc\t1\n");
  const StateSpace space({"a", "b", "c"});
  const auto phi = io::load_belief_matrix(tmp.path / "phi.tsv", space, "g");
  const auto row = phi.row(0);
  REQUIRE(row.size() == 2);
  CHECK(row[0].second == doctest::Approx(0.75));
  CHECK(row[1].second == doctest::Approx(0.25));
  CHECK(phi.row_empty(1));
}

TEST_CASE("empty belief file is the all-uniform matrix") {
  TempDir tmp;
  write_file(tmp.path / "phi.tsv", "");
  const StateSpace space({"a", "b"});
  const auto phi = io::load_belief_matrix(tmp.path / "phi.tsv", space, "g");
  CHECK(phi.row_empty(0));
  CHECK(phi.row_empty(1));
}

TEST_CASE("duplicate belief entries sum their weights") {
  TempDir tmp;
  write_file(tmp.path / "phi.tsv", "a\tb\t1\na\tb\t1\na\tc\t2\n");
  const StateSpace space({"a", "b", "c"});
  const auto phi = io::load_belief_matrix(tmp.path / "phi.tsv", space, "g");
  const auto row = phi.row(0);
  REQUIRE(row.size() == 2);
  CHECK(row[0].second == doctest::Approx(0.5));
  CHECK(row[1].second == doctest::Approx(0.5));
}

TEST_CASE("belief loader rejects bad weights and unknown states") {
  TempDir tmp;
  const StateSpace space({"a", "b"});
  write_file(tmp.path / "neg.tsv", "a\tb\t-1\n");
  CHECK_THROWS_WITH_AS(io::load_belief_matrix(tmp.path / "neg.tsv", space, "g"),
                       doctest::Contains("weight must be positive"), io::ParseError);
  write_file(tmp.path / "zero.tsv", "a\tb\t0\n");
  CHECK_THROWS_AS(io::load_belief_matrix(tmp.path / "zero.tsv", space, "g"), io::ParseError);
  write_file(tmp.path / "unk.tsv", "a\tz\t1\n");
  CHECK_THROWS_WITH_AS(io::load_belief_matrix(tmp.path / "unk.tsv", space, "g"),
                       doctest::Contains("unknown state 'z'"), io::ParseError);
}

TEST_CASE("gamma file with the wrong row count is rejected") {
  TempDir tmp;
  write_file(tmp.path / "g.tsv", "a\tb\n0.5\t0.5\n0.5\t0.5\n");
  CHECK_THROWS_WITH_AS(io::load_gamma_file(tmp.path / "g.tsv", 7, {"a", "b"}),
                       doctest::Contains("gamma rows (2) != transitions (7)"), io::ParseError);
  const auto gamma = io::load_gamma_file(tmp.path / "g.tsv", 2, {"a", "b"});
  CHECK(gamma.n_rows() == 2);
  // header order need not match group order
  write_file(tmp.path / "g2.tsv", "b\ta\n0.25\t0.75\n");
  const auto gamma2 = io::load_gamma_file(tmp.path / "g2.tsv", 1, {"a", "b"});
  CHECK(gamma2.row(0)[0] == 0.75);
  CHECK(gamma2.row(0)[1] == 0.25);
}

TEST_CASE("dataset and matrix round-trip through TSV unchanged") {
  std::mt19937_64 rng(83);
  oracles::InstanceOptions opts;
  opts.max_n = 5;
  opts.max_m = 20;
  const auto inst = oracles::random_instance(rng, opts);
  const auto d = oracles::to_dataset(inst);
  const auto h = oracles::to_hypothesis(inst, "h");

  TempDir tmp;
  io::write_dataset_tsv(tmp.path / "d.tsv", d);
  io::write_states_tsv(tmp.path / "states.tsv", d.space());
  const auto space = io::load_states(tmp.path / "states.tsv");
  const auto d2 = io::load_transitions(tmp.path / "d.tsv", &space);
  REQUIRE(d2.size() == d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    CHECK(d2.transition(k).src == d.transition(k).src);
    CHECK(d2.transition(k).dst == d.transition(k).dst);
  }

  io::write_belief_tsv(tmp.path / "phi.tsv", h.phis[0], d.space());
  const auto phi2 = io::load_belief_matrix(tmp.path / "phi.tsv", d.space(), "g0");
  for (StateIndex i = 0; i < d.n_states(); ++i) {
    const auto r1 = h.phis[0].row(i), r2 = phi2.row(i);
    REQUIRE(r1.size() == r2.size());
    for (std::size_t e = 0; e < r1.size(); ++e) {
      CHECK(r1[e].first == r2[e].first);
      CHECK(r1[e].second == r2[e].second);  // exact: shortest-round-trip formatting
    }
  }
}

TEST_CASE("a simulated dataset round-trips with sequences, positions and metadata") {
  const auto g = mixedtrails::synthgen::generate_ba_graph(25, 3, 0.5, 19);
  const auto thetas = mixedtrails::synthgen::build_all_thetas(g);
  mixedtrails::synthgen::WalkerConfig cfg;
  cfg.scenario = mixedtrails::synthgen::Scenario::violet;
  cfg.n_walkers = 40;
  cfg.n_steps = 6;
  cfg.seed = 77;
  const auto d = mixedtrails::synthgen::simulate_walkers(g, thetas, cfg);

  TempDir tmp;
  io::write_dataset_tsv(tmp.path / "d.tsv", d);
  io::write_states_tsv(tmp.path / "states.tsv", d.space());
  const auto space = io::load_states(tmp.path / "states.tsv");
  const auto d2 = io::load_transitions(tmp.path / "d.tsv", &space);

  REQUIRE(d2.size() == d.size());
  REQUIRE(d2.sequence_labels() == d.sequence_labels());
  for (std::size_t k = 0; k < d.size(); ++k) {
    CHECK(d2.transition(k).src == d.transition(k).src);
    CHECK(d2.transition(k).dst == d.transition(k).dst);
    CHECK(d2.transition(k).seq == d.transition(k).seq);
    CHECK(d2.transition(k).pos == d.transition(k).pos);
  }
  REQUIRE(d2.metadata_names() == d.metadata_names());
  for (const auto& name : d.metadata_names())
    CHECK(*d2.metadata_column(name) == *d.metadata_column(name));

  // writing the reloaded dataset reproduces the bytes
  io::write_dataset_tsv(tmp.path / "d2.tsv", d2);
  CHECK(read_file(tmp.path / "d2.tsv") == read_file(tmp.path / "d.tsv"));
}

TEST_CASE("explicit position columns are honored and validated") {
  TempDir tmp;
  write_file(tmp.path / "ok.tsv",
             "src\tdst\tseq\tpos\nb\ta\tw\t1\na\tb\tw\t0\n");
  const auto d = io::load_transitions(tmp.path / "ok.tsv");
  CHECK(d.transition(0).pos == 1);
  CHECK(d.transition(1).pos == 0);

  write_file(tmp.path / "gap.tsv", "src\tdst\tseq\tpos\na\tb\tw\t0\nb\ta\tw\t2\n");
  CHECK_THROWS_AS(io::load_transitions(tmp.path / "gap.tsv"), std::invalid_argument);

  write_file(tmp.path / "orphan.tsv", "src\tdst\tpos\na\tb\t0\n");
  CHECK_THROWS_WITH_AS(io::load_transitions(tmp.path / "orphan.tsv"),
                       doctest::Contains("'pos' requires column 'seq'"), io::ParseError);
}

TEST_CASE("hypothesis specs load every gamma and phi mode") {
  TempDir tmp;
  write_file(tmp.path / "d.tsv",
             "src\tdst\thalf\na\tb\t1st\nb\ta\t2nd\na\ta\t2nd\n");
  const auto d = io::load_transitions(tmp.path / "d.tsv");

  write_file(tmp.path / "uniform.json",
             R"({"name":"uniform","gamma":"single","phi":{"all":"uniform"}})");
  const auto uniform = io::load_hypothesis_spec(tmp.path / "uniform.json", d);
  CHECK(uniform.gamma.deterministic());
  CHECK(uniform.phis[0].row_empty(0));

  write_file(tmp.path / "data.json",
             R"({"name":"data","gamma":"single","phi":{"all":"data"}})");
  const auto data = io::load_hypothesis_spec(tmp.path / "data.json", d);
  const auto row_a = data.phis[0].row(0);  // from 'a': one to b, one to a
  REQUIRE(row_a.size() == 2);
  CHECK(row_a[0].second == doctest::Approx(0.5));

  write_file(tmp.path / "phi_file.tsv", "a\tb\t1\n");
  write_file(tmp.path / "split.json", R"({
    "name": "split", "groups": ["1st", "2nd"],
    "gamma": {"column": "half"},
    "phi": {"1st": {"file": "phi_file.tsv"}, "2nd": "uniform"}})");
  const auto split = io::load_hypothesis_spec(tmp.path / "split.json", d);
  CHECK(split.gamma.deterministic());
  CHECK(split.gamma.row(0)[0] == 1.0);
  CHECK(split.gamma.row(1)[1] == 1.0);
  CHECK(split.gamma.row(2)[1] == 1.0);

  write_file(tmp.path / "adj.tsv", "a\tb\na\ta\nb\ta\n");
  write_file(tmp.path / "gamma.tsv", "x\ty\n0.5\t0.5\n0.25\t0.75\n1\t0\n");
  write_file(tmp.path / "soft.json", R"({
    "name": "soft", "groups": ["x", "y"],
    "gamma": {"file": "gamma.tsv"},
    "phi": {"x": {"adjacency": "adj.tsv"}, "y": "uniform"},
    "naive_elicitation": true})");
  const auto soft = io::load_hypothesis_spec(tmp.path / "soft.json", d);
  CHECK(soft.naive_elicitation);
  CHECK_FALSE(soft.gamma.deterministic());
  const auto adj_row = soft.phis[0].row(0);
  REQUIRE(adj_row.size() == 2);  // a -> {a, b} uniform
  CHECK(adj_row[0].second == doctest::Approx(0.5));

  write_file(tmp.path / "bad.json", R"({"name":"bad","gamma":"single","phi":{}})");
  CHECK_THROWS_AS(io::load_hypothesis_spec(tmp.path / "bad.json", d), io::ParseError);
  write_file(tmp.path / "badcol.json",
             R"({"name":"b","groups":["p","q"],"gamma":{"column":"half"},"phi":{"p":"uniform","q":"uniform"}})");
  CHECK_THROWS_WITH_AS(io::load_hypothesis_spec(tmp.path / "badcol.json", d),
                       doctest::Contains("does not name a group"), io::ParseError);
}

TEST_CASE("the bundled halftime fixture reproduces the deterministic split") {
  const auto d = io::load_transitions(kDataDir / "soccer" / "transitions.tsv");
  CHECK(d.size() == 160);
  CHECK(d.n_states() == 5);
  const auto h = io::load_hypothesis_spec(
      kDataDir / "soccer" / "hyp_half_offense+defense.json", d);
  CHECK(h.gamma.deterministic());
  CHECK(validate_hypothesis(h, d).empty());
  const auto w = induced_assignment(h.gamma);
  std::int64_t first = 0;
  for (GroupIndex g : w.assignment)
    if (g == 0) ++first;
  CHECK(first == 80);
}

TEST_CASE("results tables enforce unique (hypothesis, kappa) and round-trip") {
  io::ResultsTable table;
  table.append({"a", 0.0, -1.5, std::nullopt, std::nullopt, "closed-form"});
  table.append({"a", 1.0, -2.5, 0.25, 50, "sampling"});
  CHECK_THROWS_AS(table.append({"a", 1.0, -9.9, std::nullopt, std::nullopt, "closed-form"}),
                  io::ParseError);

  const std::string csv = io::results_to_csv(table);
  CHECK(csv == "hypothesis,kappa,log_ml,std_err,n_samples,method\n"
               "a,0,-1.5,,,closed-form\n"
               "a,1,-2.5,0.25,50,sampling\n");

  TempDir tmp;
  io::write_text_atomic(tmp.path / "r.csv", csv);
  const auto loaded = io::read_results_csv(tmp.path / "r.csv");
  REQUIRE(loaded.rows.size() == 2);
  CHECK(loaded.rows[1].log_ml == -2.5);
  CHECK(loaded.rows[1].std_err.value() == 0.25);
  CHECK(loaded.rows[1].n_samples.value() == 50);
  CHECK_FALSE(loaded.rows[0].std_err.has_value());
}

TEST_CASE("SVG has one polyline per hypothesis with one vertex per kappa") {
  io::ResultsTable table;
  for (const char* name : {"a", "b"})
    for (double kappa : {0.0, 1.0, 10.0, 100.0, 1000.0})
      table.append({name, kappa, -10.0 * (kappa + 1) * (name[0] == 'b' ? 2.0 : 1.0),
                    std::nullopt, std::nullopt, "closed-form"});
  const std::string svg = io::render_curves_svg(table, true);

  std::size_t polylines = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    const std::size_t points = svg.find("points=\"", pos) + 8;
    const std::size_t end = svg.find('"', points);
    std::size_t vertices = 0;
    for (std::size_t c = points; c < end; ++c)
      if (svg[c] == ',') ++vertices;
    CHECK(vertices == 5);
    pos = end;
  }
  CHECK(polylines == 2);
  CHECK(svg.find("class=\"band\"") == std::string::npos);  // no stderr, no bands
  CHECK(svg.find(">a</text>") != std::string::npos);       // legend entries
  CHECK(svg.find(">b</text>") != std::string::npos);

  io::ResultsTable sampled;
  sampled.append({"a", 0.0, -5.0, 0.5, 50, "sampling"});
  sampled.append({"a", 1.0, -6.0, 0.5, 50, "sampling"});
  const std::string svg2 = io::render_curves_svg(sampled, false);
  CHECK(svg2.find("class=\"band\"") != std::string::npos);

  CHECK_THROWS_AS(io::render_curves_svg(io::ResultsTable{}, false), io::ParseError);
}

TEST_CASE("compare runs end to end on the bundled fixture and is jobs-stable") {
  TempDir tmp;
  cli::CompareArgs args;
  args.data = (kDataDir / "soccer" / "transitions.tsv").string();
  args.hypotheses = {(kDataDir / "soccer" / "hyp_uniform.json").string(),
                     (kDataDir / "soccer" / "hyp_half_offense+defense.json").string()};
  args.kappas = "0,1,100";
  args.out = (tmp.path / "out.csv").string();
  CHECK(cli::run_compare(args) == cli::kExitOk);
  const std::string first = read_file(tmp.path / "out.csv");

  args.jobs = 4;
  args.out = (tmp.path / "out2.csv").string();
  CHECK(cli::run_compare(args) == cli::kExitOk);
  CHECK(read_file(tmp.path / "out2.csv") == first);

  const auto table = io::read_results_csv(tmp.path / "out.csv");
  REQUIRE(table.rows.size() == 6);
  CHECK(table.rows[0].hypothesis == "uniform");
  CHECK(table.rows[0].kappa == 0.0);
  CHECK(table.rows[0].method == "closed-form");
  // hypotheses sharing no stderr: closed form everywhere on this fixture
  for (const auto& row : table.rows) CHECK_FALSE(row.std_err.has_value());
}

TEST_CASE("compare reports validation failures with exit code 2") {
  TempDir tmp;
  write_file(tmp.path / "d.tsv", "src\tdst\na\tb\n");
  write_file(tmp.path / "gamma.tsv", "x\ty\n0.5\t0.6\n");
  write_file(tmp.path / "h.json", R"({
    "name": "h", "groups": ["x", "y"],
    "gamma": {"file": "gamma.tsv"},
    "phi": {"x": "uniform", "y": "uniform"}})");
  cli::CompareArgs args;
  args.data = (tmp.path / "d.tsv").string();
  args.hypotheses = {(tmp.path / "h.json").string()};
  args.out = (tmp.path / "out.csv").string();
  CHECK(cli::run_compare(args) == cli::kExitUsage);
  CHECK_FALSE(fs::exists(tmp.path / "out.csv"));
}

TEST_CASE("generate writes a rerunnable study and identical bytes on rerun") {
  TempDir tmp;
  cli::GenerateArgs args;
  args.scenario = "violet";
  args.nodes = 30;
  args.attach = 3;
  args.walkers = 25;
  args.steps = 4;
  args.seed = 5;
  args.outdir = (tmp.path / "study").string();
  REQUIRE(cli::run_generate(args) == cli::kExitOk);
  for (const char* file :
       {"states.tsv", "transitions.tsv", "theta_link.tsv", "theta_red.tsv", "theta_blue.tsv",
        "hyp_link.json", "hyp_link_color.json", "hyp_color.json", "hyp_mem.json",
        "hyp_violet.json", "hyp_violet_naive.json", "gamma_violet.tsv"})
    CHECK(fs::exists(tmp.path / "study" / file));

  const std::string transitions = read_file(tmp.path / "study" / "transitions.tsv");
  args.outdir = (tmp.path / "study2").string();
  REQUIRE(cli::run_generate(args) == cli::kExitOk);
  CHECK(read_file(tmp.path / "study2" / "transitions.tsv") == transitions);
  CHECK(read_file(tmp.path / "study2" / "theta_red.tsv") ==
        read_file(tmp.path / "study" / "theta_red.tsv"));

  // the generated study is immediately comparable
  cli::CompareArgs cmp;
  cmp.data = (tmp.path / "study" / "transitions.tsv").string();
  cmp.states = (tmp.path / "study" / "states.tsv").string();
  cmp.hypotheses = {(tmp.path / "study" / "hyp_link.json").string(),
                    (tmp.path / "study" / "hyp_violet.json").string()};
  cmp.kappas = "0,10";
  cmp.samples = 10;
  cmp.out = (tmp.path / "results.csv").string();
  REQUIRE(cli::run_compare(cmp) == cli::kExitOk);
  const auto table = io::read_results_csv(tmp.path / "results.csv");
  REQUIRE(table.rows.size() == 4);
  CHECK(table.rows[2].method == "sampling");
  CHECK(table.rows[2].std_err.has_value());

  cli::PlotArgs plot;
  plot.in = cmp.out;
  plot.out = (tmp.path / "plot.svg").string();
  CHECK(cli::run_plot(plot) == cli::kExitOk);
  CHECK(read_file(tmp.path / "plot.svg").find("<svg") == 0);

  cli::GenerateArgs bad = args;
  bad.scenario = "nope";
  CHECK(cli::run_generate(bad) == cli::kExitUsage);
}

TEST_SUITE_END();
