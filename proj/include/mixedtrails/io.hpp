#ifndef MIXEDTRAILS_IO_HPP
#define MIXEDTRAILS_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixedtrails/core.hpp"
#include "mixedtrails/evidence.hpp"

namespace mixedtrails::io {

// File-system failures (open/write/rename); everything else that goes wrong
// while reading is a ParseError with the offending file and line.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// States file: one label per line, order defining the index.
StateSpace load_states(const std::filesystem::path& path);

// Transition TSV: header row with required columns `src` and `dst`, optional
// `seq` and `pos`, and arbitrary further metadata columns (attached to the
// dataset by name). Without a states file the state space is the sorted
// union of the src/dst values; with one, unknown states are an error.
TransitionDataset load_transitions(const std::filesystem::path& path,
                                   const StateSpace* space = nullptr);

// Belief TSV: `src<TAB>dst<TAB>weight` triples, weight > 0; duplicates sum;
// rows are normalized on load. An empty file is the all-uniform belief.
BeliefMatrix load_belief_matrix(const std::filesystem::path& path, const StateSpace& space,
                                std::string group_label);

// Per-transition group probability rows; the header names the groups (any
// order, matched by label), followed by one row per transition.
GroupAssignmentProbabilities load_gamma_file(const std::filesystem::path& path,
                                             std::size_t n_transitions,
                                             const std::vector<std::string>& groups);

// Hypothesis spec (JSON): name, groups, a gamma source ("single", a metadata
// column, or a probability file) and one phi source per group ("uniform",
// "data", a belief file, or an adjacency list). Relative paths are resolved
// against the spec file's directory.
Hypothesis load_hypothesis_spec(const std::filesystem::path& path, const TransitionDataset& d);

void write_text_atomic(const std::filesystem::path& path, const std::string& content);
void write_states_tsv(const std::filesystem::path& path, const StateSpace& space);
void write_dataset_tsv(const std::filesystem::path& path, const TransitionDataset& d);
void write_belief_tsv(const std::filesystem::path& path, const BeliefMatrix& phi,
                      const StateSpace& space);

struct ResultRow {
  std::string hypothesis;
  double kappa = 0.0;
  double log_ml = 0.0;
  std::optional<double> std_err;
  std::optional<std::int64_t> n_samples;
  std::string method;
};

// (hypothesis, kappa) pairs are unique; append order is preserved.
struct ResultsTable {
  std::vector<ResultRow> rows;
  void append(ResultRow row);
};

ResultsTable results_from_curves(const std::vector<EvidenceCurve>& curves);
std::string results_to_csv(const ResultsTable& table);
ResultsTable read_results_csv(const std::filesystem::path& path);

// Static evidence-curve plot: one polyline per hypothesis over kappa, with
// +-3 std-err bands where sampled. log_x maps positive kappas on a log axis
// and pins kappa = 0 at the left edge.
std::string render_curves_svg(const ResultsTable& table, bool log_x);

// Locale-independent shortest-round-trip formatting used by every writer.
std::string format_double(double v);
double parse_double(std::string_view text, const std::string& context);
std::int64_t parse_int(std::string_view text, const std::string& context);

}  // namespace mixedtrails::io

#endif
