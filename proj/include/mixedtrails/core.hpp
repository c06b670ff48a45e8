#ifndef MIXEDTRAILS_CORE_HPP
#define MIXEDTRAILS_CORE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mixedtrails {

using StateIndex = std::int32_t;
using GroupIndex = std::int32_t;

// Tolerances shared by validation and the deterministic-flag snap.
inline constexpr double kGammaRowSumTol = 1e-9;
inline constexpr double kDeterministicSnapTol = 1e-12;
inline constexpr double kPhiRowSumTol = 1e-12;

// Finite ordered state space with a label <-> index bijection.
class StateSpace {
 public:
  // Labels must be unique and non-empty; at least one state.
  explicit StateSpace(std::vector<std::string> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(StateIndex i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<StateIndex> find(std::string_view label) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, StateIndex> index_;
};

struct Transition {
  StateIndex src = 0;
  StateIndex dst = 0;
  std::int32_t seq = -1;  // index into sequence label table, -1 = none
  std::int32_t pos = -1;  // 0-based position within its sequence, -1 = none
};

// Ordered transitions over a state space. The row order is canonical: group
// assignment rows and metadata columns are aligned to it by position.
class TransitionDataset {
 public:
  TransitionDataset(StateSpace space, std::vector<Transition> transitions,
                    std::vector<std::string> sequence_labels = {});

  const StateSpace& space() const { return space_; }
  int n_states() const { return space_.size(); }
  std::size_t size() const { return transitions_.size(); }
  const Transition& transition(std::size_t k) const { return transitions_[k]; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<std::string>& sequence_labels() const { return sequence_labels_; }

  // Per-transition metadata columns (opaque strings), e.g. walker colors.
  void add_metadata_column(std::string name, std::vector<std::string> values);
  const std::vector<std::string>* metadata_column(std::string_view name) const;
  const std::vector<std::string>& metadata_names() const { return meta_names_; }

 private:
  StateSpace space_;
  std::vector<Transition> transitions_;
  std::vector<std::string> sequence_labels_;
  std::vector<std::string> meta_names_;
  std::vector<std::vector<std::string>> meta_columns_;
};

// Sparse row-stochastic belief matrix for one group. Entries are strictly
// positive after normalize(); a row with no entries means "no stated belief
// from this state" and is read as uniform over all states downstream.
class BeliefMatrix {
 public:
  BeliefMatrix(std::string group_label, int n_states);

  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }
  int n_states() const { return static_cast<int>(rows_.size()); }

  // Accumulates weight (duplicates sum); call normalize() once after loading.
  void add_weight(StateIndex src, StateIndex dst, double weight);
  // Sorts rows by destination and scales each non-empty row to sum 1.
  // Rejects non-positive accumulated weights.
  void normalize();

  std::span<const std::pair<StateIndex, double>> row(StateIndex src) const {
    return rows_.at(src);
  }
  bool row_empty(StateIndex src) const { return rows_.at(src).empty(); }

 private:
  std::string label_;
  std::vector<std::vector<std::pair<StateIndex, double>>> rows_;
  bool normalized_ = false;
};

// Per-transition distributions over groups, aligned to dataset row order.
// Entries within the snap tolerance of 0 or 1 are stored snapped, and the
// hypothesis is flagged deterministic when every entry ends up 0 or 1.
class GroupAssignmentProbabilities {
 public:
  GroupAssignmentProbabilities(std::vector<std::string> groups,
                               std::vector<double> gamma_row_major);

  int n_groups() const { return static_cast<int>(groups_.size()); }
  std::size_t n_rows() const { return groups_.empty() ? 0 : gamma_.size() / groups_.size(); }
  const std::vector<std::string>& groups() const { return groups_; }
  std::span<const double> row(std::size_t k) const {
    return {gamma_.data() + k * groups_.size(), groups_.size()};
  }
  bool deterministic() const { return deterministic_; }
  // For deterministic rows: the single group with probability 1.
  GroupIndex assigned_group(std::size_t k) const;

 private:
  std::vector<std::string> groups_;
  std::vector<double> gamma_;  // n_rows x n_groups, row-major
  bool deterministic_ = false;
};

struct Hypothesis {
  std::string name;
  GroupAssignmentProbabilities gamma;
  std::vector<BeliefMatrix> phis;  // one per group, aligned with gamma.groups()
  // When set, priors are elicited per group from each phi directly even if
  // the group assignments are probabilistic (skipping the mixture step).
  bool naive_elicitation = false;
};

// One concrete assignment of every transition to a group.
struct GroupAssignment {
  std::vector<GroupIndex> assignment;  // length m
  double log_p = 0.0;                  // sum_k log gamma[k][assignment[k]]
};

// Transition counts n_{i,j|g} for a fixed group assignment, stored as sorted
// sparse rows per (group, source state).
class TransitionCounts {
 public:
  TransitionCounts(int n_groups, int n_states) : n_groups_(n_groups), n_states_(n_states) {
    rows_.resize(static_cast<std::size_t>(n_groups));
  }

  int n_groups() const { return n_groups_; }
  int n_states() const { return n_states_; }

  struct Row {
    StateIndex src;
    std::vector<std::pair<StateIndex, std::int64_t>> counts;  // sorted by dst
    std::int64_t total = 0;
  };

  const std::vector<Row>& rows(GroupIndex g) const { return rows_.at(g); }
  std::vector<Row>& rows(GroupIndex g) { return rows_.at(g); }

  std::int64_t count(GroupIndex g, StateIndex i, StateIndex j) const;
  std::int64_t total() const;

 private:
  int n_groups_;
  int n_states_;
  std::vector<std::vector<Row>> rows_;  // per group, rows sorted by src
};

// Counts per (group, source, destination) under assignment w.
// Throws std::invalid_argument when w's length differs from the dataset size.
TransitionCounts transition_counts(const TransitionDataset& d, const GroupAssignment& w);

// The unique assignment induced by deterministic group probabilities.
GroupAssignment induced_assignment(const GroupAssignmentProbabilities& gamma);

// Report-style validation: empty result means h is usable against d.
std::vector<std::string> validate_hypothesis(const Hypothesis& h, const TransitionDataset& d);

}  // namespace mixedtrails

#endif
