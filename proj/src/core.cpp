#include "mixedtrails/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace mixedtrails {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

StateSpace::StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw std::invalid_argument("state space must contain at least one state");
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw std::invalid_argument("state labels must be non-empty");
    auto [it, inserted] = index_.emplace(labels_[i], static_cast<StateIndex>(i));
    if (!inserted) throw std::invalid_argument("duplicate state label: " + labels_[i]);
  }
}

std::optional<StateIndex> StateSpace::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TransitionDataset::TransitionDataset(StateSpace space, std::vector<Transition> transitions,
                                     std::vector<std::string> sequence_labels)
    : space_(std::move(space)),
      transitions_(std::move(transitions)),
      sequence_labels_(std::move(sequence_labels)) {
  const auto n = static_cast<StateIndex>(space_.size());
  const auto n_seq = static_cast<std::int32_t>(sequence_labels_.size());
  std::vector<std::vector<std::int32_t>> positions(sequence_labels_.size());
  for (std::size_t k = 0; k < transitions_.size(); ++k) {
    const Transition& t = transitions_[k];
    if (t.src < 0 || t.src >= n || t.dst < 0 || t.dst >= n)
      throw std::invalid_argument("transition " + std::to_string(k) + " references an unknown state index");
    if (t.seq >= n_seq)
      throw std::invalid_argument("transition " + std::to_string(k) + " references an unknown sequence");
    if (t.seq >= 0 && t.pos >= 0) positions[t.seq].push_back(t.pos);
  }
  // Within one sequence, positions must be unique and contiguous from 0.
  for (std::size_t s = 0; s < positions.size(); ++s) {
    auto& pos = positions[s];
    std::sort(pos.begin(), pos.end());
    for (std::size_t p = 0; p < pos.size(); ++p) {
      if (pos[p] != static_cast<std::int32_t>(p))
        throw std::invalid_argument("sequence '" + sequence_labels_[s] +
                                    "' has non-contiguous or duplicate positions");
    }
  }
}

void TransitionDataset::add_metadata_column(std::string name, std::vector<std::string> values) {
  if (values.size() != transitions_.size())
    throw std::invalid_argument("metadata column '" + name + "' has " +
                                std::to_string(values.size()) + " values, expected " +
                                std::to_string(transitions_.size()));
  if (metadata_column(name) != nullptr)
    throw std::invalid_argument("duplicate metadata column '" + name + "'");
  meta_names_.push_back(std::move(name));
  meta_columns_.push_back(std::move(values));
}

const std::vector<std::string>* TransitionDataset::metadata_column(std::string_view name) const {
  for (std::size_t i = 0; i < meta_names_.size(); ++i) {
    if (meta_names_[i] == name) return &meta_columns_[i];
  }
  return nullptr;
}

BeliefMatrix::BeliefMatrix(std::string group_label, int n_states)
    : label_(std::move(group_label)) {
  if (n_states < 1) throw std::invalid_argument("belief matrix needs at least one state");
  rows_.resize(static_cast<std::size_t>(n_states));
}

void BeliefMatrix::add_weight(StateIndex src, StateIndex dst, double weight) {
  rows_.at(src).emplace_back(dst, weight);
  normalized_ = false;
}

void BeliefMatrix::normalize() {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    auto& row = rows_[i];
    if (row.empty()) continue;
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // merge duplicate destinations
    std::vector<std::pair<StateIndex, double>> merged;
    merged.reserve(row.size());
    for (const auto& [j, w] : row) {
      if (!merged.empty() && merged.back().first == j)
        merged.back().second += w;
      else
        merged.emplace_back(j, w);
    }
    double sum = 0.0;
    for (const auto& [j, w] : merged) {
      if (!(w > 0.0))
        throw std::invalid_argument("belief matrix '" + label_ + "' row " + std::to_string(i) +
                                    " has a non-positive weight");
      sum += w;
    }
    for (auto& [j, w] : merged) w /= sum;
    row = std::move(merged);
  }
  normalized_ = true;
}

GroupAssignmentProbabilities::GroupAssignmentProbabilities(std::vector<std::string> groups,
                                                           std::vector<double> gamma_row_major)
    : groups_(std::move(groups)), gamma_(std::move(gamma_row_major)) {
  if (groups_.empty()) throw std::invalid_argument("at least one group is required");
  if (gamma_.size() % groups_.size() != 0)
    throw std::invalid_argument("gamma matrix size is not a multiple of the group count");
  deterministic_ = true;
  for (double& v : gamma_) {
    if (std::abs(v) <= kDeterministicSnapTol)
      v = 0.0;
    else if (std::abs(v - 1.0) <= kDeterministicSnapTol)
      v = 1.0;
    if (v != 0.0 && v != 1.0) deterministic_ = false;
  }
}

GroupIndex GroupAssignmentProbabilities::assigned_group(std::size_t k) const {
  const auto r = row(k);
  for (std::size_t g = 0; g < r.size(); ++g) {
    if (r[g] == 1.0) return static_cast<GroupIndex>(g);
  }
  throw std::logic_error("assigned_group called on a non-deterministic row");
}

std::int64_t TransitionCounts::count(GroupIndex g, StateIndex i, StateIndex j) const {
  for (const Row& row : rows_.at(g)) {
    if (row.src != i) continue;
    auto it = std::lower_bound(row.counts.begin(), row.counts.end(), j,
                               [](const auto& a, StateIndex b) { return a.first < b; });
    if (it != row.counts.end() && it->first == j) return it->second;
    return 0;
  }
  return 0;
}

std::int64_t TransitionCounts::total() const {
  std::int64_t t = 0;
  for (const auto& group_rows : rows_)
    for (const Row& row : group_rows) t += row.total;
  return t;
}

TransitionCounts transition_counts(const TransitionDataset& d, const GroupAssignment& w) {
  if (w.assignment.size() != d.size())
    throw std::invalid_argument("group assignment length (" + std::to_string(w.assignment.size()) +
                                ") does not match transition count (" + std::to_string(d.size()) + ")");
  GroupIndex n_groups = 0;
  for (GroupIndex g : w.assignment) {
    if (g < 0) throw std::invalid_argument("group assignment contains a negative group index");
    n_groups = std::max(n_groups, static_cast<GroupIndex>(g + 1));
  }
  if (n_groups == 0) n_groups = 1;

  if (d.n_states() >= (1 << 24) || n_groups >= (1 << 16))
    throw std::invalid_argument("transition_counts supports up to 2^24 states and 2^16 groups");

  TransitionCounts counts(n_groups, d.n_states());
  // pack (g, src, dst) and sort; run lengths become the counts
  std::vector<std::uint64_t> keys;
  keys.reserve(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Transition& t = d.transition(k);
    keys.push_back((static_cast<std::uint64_t>(w.assignment[k]) << 48) |
                   (static_cast<std::uint64_t>(t.src) << 24) |
                   static_cast<std::uint64_t>(t.dst));
  }
  std::sort(keys.begin(), keys.end());
  for (std::size_t k = 0; k < keys.size();) {
    std::size_t e = k;
    while (e < keys.size() && keys[e] == keys[k]) ++e;
    const auto g = static_cast<GroupIndex>(keys[k] >> 48);
    const auto i = static_cast<StateIndex>((keys[k] >> 24) & 0xFFFFFF);
    const auto j = static_cast<StateIndex>(keys[k] & 0xFFFFFF);
    auto& rows = counts.rows(g);
    if (rows.empty() || rows.back().src != i) rows.push_back({i, {}, 0});
    rows.back().counts.emplace_back(j, static_cast<std::int64_t>(e - k));
    rows.back().total += static_cast<std::int64_t>(e - k);
    k = e;
  }
  return counts;
}

GroupAssignment induced_assignment(const GroupAssignmentProbabilities& gamma) {
  if (!gamma.deterministic())
    throw std::invalid_argument("induced_assignment requires deterministic group probabilities");
  GroupAssignment w;
  w.assignment.reserve(gamma.n_rows());
  for (std::size_t k = 0; k < gamma.n_rows(); ++k)
    w.assignment.push_back(gamma.assigned_group(k));
  w.log_p = 0.0;
  return w;
}

std::vector<std::string> validate_hypothesis(const Hypothesis& h, const TransitionDataset& d) {
  std::vector<std::string> report;
  const auto o = static_cast<std::size_t>(h.gamma.n_groups());

  if (h.phis.size() != o)
    report.push_back("hypothesis has " + std::to_string(o) + " groups but " +
                     std::to_string(h.phis.size()) + " belief matrices");

  if (h.gamma.n_rows() != d.size())
    report.push_back("gamma rows (" + std::to_string(h.gamma.n_rows()) + ") != transitions (" +
                     std::to_string(d.size()) + ")");

  const std::size_t rows_to_check = std::min(h.gamma.n_rows(), d.size());
  for (std::size_t k = 0; k < rows_to_check; ++k) {
    const auto row = h.gamma.row(k);
    double sum = 0.0;
    bool negative = false;
    for (double v : row) {
      if (v < 0.0) negative = true;
      sum += v;
    }
    if (negative) report.push_back("gamma row " + std::to_string(k) + " has a negative entry");
    if (std::abs(sum - 1.0) > kGammaRowSumTol)
      report.push_back("gamma row " + std::to_string(k) + " sums to " + format_double(sum));
  }

  for (std::size_t g = 0; g < h.phis.size(); ++g) {
    const BeliefMatrix& phi = h.phis[g];
    if (phi.n_states() != d.n_states()) {
      report.push_back("belief matrix '" + phi.label() + "' has " + std::to_string(phi.n_states()) +
                       " rows, dataset has " + std::to_string(d.n_states()) + " states");
      continue;
    }
    for (StateIndex i = 0; i < phi.n_states(); ++i) {
      const auto row = phi.row(i);
      if (row.empty()) continue;  // uniform semantics
      double sum = 0.0;
      for (const auto& [j, w] : row) {
        sum += w;
        if (!(w > 0.0))
          report.push_back("belief matrix '" + phi.label() + "' row " + std::to_string(i) +
                           " has a non-positive entry");
      }
      if (std::abs(sum - 1.0) > kPhiRowSumTol)
        report.push_back("belief matrix '" + phi.label() + "' row " + std::to_string(i) +
                         " sums to " + format_double(sum));
    }
  }
  return report;
}

}  // namespace mixedtrails
