#ifndef MIXEDTRAILS_ELICITATION_HPP
#define MIXEDTRAILS_ELICITATION_HPP

#include <span>
#include <utility>
#include <vector>

#include "mixedtrails/core.hpp"

namespace mixedtrails {

// One Dirichlet parameter row over the n destination states. Destinations
// absent from `entries` carry implicit_alpha. For rows elicited from an
// explicit belief row the implicit value is exactly 1; rows with a uniform
// component (empty belief rows, or mixtures involving them) spread part of
// the pseudo-count mass over all destinations via implicit_alpha > 1.
struct PriorRow {
  std::vector<std::pair<StateIndex, double>> entries;  // sorted by dst, alpha > implicit
  double implicit_alpha = 1.0;
  double alpha_excess = 0.0;  // sum_j (alpha_j - 1) over all n destinations
  double log_beta = 0.0;      // ln B(alpha row), cached
};

// Elicited hyperparameters alpha_{i,j|g} for every (group, source state).
class DirichletPriorSet {
 public:
  DirichletPriorSet(double kappa, int n_groups, int n_states);

  double kappa() const { return kappa_; }
  int n_groups() const { return n_groups_; }
  int n_states() const { return n_states_; }

  const PriorRow& row(GroupIndex g, StateIndex i) const {
    return rows_[static_cast<std::size_t>(g) * n_states_ + i];
  }
  PriorRow& row(GroupIndex g, StateIndex i) {
    return rows_[static_cast<std::size_t>(g) * n_states_ + i];
  }

  // alpha_{i,j|g} including implicit destinations.
  double alpha(GroupIndex g, StateIndex i, StateIndex j) const;

 private:
  double kappa_;
  int n_groups_;
  int n_states_;
  std::vector<PriorRow> rows_;
};

// ln B(alpha) = sum_j lgamma(alpha_j) - lgamma(sum_j alpha_j) for a sparse
// row over n_states destinations; absent entries carry implicit_alpha.
double log_multivariate_beta(std::span<const std::pair<StateIndex, double>> entries,
                             double implicit_alpha, int n_states);
double log_multivariate_beta(const PriorRow& row, int n_states);

// alpha_{i,j|g} = kappa * phi_{i,j|g} + 1, per group. Requires deterministic
// group assignments (or the naive-elicitation flag, which requests exactly
// this bypass for probabilistic assignments).
DirichletPriorSet elicit_deterministic(const Hypothesis& h, double kappa);

// Mixture elicitation for probabilistic group assignments: each group's
// pseudo-counts are a normalized blend of all groups' beliefs, weighted by
// the co-assignment mass sum_t gamma_{g|t} * gamma_{g'|t}. Groups with zero
// assignment mass fall back to their own belief rows. Deterministic
// assignments reduce to elicit_deterministic exactly.
DirichletPriorSet elicit_probabilistic(const Hypothesis& h, const TransitionDataset& d,
                                       double kappa);

// Dispatch: deterministic or naive hypotheses use the per-group rule,
// anything else the mixture rule.
DirichletPriorSet elicit(const Hypothesis& h, const TransitionDataset& d, double kappa);

}  // namespace mixedtrails

#endif
