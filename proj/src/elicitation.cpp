#include "mixedtrails/elicitation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mixedtrails {

namespace {

void finalize_row(PriorRow& row, int n_states) {
  const double k = static_cast<double>(row.entries.size());
  double excess = (static_cast<double>(n_states) - k) * (row.implicit_alpha - 1.0);
  for (const auto& [j, a] : row.entries) excess += a - 1.0;
  row.alpha_excess = excess;
  row.log_beta = log_multivariate_beta(row.entries, row.implicit_alpha, n_states);
}

// kappa * phi + 1 for one belief row; empty rows spread kappa uniformly.
PriorRow per_group_row(const BeliefMatrix& phi, StateIndex i, double kappa, int n_states) {
  PriorRow row;
  if (phi.row_empty(i)) {
    if (kappa > 0.0) row.implicit_alpha = 1.0 + kappa / static_cast<double>(n_states);
  } else {
    for (const auto& [j, p] : phi.row(i)) {
      const double a = kappa * p + 1.0;
      if (a > 1.0) row.entries.emplace_back(j, a);
    }
  }
  finalize_row(row, n_states);
  return row;
}

void check_kappa(double kappa) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be non-negative");
}

void check_phis(const Hypothesis& h) {
  if (h.phis.size() != static_cast<std::size_t>(h.gamma.n_groups()))
    throw std::invalid_argument("hypothesis '" + h.name + "' has " +
                                std::to_string(h.phis.size()) + " belief matrices for " +
                                std::to_string(h.gamma.n_groups()) + " groups");
}

}  // namespace

DirichletPriorSet::DirichletPriorSet(double kappa, int n_groups, int n_states)
    : kappa_(kappa), n_groups_(n_groups), n_states_(n_states) {
  rows_.resize(static_cast<std::size_t>(n_groups) * n_states);
  for (auto& row : rows_) finalize_row(row, n_states);
}

double DirichletPriorSet::alpha(GroupIndex g, StateIndex i, StateIndex j) const {
  const PriorRow& r = row(g, i);
  auto it = std::lower_bound(r.entries.begin(), r.entries.end(), j,
                             [](const auto& a, StateIndex b) { return a.first < b; });
  if (it != r.entries.end() && it->first == j) return it->second;
  return r.implicit_alpha;
}

double log_multivariate_beta(std::span<const std::pair<StateIndex, double>> entries,
                             double implicit_alpha, int n_states) {
  double sum_lg = 0.0;
  double total = 0.0;
  for (const auto& [j, a] : entries) {
    sum_lg += std::lgamma(a);
    total += a;
  }
  const double n_implicit = static_cast<double>(n_states) - static_cast<double>(entries.size());
  if (implicit_alpha != 1.0) sum_lg += n_implicit * std::lgamma(implicit_alpha);
  total += n_implicit * implicit_alpha;
  return sum_lg - std::lgamma(total);
}

double log_multivariate_beta(const PriorRow& row, int n_states) {
  return log_multivariate_beta(row.entries, row.implicit_alpha, n_states);
}

DirichletPriorSet elicit_deterministic(const Hypothesis& h, double kappa) {
  check_kappa(kappa);
  check_phis(h);
  if (!h.gamma.deterministic() && !h.naive_elicitation)
    throw std::invalid_argument("hypothesis '" + h.name +
                                "' has probabilistic group assignments; use elicit_probabilistic");
  const int n = h.phis.empty() ? 1 : h.phis.front().n_states();
  DirichletPriorSet priors(kappa, h.gamma.n_groups(), n);
  for (GroupIndex g = 0; g < h.gamma.n_groups(); ++g)
    for (StateIndex i = 0; i < n; ++i)
      priors.row(g, i) = per_group_row(h.phis[g], i, kappa, n);
  return priors;
}

DirichletPriorSet elicit_probabilistic(const Hypothesis& h, const TransitionDataset& d,
                                       double kappa) {
  check_kappa(kappa);
  check_phis(h);
  if (h.gamma.deterministic()) return elicit_deterministic(h, kappa);

  const int o = h.gamma.n_groups();
  const int n = d.n_states();
  if (h.gamma.n_rows() != d.size())
    throw std::invalid_argument("gamma rows (" + std::to_string(h.gamma.n_rows()) +
                                ") != transitions (" + std::to_string(d.size()) + ")");

  // Co-assignment mass W[g][g'] = sum_t gamma_{g|t} * gamma_{g'|t}.
  std::vector<double> w(static_cast<std::size_t>(o) * o, 0.0);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto row = h.gamma.row(k);
    for (int g = 0; g < o; ++g) {
      if (row[g] == 0.0) continue;
      for (int g2 = 0; g2 < o; ++g2) w[static_cast<std::size_t>(g) * o + g2] += row[g] * row[g2];
    }
  }

  DirichletPriorSet priors(kappa, o, n);
  std::vector<double> mix(static_cast<std::size_t>(n), 0.0);
  for (GroupIndex g = 0; g < o; ++g) {
    const std::span<const double> wg(w.data() + static_cast<std::size_t>(g) * o,
                                     static_cast<std::size_t>(o));
    double wg_total = 0.0;
    for (double v : wg) wg_total += v;
    if (wg_total == 0.0) {
      // group never receives assignment mass: keep its stated belief
      for (StateIndex i = 0; i < n; ++i) priors.row(g, i) = per_group_row(h.phis[g], i, kappa, n);
      continue;
    }
    for (StateIndex i = 0; i < n; ++i) {
      // explicit blend over stated rows plus a uniform base from empty rows
      double base = 0.0;
      std::vector<StateIndex> touched;
      for (int g2 = 0; g2 < o; ++g2) {
        const double wgg = wg[g2];
        if (wgg == 0.0) continue;
        const BeliefMatrix& phi = h.phis[g2];
        if (phi.row_empty(i)) {
          base += wgg / static_cast<double>(n);
          continue;
        }
        for (const auto& [j, p] : phi.row(i)) {
          if (mix[j] == 0.0) touched.push_back(j);
          mix[j] += wgg * p;
        }
      }
      double z = base * static_cast<double>(n);
      for (StateIndex j : touched) z += mix[j];

      PriorRow out;
      if (z > 0.0) {
        std::sort(touched.begin(), touched.end());
        out.implicit_alpha = base > 0.0 ? 1.0 + kappa * base / z : 1.0;
        for (StateIndex j : touched) {
          const double a = 1.0 + kappa * (mix[j] + base) / z;
          if (a > out.implicit_alpha) out.entries.emplace_back(j, a);
          mix[j] = 0.0;
        }
        finalize_row(out, n);
      } else {
        for (StateIndex j : touched) mix[j] = 0.0;
        out = per_group_row(h.phis[g], i, kappa, n);
      }
      priors.row(g, i) = std::move(out);
    }
  }
  return priors;
}

DirichletPriorSet elicit(const Hypothesis& h, const TransitionDataset& d, double kappa) {
  if (h.gamma.deterministic() || h.naive_elicitation) return elicit_deterministic(h, kappa);
  return elicit_probabilistic(h, d, kappa);
}

}  // namespace mixedtrails
