#include "mixedtrails/evidence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "mixedtrails/numeric.hpp"
#include "mixedtrails/rng.hpp"

namespace mixedtrails {

namespace {

constexpr std::uint64_t kSampleStream = 0x5A4D504CULL;  // log_ml_sampled substreams

// ln B(counts + alpha) - ln B(alpha) for one (group, source) row.
double log_beta_ratio(const PriorRow& prior, const TransitionCounts::Row& counts, int n_states) {
  double sum_lg = 0.0;
  std::size_t merged = 0;

  auto it = prior.entries.begin();
  for (const auto& [j, c] : counts.counts) {
    while (it != prior.entries.end() && it->first < j) {
      sum_lg += std::lgamma(it->second);  // prior entry without observations
      ++it;
      ++merged;
    }
    double a = prior.implicit_alpha;
    if (it != prior.entries.end() && it->first == j) {
      a = it->second;
      ++it;
    }
    sum_lg += std::lgamma(a + static_cast<double>(c));
    ++merged;
  }
  for (; it != prior.entries.end(); ++it) {
    sum_lg += std::lgamma(it->second);
    ++merged;
  }

  if (prior.implicit_alpha != 1.0) {
    const double n_implicit = static_cast<double>(n_states) - static_cast<double>(merged);
    sum_lg += n_implicit * std::lgamma(prior.implicit_alpha);
  }
  const double alpha_total = static_cast<double>(n_states) + prior.alpha_excess;
  const double log_beta_posterior =
      sum_lg - std::lgamma(alpha_total + static_cast<double>(counts.total));
  return log_beta_posterior - prior.log_beta;
}

void check_gamma_against(const TransitionDataset& d, const GroupAssignmentProbabilities& gamma) {
  if (gamma.n_rows() != d.size())
    throw std::invalid_argument("gamma rows (" + std::to_string(gamma.n_rows()) +
                                ") != transitions (" + std::to_string(d.size()) + ")");
}

TransitionCounts counts_for_sample(const TransitionDataset& d,
                                   const GroupAssignmentProbabilities& gamma,
                                   std::uint64_t seed, std::int64_t sample_index) {
  auto rng = rng::Xoshiro256::substream(seed, kSampleStream,
                                        static_cast<std::uint64_t>(sample_index));
  GroupAssignment w;
  w.assignment.resize(d.size());
  for (std::size_t k = 0; k < d.size(); ++k)
    w.assignment[k] = rng::sample_categorical(rng, gamma.row(k));
  return transition_counts(d, w);
}

void parallel_for(std::int64_t n, int jobs, const std::function<void(std::int64_t)>& body) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = static_cast<int>(std::min<std::int64_t>(jobs, n));
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::closed_form: return "closed-form";
    case Method::enumeration: return "enumeration";
    case Method::sampling: return "sampling";
  }
  return "unknown";
}

const EvidencePoint* EvidenceCurve::at(double kappa) const {
  for (const EvidencePoint& p : points)
    if (p.kappa == kappa) return &p;
  return nullptr;
}

std::int64_t count_assignments(const GroupAssignmentProbabilities& gamma) {
  constexpr std::int64_t kSaturated = std::int64_t{1} << 62;
  std::int64_t total = 1;
  for (std::size_t k = 0; k < gamma.n_rows(); ++k) {
    std::int64_t options = 0;
    for (double v : gamma.row(k))
      if (v > 0.0) ++options;
    if (options == 0) return 0;  // no valid assignment for this transition
    if (total > kSaturated / options) return kSaturated;
    total *= options;
  }
  return total;
}

double log_ml_from_counts(const TransitionCounts& counts, const DirichletPriorSet& priors) {
  if (counts.n_groups() > priors.n_groups())
    throw std::invalid_argument("counts reference more groups than the prior set has");
  double total = 0.0;
  for (GroupIndex g = 0; g < counts.n_groups(); ++g)
    for (const auto& row : counts.rows(g))
      total += log_beta_ratio(priors.row(g, row.src), row, priors.n_states());
  return total;
}

double log_ml_deterministic(const TransitionDataset& d, const DirichletPriorSet& priors,
                            const GroupAssignment& w) {
  return log_ml_from_counts(transition_counts(d, w), priors);
}

double log_ml_enumerate(const TransitionDataset& d, const DirichletPriorSet& priors,
                        const GroupAssignmentProbabilities& gamma, std::int64_t cap) {
  check_gamma_against(d, gamma);
  const std::int64_t n_terms = count_assignments(gamma);
  if (n_terms > cap)
    throw EnumerationTooLarge("instance too large for enumeration (" + std::to_string(n_terms) +
                              " assignments exceed cap " + std::to_string(cap) +
                              "); use sampling");

  const std::size_t m = d.size();
  // per transition: the groups with non-zero probability, with log gamma
  std::vector<std::vector<std::pair<GroupIndex, double>>> options(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto row = gamma.row(k);
    for (std::size_t g = 0; g < row.size(); ++g)
      if (row[g] > 0.0) options[k].emplace_back(static_cast<GroupIndex>(g), std::log(row[g]));
    if (options[k].empty()) return -std::numeric_limits<double>::infinity();
  }

  GroupAssignment w;
  w.assignment.assign(m, 0);
  std::vector<std::size_t> odometer(m, 0);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n_terms));

  for (;;) {
    double log_p = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const auto& [g, lg] = options[k][odometer[k]];
      w.assignment[k] = g;
      log_p += lg;
    }
    terms.push_back(log_p + log_ml_from_counts(transition_counts(d, w), priors));

    // advance odometer (last transition varies fastest)
    std::size_t k = m;
    while (k > 0) {
      --k;
      if (++odometer[k] < options[k].size()) break;
      odometer[k] = 0;
      if (k == 0) return numeric::log_sum_exp(terms);
    }
    if (m == 0) break;
  }
  return numeric::log_sum_exp(terms);  // m == 0: single empty assignment
}

EvidencePoint log_ml_sampled(const TransitionDataset& d, const DirichletPriorSet& priors,
                             const GroupAssignmentProbabilities& gamma,
                             std::int64_t n_samples, std::uint64_t seed) {
  check_gamma_against(d, gamma);
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  std::vector<double> terms(static_cast<std::size_t>(n_samples));
  for (std::int64_t s = 0; s < n_samples; ++s)
    terms[static_cast<std::size_t>(s)] =
        log_ml_from_counts(counts_for_sample(d, gamma, seed, s), priors);
  const auto est = numeric::log_mean_exp_with_se(terms);
  EvidencePoint point;
  point.kappa = priors.kappa();
  point.log_ml = est.log_mean;
  point.std_err = est.std_err;
  point.n_samples = n_samples;
  point.method = Method::sampling;
  return point;
}

EvidenceCurve evidence_curve(const TransitionDataset& d, const Hypothesis& h,
                             const std::vector<double>& kappas, const CurveOptions& opts) {
  check_gamma_against(d, h.gamma);
  for (std::size_t a = 0; a < kappas.size(); ++a) {
    if (!(kappas[a] >= 0.0)) throw std::invalid_argument("kappa values must be non-negative");
    for (std::size_t b = a + 1; b < kappas.size(); ++b)
      if (kappas[a] == kappas[b]) throw std::invalid_argument("kappa values must be distinct");
  }

  EvidenceCurve curve;
  curve.hypothesis = h.name;
  curve.points.reserve(kappas.size());

  if (h.gamma.deterministic()) {
    const TransitionCounts counts = transition_counts(d, induced_assignment(h.gamma));
    for (double kappa : kappas) {
      EvidencePoint p;
      p.kappa = kappa;
      p.log_ml = log_ml_from_counts(counts, elicit_deterministic(h, kappa));
      p.method = Method::closed_form;
      curve.points.push_back(p);
    }
    return curve;
  }

  const std::int64_t n_assignments = count_assignments(h.gamma);
  if (opts.exact_cap > 0 && n_assignments <= opts.exact_cap) {
    for (double kappa : kappas) {
      EvidencePoint p;
      p.kappa = kappa;
      p.log_ml = log_ml_enumerate(d, elicit(h, d, kappa), h.gamma, opts.exact_cap);
      p.method = Method::enumeration;
      curve.points.push_back(p);
    }
    return curve;
  }

  // Sampling with common random numbers: assignments are drawn once from the
  // per-sample substreams and their counts reused at every kappa, so curve
  // shape differences between kappas are not sampling noise.
  if (opts.n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  std::vector<TransitionCounts> sample_counts(
      static_cast<std::size_t>(opts.n_samples), TransitionCounts(0, 0));
  parallel_for(opts.n_samples, opts.jobs, [&](std::int64_t s) {
    sample_counts[static_cast<std::size_t>(s)] = counts_for_sample(d, h.gamma, opts.seed, s);
  });

  std::vector<double> terms(static_cast<std::size_t>(opts.n_samples));
  for (double kappa : kappas) {
    const DirichletPriorSet priors = elicit(h, d, kappa);
    parallel_for(opts.n_samples, opts.jobs, [&](std::int64_t s) {
      terms[static_cast<std::size_t>(s)] =
          log_ml_from_counts(sample_counts[static_cast<std::size_t>(s)], priors);
    });
    const auto est = numeric::log_mean_exp_with_se(terms);
    EvidencePoint p;
    p.kappa = kappa;
    p.log_ml = est.log_mean;
    p.std_err = est.std_err;
    p.n_samples = opts.n_samples;
    p.method = Method::sampling;
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace mixedtrails
