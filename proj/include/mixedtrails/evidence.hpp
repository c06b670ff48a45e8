#ifndef MIXEDTRAILS_EVIDENCE_HPP
#define MIXEDTRAILS_EVIDENCE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixedtrails/core.hpp"
#include "mixedtrails/elicitation.hpp"

namespace mixedtrails {

enum class Method { closed_form, enumeration, sampling };

const char* method_name(Method m);

struct EvidencePoint {
  double kappa = 0.0;
  double log_ml = 0.0;                 // natural log marginal likelihood
  std::optional<double> std_err;       // present iff sampled
  std::optional<std::int64_t> n_samples;
  Method method = Method::closed_form;
};

struct EvidenceCurve {
  std::string hypothesis;
  std::vector<EvidencePoint> points;  // one per kappa, in request order

  const EvidencePoint* at(double kappa) const;
};

// Thrown by log_ml_enumerate when the assignment space exceeds the cap.
struct EnumerationTooLarge : std::runtime_error {
  explicit EnumerationTooLarge(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::int64_t kDefaultEnumerationCap = std::int64_t{1} << 20;

// Number of group assignments with non-zero probability, saturating at
// 2^62 to keep cap comparisons safe.
std::int64_t count_assignments(const GroupAssignmentProbabilities& gamma);

// log Pr(D | alpha, omega) = sum_g sum_i [ln B(n_{i.|g,w} + a_{i.|g}) - ln B(a_{i.|g})].
double log_ml_deterministic(const TransitionDataset& d, const DirichletPriorSet& priors,
                            const GroupAssignment& w);
double log_ml_from_counts(const TransitionCounts& counts, const DirichletPriorSet& priors);

// Exact log marginal likelihood: log sum over all non-zero-probability
// assignments of p_w * Pr(D | alpha, w), via log-sum-exp.
double log_ml_enumerate(const TransitionDataset& d, const DirichletPriorSet& priors,
                        const GroupAssignmentProbabilities& gamma,
                        std::int64_t cap = kDefaultEnumerationCap);

// Direct-sampling estimate: mean of Pr(D | alpha, w) over assignments drawn
// from the per-transition group distributions. Reproducible for a fixed
// seed; sample s uses the RNG substream (seed, sample-stream, s).
EvidencePoint log_ml_sampled(const TransitionDataset& d, const DirichletPriorSet& priors,
                             const GroupAssignmentProbabilities& gamma,
                             std::int64_t n_samples, std::uint64_t seed);

struct CurveOptions {
  std::int64_t n_samples = 50;
  std::uint64_t seed = 0;
  // When > 0, probabilistic hypotheses are enumerated exactly whenever the
  // assignment space has at most this many elements.
  std::int64_t exact_cap = 0;
  int jobs = 1;  // worker threads for the per-sample loop
};

// One evidence point per kappa. Deterministic hypotheses use the closed
// form; probabilistic ones are enumerated under opts.exact_cap or sampled
// with common random numbers (the same assignments reused at every kappa).
EvidenceCurve evidence_curve(const TransitionDataset& d, const Hypothesis& h,
                             const std::vector<double>& kappas, const CurveOptions& opts);

}  // namespace mixedtrails

#endif
