#ifndef MIXEDTRAILS_COMPARISON_HPP
#define MIXEDTRAILS_COMPARISON_HPP

#include <optional>
#include <string>
#include <vector>

#include "mixedtrails/evidence.hpp"

namespace mixedtrails {

// Kass-Raftery strength-of-evidence bands on |2 ln B|; a band is entered
// strictly above its threshold, so |2 ln B| = 10 is still "strong".
enum class SignificanceLabel { barely_worth_mentioning, positive, strong, decisive };

const char* significance_label_name(SignificanceLabel label);
SignificanceLabel significance_label(double two_ln_bf);

struct ComparisonResult {
  double kappa = 0.0;
  std::string hypothesis_a;
  std::string hypothesis_b;
  double log_bayes_factor = 0.0;  // log ML_a - log ML_b
  double two_ln_bf = 0.0;
  SignificanceLabel label = SignificanceLabel::barely_worth_mentioning;
  // |log ML_a - log ML_b| > 10, the raw-gap decisiveness rule applied to
  // marginal-likelihood curves.
  bool decisive_by_paper_rule = false;
  std::optional<double> std_err;  // combined, when either curve is sampled
};

// Requires both curves to contain kappa; throws std::invalid_argument otherwise.
ComparisonResult bayes_factor(const EvidenceCurve& curve_a, const EvidenceCurve& curve_b,
                              double kappa);

struct RankEntry {
  std::string hypothesis;
  double log_ml = 0.0;
  std::optional<double> std_err;
};

// Relation between an entry and the next-ranked one.
struct RankGap {
  double gap = 0.0;            // log ML difference to the next entry
  bool decisive = false;       // gap > 10
  bool incomparable = false;   // gap < 3 * combined std_err
};

struct Ranking {
  double kappa = 0.0;
  std::vector<RankEntry> entries;  // descending by log ML
  std::vector<RankGap> gaps;       // size entries.size() - 1
};

Ranking rank_hypotheses(const std::vector<EvidenceCurve>& curves, double kappa);

// Equal-weight average of log ML over the curve's kappa grid; a single-number
// convenience summary (equivalent to treating the grid values as equally
// likely kappa settings).
double mean_log_ml(const EvidenceCurve& curve);

}  // namespace mixedtrails

#endif
