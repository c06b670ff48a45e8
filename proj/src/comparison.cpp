#include "mixedtrails/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mixedtrails {

const char* significance_label_name(SignificanceLabel label) {
  switch (label) {
    case SignificanceLabel::barely_worth_mentioning: return "barely-worth-mentioning";
    case SignificanceLabel::positive: return "positive";
    case SignificanceLabel::strong: return "strong";
    case SignificanceLabel::decisive: return "decisive";
  }
  return "unknown";
}

SignificanceLabel significance_label(double two_ln_bf) {
  const double v = std::abs(two_ln_bf);
  if (v > 10.0) return SignificanceLabel::decisive;
  if (v > 6.0) return SignificanceLabel::strong;
  if (v > 2.0) return SignificanceLabel::positive;
  return SignificanceLabel::barely_worth_mentioning;
}

namespace {

const EvidencePoint& point_at(const EvidenceCurve& curve, double kappa) {
  const EvidencePoint* p = curve.at(kappa);
  if (p == nullptr)
    throw std::invalid_argument("curve '" + curve.hypothesis + "' has no point at kappa=" +
                                std::to_string(kappa));
  return *p;
}

}  // namespace

ComparisonResult bayes_factor(const EvidenceCurve& curve_a, const EvidenceCurve& curve_b,
                              double kappa) {
  const EvidencePoint& a = point_at(curve_a, kappa);
  const EvidencePoint& b = point_at(curve_b, kappa);

  ComparisonResult r;
  r.kappa = kappa;
  r.hypothesis_a = curve_a.hypothesis;
  r.hypothesis_b = curve_b.hypothesis;
  r.log_bayes_factor = a.log_ml - b.log_ml;
  r.two_ln_bf = 2.0 * r.log_bayes_factor;
  r.label = significance_label(r.two_ln_bf);
  r.decisive_by_paper_rule = std::abs(r.log_bayes_factor) > 10.0;
  if (a.std_err || b.std_err) {
    const double sa = a.std_err.value_or(0.0);
    const double sb = b.std_err.value_or(0.0);
    r.std_err = std::sqrt(sa * sa + sb * sb);
  }
  return r;
}

Ranking rank_hypotheses(const std::vector<EvidenceCurve>& curves, double kappa) {
  if (curves.empty()) throw std::invalid_argument("rank_hypotheses: no curves given");

  Ranking ranking;
  ranking.kappa = kappa;
  for (const EvidenceCurve& curve : curves) {
    const EvidencePoint& p = point_at(curve, kappa);
    ranking.entries.push_back({curve.hypothesis, p.log_ml, p.std_err});
  }
  std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                   [](const RankEntry& a, const RankEntry& b) { return a.log_ml > b.log_ml; });

  for (std::size_t i = 0; i + 1 < ranking.entries.size(); ++i) {
    const RankEntry& hi = ranking.entries[i];
    const RankEntry& lo = ranking.entries[i + 1];
    RankGap gap;
    gap.gap = hi.log_ml - lo.log_ml;
    gap.decisive = gap.gap > 10.0;
    const double sa = hi.std_err.value_or(0.0);
    const double sb = lo.std_err.value_or(0.0);
    const double combined = std::sqrt(sa * sa + sb * sb);
    gap.incomparable = combined > 0.0 && gap.gap < 3.0 * combined;
    ranking.gaps.push_back(gap);
  }
  return ranking;
}

double mean_log_ml(const EvidenceCurve& curve) {
  if (curve.points.empty()) throw std::invalid_argument("mean_log_ml: empty curve");
  double sum = 0.0;
  for (const EvidencePoint& p : curve.points) sum += p.log_ml;
  return sum / static_cast<double>(curve.points.size());
}

}  // namespace mixedtrails
