#ifndef MIXEDTRAILS_NUMERIC_HPP
#define MIXEDTRAILS_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace mixedtrails::numeric {

// Pairwise (cascade) summation. Result does not depend on how the caller
// produced the values, only on their order, so parallel producers that fill
// a vector by index get the same sum as a serial run.
inline double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

// log(sum_i exp(args[i])), stable for arguments down to -1e6 and beyond.
// Empty input yields -inf (the log of an empty sum).
inline double log_sum_exp(std::span<const double> args) {
  if (args.empty()) return -std::numeric_limits<double>::infinity();
  const double max_arg = *std::max_element(args.begin(), args.end());
  if (!std::isfinite(max_arg)) return max_arg;
  double sum = 0.0;
  for (double a : args) sum += std::exp(a - max_arg);
  return max_arg + std::log(sum);
}

struct LogMeanExp {
  double log_mean = 0.0;
  double std_err = 0.0;  // delta-method standard error of log_mean
};

// log((1/N) sum_i exp(args[i])) with the delta-method standard error
// se(log m) = sd(x) / (m * sqrt(N)) computed on exp-shifted terms.
inline LogMeanExp log_mean_exp_with_se(std::span<const double> args) {
  LogMeanExp out;
  const std::size_t n = args.size();
  if (n == 0) {
    out.log_mean = -std::numeric_limits<double>::infinity();
    return out;
  }
  const auto [mn, mx] = std::minmax_element(args.begin(), args.end());
  if (*mn == *mx) {  // all terms identical: exact, zero spread
    out.log_mean = *mx;
    out.std_err = 0.0;
    return out;
  }
  const double shift = *mx;
  double sum = 0.0;
  for (double a : args) sum += std::exp(a - shift);
  const double mean = sum / static_cast<double>(n);
  out.log_mean = shift + std::log(mean);
  if (n > 1) {
    double ss = 0.0;
    for (double a : args) {
      const double d = std::exp(a - shift) - mean;
      ss += d * d;
    }
    const double var = ss / static_cast<double>(n - 1);
    out.std_err = std::sqrt(var / static_cast<double>(n)) / mean;
  }
  return out;
}

}  // namespace mixedtrails::numeric

#endif
