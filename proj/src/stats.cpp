#include "zonemon/stats.hpp"

#include "zonemon/types.hpp"

#include <cmath>

namespace zonemon {

double sample_mean(std::span<const double> scores) {
  if (scores.empty()) throw ConfigError("mean of empty score set");
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

double sample_std(std::span<const double> scores) {
  const size_t n = scores.size();
  if (n == 0) throw ConfigError("std of empty score set");
  if (n == 1) return 0.0;
  const double mu = sample_mean(scores);
  double acc = 0.0;
  for (double s : scores) acc += (s - mu) * (s - mu);
  return std::sqrt(acc / static_cast<double>(n - 1));
}

double mean_plus_sample_std(std::span<const double> scores) {
  return sample_mean(scores) + sample_std(scores);
}

}  // namespace zonemon
