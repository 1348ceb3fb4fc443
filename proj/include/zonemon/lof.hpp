#pragma once

#include "zonemon/types.hpp"

#include <optional>
#include <vector>

namespace zonemon {

// Local outlier factor against a fixed benign reference set. Reference
// neighborhoods, k-distances and local reachability densities are
// precomputed at fit time; queries score points not in the set.
struct LofModel {
  Mat reference;  // rows are points
  int k = 20;
  std::vector<std::vector<int>> neighbors;  // kNN of each reference point
  std::vector<double> k_distance;
  std::vector<double> lrd;
  std::optional<double> threshold;
};

// Throws ConfigError unless 1 <= k < |reference|.
LofModel lof_fit(const Mat& reference, int k);

// Ratio of the average neighbor lrd to the query's own lrd; > 0, and 1
// in uniform-density neighborhoods. Fully deterministic.
double lof_score(const LofModel& model, const Vec& x);

}  // namespace zonemon
