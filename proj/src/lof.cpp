#include "zonemon/lof.hpp"

#include <algorithm>
#include <cmath>

namespace zonemon {

namespace {

// Keeps lrd finite on zero-distance neighborhoods; duplicated points then
// score exactly 1. Independent reimplementations must use the same value.
constexpr double kLrdEpsilon = 1e-10;

std::vector<std::pair<double, int>> sorted_distances(const Mat& ref, const Vec& x,
                                                     int exclude) {
  std::vector<std::pair<double, int>> d;
  d.reserve(static_cast<size_t>(ref.rows()));
  for (int j = 0; j < ref.rows(); ++j) {
    if (j == exclude) continue;
    d.emplace_back((ref.row(j).transpose() - x).norm(), j);
  }
  std::sort(d.begin(), d.end());  // ties break by index for determinism
  return d;
}

}  // namespace

LofModel lof_fit(const Mat& reference, int k) {
  const int n = static_cast<int>(reference.rows());
  if (k < 1) throw ConfigError("LOF needs k >= 1");
  if (k >= n) throw ConfigError("LOF needs k < reference size");

  LofModel m;
  m.reference = reference;
  m.k = k;
  m.neighbors.resize(static_cast<size_t>(n));
  m.k_distance.resize(static_cast<size_t>(n));
  m.lrd.resize(static_cast<size_t>(n));

  for (int i = 0; i < n; ++i) {
    const auto d = sorted_distances(reference, reference.row(i).transpose(), i);
    auto& nb = m.neighbors[static_cast<size_t>(i)];
    nb.reserve(static_cast<size_t>(k));
    for (int r = 0; r < k; ++r) nb.push_back(d[static_cast<size_t>(r)].second);
    m.k_distance[static_cast<size_t>(i)] = d[static_cast<size_t>(k - 1)].first;
  }
  for (int i = 0; i < n; ++i) {
    double reach_sum = 0.0;
    for (int o : m.neighbors[static_cast<size_t>(i)]) {
      const double dist =
          (m.reference.row(o) - m.reference.row(i)).norm();
      reach_sum += std::max(m.k_distance[static_cast<size_t>(o)], dist);
    }
    m.lrd[static_cast<size_t>(i)] =
        1.0 / (reach_sum / static_cast<double>(k) + kLrdEpsilon);
  }
  return m;
}

double lof_score(const LofModel& model, const Vec& x) {
  if (model.reference.rows() == 0) throw ConfigError("LOF model is untrained");
  const int k = model.k;
  auto d = sorted_distances(model.reference, x, -1);

  double reach_sum = 0.0;
  double lrd_sum = 0.0;
  for (int r = 0; r < k; ++r) {
    const auto& [dist, o] = d[static_cast<size_t>(r)];
    reach_sum += std::max(model.k_distance[static_cast<size_t>(o)], dist);
    lrd_sum += model.lrd[static_cast<size_t>(o)];
  }
  const double lrd_x = 1.0 / (reach_sum / static_cast<double>(k) + kLrdEpsilon);
  return (lrd_sum / static_cast<double>(k)) / lrd_x;
}

}  // namespace zonemon
