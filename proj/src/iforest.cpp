#include "zonemon/iforest.hpp"

#include "zonemon/rng.hpp"

#include <cmath>

namespace zonemon {

double average_path_length(int n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  constexpr double kEulerGamma = 0.5772156649015329;
  const double dn = static_cast<double>(n);
  return 2.0 * (std::log(dn - 1.0) + kEulerGamma) - 2.0 * (dn - 1.0) / dn;
}

int iforest_height_limit(int psi) {
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(psi))));
}

namespace {

int build_node(IsolationTree& tree, const Mat& data, std::vector<int>& idx, int lo, int hi,
               int depth, int limit, Rng& rng) {
  const int node_id = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(IsoNode{});
  tree.nodes[node_id].size = hi - lo;

  if (hi - lo <= 1 || depth >= limit) return node_id;

  // pick among features that actually vary in this node
  const int dim = static_cast<int>(data.cols());
  int feature = -1;
  double lo_v = 0.0, hi_v = 0.0;
  const int first_try = static_cast<int>(rng.below(static_cast<uint32_t>(dim)));
  for (int probe = 0; probe < dim; ++probe) {
    const int f = (first_try + probe) % dim;
    double mn = data(idx[lo], f), mx = mn;
    for (int i = lo + 1; i < hi; ++i) {
      const double v = data(idx[i], f);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    if (mx > mn) {
      feature = f;
      lo_v = mn;
      hi_v = mx;
      break;
    }
  }
  if (feature < 0) return node_id;  // all points identical here

  const double split = rng.uniform(lo_v, hi_v);
  int mid = lo;
  for (int i = lo; i < hi; ++i)
    if (data(idx[i], feature) < split) std::swap(idx[i], idx[mid++]);
  if (mid == lo || mid == hi) return node_id;  // degenerate split

  tree.nodes[node_id].feature = feature;
  tree.nodes[node_id].split = split;
  const int left = build_node(tree, data, idx, lo, mid, depth + 1, limit, rng);
  const int right = build_node(tree, data, idx, mid, hi, depth + 1, limit, rng);
  tree.nodes[node_id].left = left;
  tree.nodes[node_id].right = right;
  return node_id;
}

}  // namespace

IsolationForestModel iforest_train(const Mat& t_ds, int psi, int n_trees, uint64_t seed) {
  const int n = static_cast<int>(t_ds.rows());
  if (psi < 2) throw ConfigError("isolation forest needs subsample size psi >= 2");
  if (psi > n) throw ConfigError("psi exceeds training set size");
  if (n_trees < 1) throw ConfigError("need at least one tree");

  IsolationForestModel model;
  model.psi = psi;
  model.trees.reserve(static_cast<size_t>(n_trees));

  Rng rng(seed);
  std::vector<int> all(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;
  const int limit = iforest_height_limit(psi);

  for (int t = 0; t < n_trees; ++t) {
    // partial Fisher-Yates: first psi entries form the subsample
    for (int i = 0; i < psi; ++i) {
      const int j = i + static_cast<int>(rng.below(static_cast<uint32_t>(n - i)));
      std::swap(all[static_cast<size_t>(i)], all[static_cast<size_t>(j)]);
    }
    std::vector<int> idx(all.begin(), all.begin() + psi);
    IsolationTree tree;
    build_node(tree, t_ds, idx, 0, psi, 0, limit, rng);
    model.trees.push_back(std::move(tree));
  }
  return model;
}

double iforest_score(const IsolationForestModel& model, const Vec& x) {
  if (model.trees.empty()) throw ConfigError("isolation forest is untrained");
  double total = 0.0;
  for (const IsolationTree& tree : model.trees) {
    int node = 0;
    int depth = 0;
    while (tree.nodes[static_cast<size_t>(node)].feature >= 0) {
      const IsoNode& nd = tree.nodes[static_cast<size_t>(node)];
      node = x[nd.feature] < nd.split ? nd.left : nd.right;
      ++depth;
    }
    total += depth + average_path_length(tree.nodes[static_cast<size_t>(node)].size);
  }
  const double mean_path = total / static_cast<double>(model.trees.size());
  return std::exp2(-mean_path / average_path_length(model.psi));
}

}  // namespace zonemon
