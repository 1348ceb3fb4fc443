#pragma once

#include "zonemon/types.hpp"

#include <optional>
#include <vector>

namespace zonemon {

// Isolation tree stored as an index-linked node pool. A node with
// feature < 0 is external; `size` is the number of subsample points that
// reached it.
struct IsoNode {
  int feature = -1;
  double split = 0.0;
  int left = -1;
  int right = -1;
  int size = 0;
};

struct IsolationTree {
  std::vector<IsoNode> nodes;  // nodes[0] is the root
};

struct IsolationForestModel {
  std::vector<IsolationTree> trees;
  int psi = 256;  // subsample size
  std::optional<double> threshold;
};

// Average path length of an unsuccessful BST search over n points; the
// standard normalizer c(n).
double average_path_length(int n);

// n_trees trees over independent subsamples of size psi (without
// replacement). Deterministic per seed.
// Throws ConfigError when psi > |t_ds| or psi < 2.
IsolationForestModel iforest_train(const Mat& t_ds, int psi, int n_trees, uint64_t seed);

// s(x) = 2^(-E[h(x)] / c(psi)), strictly inside (0, 1); higher is more
// anomalous.
double iforest_score(const IsolationForestModel& model, const Vec& x);

// Depth limit used while building: ceil(log2 psi).
int iforest_height_limit(int psi);

}  // namespace zonemon
