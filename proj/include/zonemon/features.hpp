#pragma once

#include "zonemon/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace zonemon {

struct RecordError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Five decay windows; lambda is the decay rate in 1/ms so that the weight
// of a sample halves after exactly one half-life: 2^(-lambda * dt).
constexpr int kNumWindows = 5;
constexpr std::array<double, kNumWindows> kWindowHalfLifeMs = {100.0, 500.0, 1500.0,
                                                              10000.0, 60000.0};

// Damped incremental 1-D statistics: weight, linear sum and squared sum,
// all decayed by 2^(-lambda*dt) before each insert. Mean and variance
// (population form) derive from the damped sums.
struct DampedStat {
  double w = 0.0;
  double ls = 0.0;
  double ss = 0.0;
  int64_t last_t = 0;
  bool seen = false;

  void decay(double lambda, int64_t t);
  void insert(double x, double lambda, int64_t t);

  double mean() const { return w > 0.0 ? ls / w : 0.0; }
  double var() const;
  double std() const;
};

// Two directional payload streams of one endpoint pair plus a damped
// co-moment between them. Residuals pair each sample with the most recent
// sample of the opposite direction.
struct DampedPairStat {
  DampedStat dir[2];  // 0: low endpoint sends, 1: high endpoint sends
  double sr = 0.0;    // damped sum of residual products
  double wr = 0.0;    // damped count of residual products
  int64_t last_rt = 0;
  double last_res[2] = {0.0, 0.0};
  bool res_valid[2] = {false, false};

  void update(int side, double x, double lambda, int64_t t);

  double covariance() const { return wr > 0.0 ? sr / wr : 0.0; }
  double correlation() const;
  double magnitude() const;
  double radius() const;
};

// 23 statistics per window, in the documented column order.
constexpr int kStatsPerWindow = 23;
static_assert(kNumWindows * kStatsPerWindow == kFeatureDim);

// Keyed stat tables for one monitored stream. Tables grow monotonically
// within a run; there is no eviction.
class StreamAggregations {
 public:
  // Decays and updates every table the record touches, then emits the
  // 115-dimensional snapshot from the record's perspective.
  // Throws RecordError on non-finite payload_size.
  Vec update_and_extract(const TrafficRecord& rec);

  void reset();

  size_t host_count() const { return host_.size(); }
  size_t channel_count() const { return channel_.size(); }

 private:
  struct SocketKey {
    uint64_t ip_pair;
    uint16_t port;
    bool operator==(const SocketKey&) const = default;
  };
  struct SocketKeyHash {
    size_t operator()(const SocketKey& k) const {
      return std::hash<uint64_t>()(k.ip_pair * 0x9E3779B97F4A7C15ull + k.port);
    }
  };
  struct JitterState {
    std::array<DampedStat, kNumWindows> stat;
    int64_t last_arrival = 0;
    bool seen = false;
  };
  using WindowStats = std::array<DampedStat, kNumWindows>;
  using WindowPairStats = std::array<DampedPairStat, kNumWindows>;

  std::unordered_map<std::string, WindowStats> host_mac_;  // src_mac + src_ip
  std::unordered_map<uint32_t, WindowStats> host_;         // src_ip
  std::unordered_map<uint64_t, WindowPairStats> channel_;  // unordered ip pair
  std::unordered_map<SocketKey, WindowPairStats, SocketKeyHash> socket_;
  std::unordered_map<uint64_t, JitterState> jitter_;  // directed src->dst
};

// Published column manifest; order is position-stable across a run.
std::vector<std::string> feature_column_names();

}  // namespace zonemon
