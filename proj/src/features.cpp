#include "zonemon/features.hpp"

#include <algorithm>
#include <cmath>

namespace zonemon {

void DampedStat::decay(double lambda, int64_t t) {
  if (!seen) {
    last_t = t;
    seen = true;
    return;
  }
  const int64_t dt = std::max<int64_t>(0, t - last_t);
  if (dt > 0) {
    const double g = std::exp2(-lambda * static_cast<double>(dt));
    w *= g;
    ls *= g;
    ss *= g;
  }
  last_t = t;
}

void DampedStat::insert(double x, double lambda, int64_t t) {
  decay(lambda, t);
  w += 1.0;
  ls += x;
  ss += x * x;
}

double DampedStat::var() const {
  if (w <= 0.0) return 0.0;
  const double m = ls / w;
  return std::max(0.0, ss / w - m * m);
}

double DampedStat::std() const { return std::sqrt(var()); }

void DampedPairStat::update(int side, double x, double lambda, int64_t t) {
  DampedStat& self = dir[side];
  const int other = 1 - side;
  self.insert(x, lambda, t);
  const double res = x - self.mean();
  if (res_valid[other]) {
    if (wr > 0.0) {
      const int64_t dt = std::max<int64_t>(0, t - last_rt);
      const double g = std::exp2(-lambda * static_cast<double>(dt));
      sr *= g;
      wr *= g;
    }
    sr += res * last_res[other];
    wr += 1.0;
    last_rt = t;
  }
  last_res[side] = res;
  res_valid[side] = true;
}

double DampedPairStat::correlation() const {
  if (wr <= 0.0) return 0.0;
  const double sa = dir[0].std();
  const double sb = dir[1].std();
  if (sa <= 0.0 || sb <= 0.0) return 0.0;  // zero variance on either side
  return std::clamp(covariance() / (sa * sb), -1.0, 1.0);
}

double DampedPairStat::magnitude() const {
  const double ma = dir[0].mean();
  const double mb = dir[1].mean();
  return std::sqrt(ma * ma + mb * mb);
}

double DampedPairStat::radius() const {
  const double va = dir[0].var();
  const double vb = dir[1].var();
  return std::sqrt(va * va + vb * vb);
}

static uint64_t ip_pair_key(uint32_t a, uint32_t b) {
  const uint32_t lo = std::min(a, b);
  const uint32_t hi = std::max(a, b);
  return static_cast<uint64_t>(lo) << 32 | hi;
}

Vec StreamAggregations::update_and_extract(const TrafficRecord& rec) {
  if (!std::isfinite(rec.payload_size))
    throw RecordError("rejected record: non-finite payload_size from " + rec.device_id);

  const double x = rec.payload_size;
  const int64_t t = rec.timestamp_ms;

  auto& mi = host_mac_[mac_to_string(rec.src_mac) + "/" + ipv4_to_string(rec.src_ip)];
  auto& host = host_[rec.src_ip];
  auto& channel = channel_[ip_pair_key(rec.src_ip, rec.dst_ip)];
  auto& socket = socket_[SocketKey{ip_pair_key(rec.src_ip, rec.dst_ip), rec.dst_port}];
  auto& jitter = jitter_[static_cast<uint64_t>(rec.src_ip) << 32 | rec.dst_ip];

  // side 0 = lower endpoint sends; keeps pair stats symmetric across keys
  const int side = rec.src_ip <= rec.dst_ip ? 0 : 1;

  const bool have_gap = jitter.seen;
  const double gap = have_gap ? static_cast<double>(t - jitter.last_arrival) : 0.0;
  jitter.last_arrival = t;
  jitter.seen = true;

  Vec out(kFeatureDim);
  for (int wi = 0; wi < kNumWindows; ++wi) {
    const double lambda = 1.0 / kWindowHalfLifeMs[wi];
    mi[wi].insert(x, lambda, t);
    host[wi].insert(x, lambda, t);
    channel[wi].update(side, x, lambda, t);
    socket[wi].update(side, x, lambda, t);
    if (have_gap) jitter.stat[wi].insert(gap, lambda, t);

    const DampedStat& ch_dir = channel[wi].dir[side];
    const DampedStat& so_dir = socket[wi].dir[side];
    double* f = out.data() + wi * kStatsPerWindow;
    f[0] = mi[wi].w;
    f[1] = mi[wi].mean();
    f[2] = mi[wi].var();
    f[3] = host[wi].w;
    f[4] = host[wi].mean();
    f[5] = host[wi].var();
    f[6] = ch_dir.w;
    f[7] = ch_dir.mean();
    f[8] = ch_dir.std();
    f[9] = channel[wi].magnitude();
    f[10] = channel[wi].radius();
    f[11] = channel[wi].covariance();
    f[12] = channel[wi].correlation();
    f[13] = so_dir.w;
    f[14] = so_dir.mean();
    f[15] = so_dir.std();
    f[16] = socket[wi].magnitude();
    f[17] = socket[wi].radius();
    f[18] = socket[wi].covariance();
    f[19] = socket[wi].correlation();
    f[20] = jitter.stat[wi].w;
    f[21] = jitter.stat[wi].mean();
    f[22] = jitter.stat[wi].var();
  }
  return out;
}

void StreamAggregations::reset() {
  host_mac_.clear();
  host_.clear();
  channel_.clear();
  socket_.clear();
  jitter_.clear();
}

std::vector<std::string> feature_column_names() {
  static const char* stat_names[kStatsPerWindow] = {
      "host_mac_weight", "host_mac_mean", "host_mac_var",
      "host_weight",     "host_mean",     "host_var",
      "channel_weight",  "channel_mean",  "channel_std",  "channel_magnitude",
      "channel_radius",  "channel_cov",   "channel_pcc",
      "socket_weight",   "socket_mean",   "socket_std",   "socket_magnitude",
      "socket_radius",   "socket_cov",    "socket_pcc",
      "jitter_weight",   "jitter_mean",   "jitter_var"};
  static const char* window_names[kNumWindows] = {"100ms", "500ms", "1500ms", "10s",
                                                  "60s"};
  std::vector<std::string> out;
  out.reserve(kFeatureDim);
  for (int wi = 0; wi < kNumWindows; ++wi)
    for (int si = 0; si < kStatsPerWindow; ++si)
      out.push_back(std::string(stat_names[si]) + "_" + window_names[wi]);
  return out;
}

}  // namespace zonemon
