#pragma once

#include "zonemon/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace zonemon {

struct Peer {
  uint32_t dst_ip = 0;
  uint16_t dst_port = 0;
  double weight = 0.0;
  Protocol protocol = Protocol::Tcp;
};

// One device archetype. Three built-ins mirror a thermostat, a webcam and
// a security camera; all parameters are configuration.
struct DeviceProfile {
  DeviceId device_id;
  uint32_t src_ip = 0;
  uint64_t src_mac = 0;
  double mean_interarrival_ms = 100.0;  // > 0
  double payload_mean = 128.0;
  double payload_std = 16.0;
  std::vector<Peer> peers;  // weights sum to 1 +- 1e-9
  uint32_t capability_score = 0;
};

// Throws ConfigError when the profile violates its invariants
// (empty peer set, bad weights, nonpositive inter-arrival).
void validate_profile(const DeviceProfile& profile);

// Benign stream over [0, duration_ms). Deterministic per (profile, seed).
std::vector<LabeledRecord> generate_benign(const DeviceProfile& profile,
                                           int64_t duration_ms, uint64_t seed);

struct MiraiShape {
  double scan_fraction = 0.5;   // share of duration spent scanning
  double scan_gap_ms = 2.0;     // inter-arrival while scanning
  double flood_gap_ms = 1.0;    // inter-arrival while flooding, <= 1 ms
  double scan_payload = 60.0;   // small fixed probe
  double flood_payload = 1400.0;
  uint16_t flood_port = 80;
};

// Scan phase (many distinct dst_ip, ports 23/2323, small fixed payloads)
// followed by a flood against a single (dst_ip, dst_port).
std::vector<LabeledRecord> generate_mirai(const DeviceProfile& profile, int64_t start_ms,
                                          int64_t duration_ms, uint64_t seed,
                                          const MiraiShape& shape = {});

// k-way merge of timestamp-sorted streams; ties break by device_id then
// emission order.
std::vector<LabeledRecord> merge_streams(std::vector<std::vector<LabeledRecord>> streams);

// Traffic dump format: header plus
// timestamp_ms,src_ip,dst_ip,src_mac,protocol,dst_port,payload_size,device_id,label
void write_traffic_csv(const std::string& path, const std::vector<LabeledRecord>& records);
std::vector<LabeledRecord> load_traffic_csv(const std::string& path);

// External feature CSV: header plus exactly 115 numeric columns per row.
// The label applies uniformly (the external captures ship one class per file).
std::vector<std::pair<Vec, GroundTruthLabel>> load_feature_csv(const std::string& path,
                                                               GroundTruthLabel label);
void write_feature_csv(const std::string& path, const std::vector<Vec>& rows);

std::string label_to_string(const GroundTruthLabel& label);
GroundTruthLabel label_from_string(const std::string& s);

}  // namespace zonemon
