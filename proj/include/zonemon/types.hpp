#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zonemon {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Identifiers are opaque strings, unique within one simulation.
using DeviceId = std::string;
using ZoneId = std::string;

constexpr int kFeatureDim = 115;

enum class Protocol : uint8_t { Tcp = 0, Udp = 1 };

enum class AttackPhase : uint8_t { Scan = 0, Flood = 1 };

// Attached by generators and loaders only; never visible to detectors.
struct GroundTruthLabel {
  bool malicious = false;
  AttackPhase phase = AttackPhase::Scan;  // meaningful only when malicious

  static GroundTruthLabel benign() { return {}; }
  static GroundTruthLabel mirai(AttackPhase p) { return {true, p}; }

  bool operator==(const GroundTruthLabel&) const = default;
};

struct TrafficRecord {
  int64_t timestamp_ms = 0;  // since simulation epoch
  uint32_t src_ip = 0;       // IPv4, host byte order
  uint32_t dst_ip = 0;
  uint64_t src_mac = 0;      // low 48 bits
  uint16_t dst_port = 0;
  Protocol protocol = Protocol::Tcp;
  double payload_size = 0.0;  // bytes, >= 0
  DeviceId device_id;
};

struct LabeledRecord {
  TrafficRecord record;
  GroundTruthLabel label;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CryptoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string ipv4_to_string(uint32_t ip);
uint32_t ipv4_from_string(const std::string& s);
std::string mac_to_string(uint64_t mac);
uint64_t mac_from_string(const std::string& s);

}  // namespace zonemon
