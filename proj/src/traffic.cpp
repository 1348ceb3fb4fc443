#include "zonemon/traffic.hpp"

#include "zonemon/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace zonemon {

std::string ipv4_to_string(uint32_t ip) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (ip >> 24) & 0xFF, (ip >> 16) & 0xFF,
                (ip >> 8) & 0xFF, ip & 0xFF);
  return buf;
}

uint32_t ipv4_from_string(const std::string& s) {
  unsigned a, b, c, d;
  char tail;
  if (std::sscanf(s.c_str(), "%u.%u.%u.%u%c", &a, &b, &c, &d, &tail) != 4 || a > 255 ||
      b > 255 || c > 255 || d > 255)
    throw ParseError("invalid IPv4 address: " + s);
  return (a << 24) | (b << 16) | (c << 8) | d;
}

std::string mac_to_string(uint64_t mac) {
  char buf[18];
  std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x",
                unsigned(mac >> 40) & 0xFF, unsigned(mac >> 32) & 0xFF,
                unsigned(mac >> 24) & 0xFF, unsigned(mac >> 16) & 0xFF,
                unsigned(mac >> 8) & 0xFF, unsigned(mac) & 0xFF);
  return buf;
}

uint64_t mac_from_string(const std::string& s) {
  unsigned b[6];
  char tail;
  if (std::sscanf(s.c_str(), "%x:%x:%x:%x:%x:%x%c", &b[0], &b[1], &b[2], &b[3], &b[4],
                  &b[5], &tail) != 6)
    throw ParseError("invalid MAC address: " + s);
  uint64_t mac = 0;
  for (unsigned v : b) {
    if (v > 255) throw ParseError("invalid MAC address: " + s);
    mac = mac << 8 | v;
  }
  return mac;
}

void validate_profile(const DeviceProfile& profile) {
  if (profile.device_id.empty() || profile.device_id.size() > 64)
    throw ConfigError("device_id must be a non-empty string of at most 64 bytes");
  if (!(profile.mean_interarrival_ms > 0))
    throw ConfigError("mean inter-arrival must be positive for " + profile.device_id);
  if (profile.peers.empty())
    throw ConfigError("device profile has empty peer set: " + profile.device_id);
  double total = 0.0;
  for (const Peer& p : profile.peers) {
    if (p.weight < 0) throw ConfigError("negative peer weight for " + profile.device_id);
    total += p.weight;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ConfigError("peer weights must sum to 1 for " + profile.device_id);
}

std::vector<LabeledRecord> generate_benign(const DeviceProfile& profile,
                                           int64_t duration_ms, uint64_t seed) {
  validate_profile(profile);
  if (duration_ms <= 0) throw ConfigError("duration must be positive");

  std::vector<double> weights;
  weights.reserve(profile.peers.size());
  for (const Peer& p : profile.peers) weights.push_back(p.weight);

  Rng rng(seed);
  std::vector<LabeledRecord> out;
  double t = 0.0;
  while (true) {
    t += rng.exponential(profile.mean_interarrival_ms);
    if (t >= static_cast<double>(duration_ms)) break;
    const Peer& peer = profile.peers[rng.weighted_index(weights)];
    TrafficRecord rec;
    rec.timestamp_ms = static_cast<int64_t>(t);
    rec.src_ip = profile.src_ip;
    rec.dst_ip = peer.dst_ip;
    rec.src_mac = profile.src_mac;
    rec.dst_port = peer.dst_port;
    rec.protocol = peer.protocol;
    rec.payload_size = std::max(0.0, std::round(rng.gaussian(profile.payload_mean,
                                                             profile.payload_std)));
    rec.device_id = profile.device_id;
    out.push_back({rec, GroundTruthLabel::benign()});
  }
  return out;
}

std::vector<LabeledRecord> generate_mirai(const DeviceProfile& profile, int64_t start_ms,
                                          int64_t duration_ms, uint64_t seed,
                                          const MiraiShape& shape) {
  if (duration_ms <= 0) throw ConfigError("duration must be positive");

  Rng rng(seed);
  std::vector<LabeledRecord> out;
  const double scan_end =
      static_cast<double>(start_ms) + shape.scan_fraction * static_cast<double>(duration_ms);
  const double end = static_cast<double>(start_ms + duration_ms);

  // The flood victim is one fixed address per run.
  const uint32_t victim_ip = 0x0A000000u | (rng.below(1u << 24));

  double t = static_cast<double>(start_ms);
  while (true) {
    const bool scanning = t < scan_end;
    t += scanning ? shape.scan_gap_ms : shape.flood_gap_ms;
    if (t >= end) break;
    TrafficRecord rec;
    rec.timestamp_ms = static_cast<int64_t>(t);
    rec.src_ip = profile.src_ip;
    rec.src_mac = profile.src_mac;
    rec.device_id = profile.device_id;
    rec.protocol = Protocol::Tcp;
    if (scanning) {
      rec.dst_ip = rng.next_u64() & 0xFFFFFFFFu;
      rec.dst_port = (rng.below(2) == 0) ? 23 : 2323;
      rec.payload_size = shape.scan_payload;
      out.push_back({rec, GroundTruthLabel::mirai(AttackPhase::Scan)});
    } else {
      rec.dst_ip = victim_ip;
      rec.dst_port = shape.flood_port;
      rec.payload_size = shape.flood_payload;
      out.push_back({rec, GroundTruthLabel::mirai(AttackPhase::Flood)});
    }
  }
  return out;
}

std::vector<LabeledRecord> merge_streams(std::vector<std::vector<LabeledRecord>> streams) {
  std::vector<LabeledRecord> out;
  size_t total = 0;
  for (const auto& s : streams) total += s.size();
  out.reserve(total);
  std::vector<size_t> pos(streams.size(), 0);
  while (out.size() < total) {
    int best = -1;
    for (size_t i = 0; i < streams.size(); ++i) {
      if (pos[i] >= streams[i].size()) continue;
      if (best < 0) {
        best = static_cast<int>(i);
        continue;
      }
      const auto& a = streams[i][pos[i]].record;
      const auto& b = streams[best][pos[best]].record;
      if (a.timestamp_ms < b.timestamp_ms ||
          (a.timestamp_ms == b.timestamp_ms && a.device_id < b.device_id))
        best = static_cast<int>(i);
    }
    out.push_back(streams[best][pos[best]++]);
  }
  return out;
}

std::string label_to_string(const GroundTruthLabel& label) {
  if (!label.malicious) return "benign";
  return label.phase == AttackPhase::Scan ? "mirai-scan" : "mirai-flood";
}

GroundTruthLabel label_from_string(const std::string& s) {
  if (s == "benign") return GroundTruthLabel::benign();
  if (s == "mirai-scan") return GroundTruthLabel::mirai(AttackPhase::Scan);
  if (s == "mirai-flood") return GroundTruthLabel::mirai(AttackPhase::Flood);
  throw ParseError("unknown label: " + s);
}

void write_traffic_csv(const std::string& path, const std::vector<LabeledRecord>& records) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot open for writing: " + path);
  f << "timestamp_ms,src_ip,dst_ip,src_mac,protocol,dst_port,payload_size,device_id,label\n";
  char num[32];
  for (const auto& [rec, label] : records) {
    std::snprintf(num, sizeof(num), "%.17g", rec.payload_size);
    f << rec.timestamp_ms << ',' << ipv4_to_string(rec.src_ip) << ','
      << ipv4_to_string(rec.dst_ip) << ',' << mac_to_string(rec.src_mac) << ','
      << (rec.protocol == Protocol::Tcp ? "TCP" : "UDP") << ',' << rec.dst_port << ','
      << num << ',' << rec.device_id << ',' << label_to_string(label) << '\n';
  }
  if (!f) throw ParseError("write failed: " + path);
}

static std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

static double parse_strict_double(const std::string& s, size_t row, size_t col) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("");
    if (!std::isfinite(v))
      throw ParseError("non-finite value at row " + std::to_string(row) + ", column " +
                       std::to_string(col));
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("non-numeric cell at row " + std::to_string(row) + ", column " +
                     std::to_string(col) + ": '" + s + "'");
  }
}

std::vector<LabeledRecord> load_traffic_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open: " + path);
  std::string line;
  if (!std::getline(f, line)) throw ParseError("empty traffic file: " + path);
  std::vector<LabeledRecord> out;
  size_t row = 0;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 9)
      throw ParseError("expected 9 columns at row " + std::to_string(row) + ", got " +
                       std::to_string(cells.size()));
    LabeledRecord lr;
    lr.record.timestamp_ms = static_cast<int64_t>(parse_strict_double(cells[0], row, 1));
    lr.record.src_ip = ipv4_from_string(cells[1]);
    lr.record.dst_ip = ipv4_from_string(cells[2]);
    lr.record.src_mac = mac_from_string(cells[3]);
    if (cells[4] == "TCP")
      lr.record.protocol = Protocol::Tcp;
    else if (cells[4] == "UDP")
      lr.record.protocol = Protocol::Udp;
    else
      throw ParseError("unknown protocol at row " + std::to_string(row) + ": " + cells[4]);
    lr.record.dst_port = static_cast<uint16_t>(parse_strict_double(cells[5], row, 6));
    lr.record.payload_size = parse_strict_double(cells[6], row, 7);
    lr.record.device_id = cells[7];
    lr.label = label_from_string(cells[8]);
    out.push_back(std::move(lr));
  }
  return out;
}

std::vector<std::pair<Vec, GroundTruthLabel>> load_feature_csv(const std::string& path,
                                                               GroundTruthLabel label) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open: " + path);
  std::string line;
  if (!std::getline(f, line)) throw ParseError("missing header row: " + path);
  const size_t header_cols = split_csv_line(line).size();
  if (header_cols != kFeatureDim)
    throw ParseError("expected " + std::to_string(kFeatureDim) + " columns, header has " +
                     std::to_string(header_cols));
  std::vector<std::pair<Vec, GroundTruthLabel>> out;
  size_t row = 0;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != kFeatureDim)
      throw ParseError("expected " + std::to_string(kFeatureDim) + " columns at row " +
                       std::to_string(row) + ", got " + std::to_string(cells.size()));
    Vec v(kFeatureDim);
    for (size_t c = 0; c < cells.size(); ++c)
      v[static_cast<Eigen::Index>(c)] = parse_strict_double(cells[c], row, c + 1);
    out.emplace_back(std::move(v), label);
  }
  return out;
}

void write_feature_csv(const std::string& path, const std::vector<Vec>& rows) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot open for writing: " + path);
  for (int c = 0; c < kFeatureDim; ++c) f << (c ? "," : "") << "f" << c;
  f << '\n';
  char num[32];
  for (const Vec& v : rows) {
    if (v.size() != kFeatureDim) throw ParseError("feature row is not 115-dimensional");
    for (int c = 0; c < kFeatureDim; ++c) {
      std::snprintf(num, sizeof(num), "%.17g", v[c]);
      f << (c ? "," : "") << num;
    }
    f << '\n';
  }
  if (!f) throw ParseError("write failed: " + path);
}

}  // namespace zonemon
