#pragma once

#include "zonemon/crypto.hpp"
#include "zonemon/features.hpp"
#include "zonemon/ledger.hpp"
#include "zonemon/traffic.hpp"
#include "zonemon/types.hpp"

#include <functional>
#include <map>
#include <optional>
#include <variant>

namespace zonemon {

// Master-signed credential binding a follower to the zone's group id.
struct Ticket {
  std::string group_id;
  DeviceId follower_id;
  int64_t issued_at = 0;
  Signature master_signature{};

  Bytes canonical() const;  // the signed bytes
  // ticket plus signature; this is what an association request signs
  Bytes request_payload() const;
};

struct Association {
  std::string group_id;
  DeviceId follower_id;
  int64_t established_at = 0;
};

enum class RejectReason {
  UnknownFollower,
  BadFollowerSignature,
  BadTicket,
  Duplicate,
  Unassociated,
};

const char* reject_reason_name(RejectReason r);

struct Rejected {
  RejectReason reason;
};

// Scoring hook for the behavior monitor; verdict is Malicious when the
// score strictly exceeds the threshold.
struct CalibratedScorer {
  std::string name;
  std::function<double(const Vec&)> score;
  double threshold = 0.0;
};

struct TrustParams {
  int64_t window_ms = 60'000;
  double quarantine_quota = 0.5;  // in-window malicious fraction per device
};

struct TrustReport {
  double score = 1.0;  // 1 - malicious fraction over the window
  std::map<DeviceId, bool> quarantined;
};

struct RouteResult {
  Verdict verdict = Verdict::Benign;
  uint64_t seq_id = 0;
  double score = 0.0;
  bool delivered = false;  // malicious verdicts are withheld
};

// One zone: a master (ledger writer, certification authority and
// behavior monitor) plus follower devices that transact through it.
class ZoneState {
 public:
  ZoneState(ZoneId zone_id, DeviceId master, KeyPair master_keys, int blocksize,
            TrustParams trust);

  const ZoneId& zone_id() const { return zone_id_; }
  const DeviceId& master() const { return master_; }
  const std::string& group_id() const { return group_id_; }
  const PublicKey& master_public_key() const { return master_keys_.pk; }

  void register_follower(const DeviceId& id, const PublicKey& pk);
  bool has_follower(const DeviceId& id) const { return followers_.contains(id); }
  bool is_associated(const DeviceId& id) const { return associations_.contains(id); }

  Ticket issue_ticket(const DeviceId& follower_id, int64_t now_ms) const;

  // Order of checks: follower known, request signature under the
  // follower's key, ticket under the master's key, duplicate.
  std::variant<Association, Rejected> request_association(const DeviceId& follower_id,
                                                          const Ticket& ticket,
                                                          const Signature& request_signature,
                                                          int64_t now_ms);

  // Behavior-monitored messaging: extract features, classify, record
  // snapshot and verdict on the ledger; only benign verdicts release
  // delivery. Requires a scorer.
  std::variant<RouteResult, Rejected> route_message(const DeviceId& from, const DeviceId& to,
                                                    const TrafficRecord& record);

  // score = 1 - malicious fraction of verdict-carrying transactions in
  // (now - window, now]; empty window scores 1.
  TrustReport trust_level(int64_t now_ms) const;
  TrustReport trust_level(int64_t now_ms, int64_t window_ms) const;

  void set_scorer(CalibratedScorer scorer) { scorer_ = std::move(scorer); }
  bool has_scorer() const { return scorer_.has_value(); }

  Ledger& ledger() { return ledger_; }
  const Ledger& ledger() const { return ledger_; }
  const std::map<DeviceId, Association>& associations() const { return associations_; }

 private:
  ZoneId zone_id_;
  DeviceId master_;
  std::string group_id_;
  KeyPair master_keys_;
  std::map<DeviceId, PublicKey> followers_;
  std::map<DeviceId, Association> associations_;
  Ledger ledger_;
  TrustParams trust_;
  std::optional<CalibratedScorer> scorer_;
  std::map<DeviceId, StreamAggregations> streams_;
};

// Group id derived from the digest of the master's public key; stable
// across runs with the same keys.
std::string derive_group_id(const PublicKey& master_pk);

struct ZoneSetup {
  ZoneState zone;
  std::map<DeviceId, KeyPair> device_keys;  // follower-side secrets
};

// Master designation: highest capability score, ties to the lowest
// device id. Deterministic key material per (seed, device id).
ZoneSetup init_zone(const ZoneId& zone_id, const std::vector<DeviceProfile>& devices,
                    int blocksize, TrustParams trust, uint64_t seed);

}  // namespace zonemon
