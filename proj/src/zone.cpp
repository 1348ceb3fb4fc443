#include "zonemon/zone.hpp"

#include <algorithm>

namespace zonemon {

Bytes Ticket::canonical() const {
  ByteWriter w;
  w.str(group_id);
  w.str(follower_id);
  w.i64(issued_at);
  return w.take();
}

Bytes Ticket::request_payload() const {
  ByteWriter w;
  w.bytes(canonical());
  w.bytes(master_signature);
  return w.take();
}

const char* reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::UnknownFollower: return "unknown-follower";
    case RejectReason::BadFollowerSignature: return "bad-follower-signature";
    case RejectReason::BadTicket: return "bad-ticket";
    case RejectReason::Duplicate: return "duplicate";
    case RejectReason::Unassociated: return "unassociated";
  }
  return "?";
}

std::string derive_group_id(const PublicKey& master_pk) {
  const Digest d = sha256(std::span<const uint8_t>(master_pk));
  return "grp-" + to_hex(std::span<const uint8_t>(d.data(), 8));
}

ZoneState::ZoneState(ZoneId zone_id, DeviceId master, KeyPair master_keys, int blocksize,
                     TrustParams trust)
    : zone_id_(std::move(zone_id)),
      master_(std::move(master)),
      group_id_(derive_group_id(master_keys.pk)),
      master_keys_(master_keys),
      ledger_(zone_id_, blocksize),
      trust_(trust) {
  ledger_.require_authorization();
}

void ZoneState::register_follower(const DeviceId& id, const PublicKey& pk) {
  if (id == master_) throw ConfigError("master cannot be its own follower");
  followers_[id] = pk;
}

Ticket ZoneState::issue_ticket(const DeviceId& follower_id, int64_t now_ms) const {
  if (!followers_.contains(follower_id))
    throw ConfigError("unknown follower: " + follower_id);
  Ticket t;
  t.group_id = group_id_;
  t.follower_id = follower_id;
  t.issued_at = now_ms;
  t.master_signature = sign(master_keys_.sk, t.canonical());
  return t;
}

std::variant<Association, Rejected> ZoneState::request_association(
    const DeviceId& follower_id, const Ticket& ticket, const Signature& request_signature,
    int64_t now_ms) {
  auto it = followers_.find(follower_id);
  if (it == followers_.end()) return Rejected{RejectReason::UnknownFollower};
  if (!verify(it->second, ticket.request_payload(), request_signature))
    return Rejected{RejectReason::BadFollowerSignature};
  if (ticket.group_id != group_id_ || ticket.follower_id != follower_id ||
      !verify(master_keys_.pk, ticket.canonical(), ticket.master_signature))
    return Rejected{RejectReason::BadTicket};
  if (associations_.contains(follower_id)) return Rejected{RejectReason::Duplicate};

  Association assoc{group_id_, follower_id, now_ms};
  associations_.emplace(follower_id, assoc);
  ledger_.authorize(follower_id);
  ledger_.submit(encode_association_snapshot(group_id_, follower_id, now_ms), follower_id,
                 now_ms);
  return assoc;
}

std::variant<RouteResult, Rejected> ZoneState::route_message(const DeviceId& from,
                                                             const DeviceId& /*to*/,
                                                             const TrafficRecord& record) {
  if (!is_associated(from)) return Rejected{RejectReason::Unassociated};
  if (!scorer_) throw CalibrationError("zone has no calibrated behavior scorer");

  const Vec features = streams_[from].update_and_extract(record);
  const double score = scorer_->score(features);
  const Verdict verdict = score > scorer_->threshold ? Verdict::Malicious : Verdict::Benign;

  const uint64_t seq =
      ledger_.submit(encode_behavior_snapshot(record, features), from, record.timestamp_ms);
  ledger_.set_verdict(seq, verdict);

  RouteResult r;
  r.verdict = verdict;
  r.seq_id = seq;
  r.score = score;
  r.delivered = verdict == Verdict::Benign;  // malicious traffic is withheld
  return r;
}

TrustReport ZoneState::trust_level(int64_t now_ms) const {
  return trust_level(now_ms, trust_.window_ms);
}

TrustReport ZoneState::trust_level(int64_t now_ms, int64_t window_ms) const {
  TrustReport report;
  size_t total = 0, malicious = 0;
  std::map<DeviceId, std::pair<size_t, size_t>> per_device;  // total, malicious
  for (const auto& [seq, e] : ledger_.store()) {
    if (!e.verdict) continue;  // association records carry no verdict
    if (e.timestamp_ms <= now_ms - window_ms || e.timestamp_ms > now_ms) continue;
    ++total;
    auto& dev = per_device[e.device_id];
    ++dev.first;
    if (*e.verdict == Verdict::Malicious) {
      ++malicious;
      ++dev.second;
    }
  }
  report.score =
      total == 0 ? 1.0 : 1.0 - static_cast<double>(malicious) / static_cast<double>(total);
  for (const auto& [id, counts] : per_device) {
    const double fraction =
        static_cast<double>(counts.second) / static_cast<double>(counts.first);
    report.quarantined[id] = fraction > trust_.quarantine_quota;
  }
  return report;
}

ZoneSetup init_zone(const ZoneId& zone_id, const std::vector<DeviceProfile>& devices,
                    int blocksize, TrustParams trust, uint64_t seed) {
  if (devices.empty()) throw ConfigError("zone needs at least one device");

  const DeviceProfile* master = &devices.front();
  for (const DeviceProfile& d : devices) {
    if (d.capability_score > master->capability_score ||
        (d.capability_score == master->capability_score && d.device_id < master->device_id))
      master = &d;
  }

  std::map<DeviceId, KeyPair> keys;
  for (const DeviceProfile& d : devices)
    keys.emplace(d.device_id, KeyPair::from_seed(derive_seed(seed, "device/" + d.device_id)));

  ZoneSetup setup{
      ZoneState(zone_id, master->device_id, keys.at(master->device_id), blocksize, trust),
      std::move(keys)};
  for (const DeviceProfile& d : devices)
    if (d.device_id != master->device_id)
      setup.zone.register_follower(d.device_id, setup.device_keys.at(d.device_id).pk);
  return setup;
}

}  // namespace zonemon
