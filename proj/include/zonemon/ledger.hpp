#pragma once

#include "zonemon/crypto.hpp"
#include "zonemon/types.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace zonemon {

enum class Verdict : uint8_t { Benign = 0, Malicious = 1 };

enum class SnapshotKind : uint8_t { Behavior = 1, Association = 2 };

// Canonical snapshot encodings: fixed-order, fixed-width, little-endian.
// Transaction hashes are digests of these bytes, so the layouts are
// frozen (docs/formats.md).
Bytes encode_behavior_snapshot(const TrafficRecord& rec, const Vec& features);

struct BehaviorSnapshot {
  TrafficRecord record;
  Vec features;
};
BehaviorSnapshot decode_behavior_snapshot(std::span<const uint8_t> bytes);

Bytes encode_association_snapshot(const std::string& group_id, const DeviceId& follower_id,
                                  int64_t established_at);

SnapshotKind snapshot_kind(std::span<const uint8_t> bytes);

struct Transaction {
  uint64_t seq_id = 0;                // behavior-store sequence
  std::optional<uint64_t> h_id;       // global inclusion index, set at sealing
  DeviceId device_id;
  ZoneId zone_id;
  Digest tx_hash{};                   // digest of the canonical snapshot encoding
  int64_t timestamp_ms = 0;
};

struct BlockHeader {
  uint64_t height = 0;  // 0 is reserved for genesis
  Digest prev_hash{};   // genesis: 32 zero bytes
  Digest tx_root{};     // digest over ordered tx hashes; genesis anchors the zone id
  int64_t timestamp_ms = 0;

  Bytes canonical() const;  // 80 bytes
  Digest hash() const;
};

struct Block {
  BlockHeader header;
  std::vector<Transaction> transactions;  // 1..blocksize entries
};

struct StoreEntry {
  uint64_t seq_id = 0;
  Bytes snapshot;  // canonical encoding, hashed as stored
  DeviceId device_id;
  int64_t timestamp_ms = 0;
  std::optional<Verdict> verdict;   // assigned at most once
  std::optional<uint64_t> h_id;     // assigned at sealing
  std::optional<uint64_t> height;   // block containing the tx
};

enum class BreakReason { Link, Root, Sequence };

struct VerifyResult {
  bool ok = true;
  uint64_t height = 0;       // first failing height when broken
  BreakReason reason = BreakReason::Link;
};

const char* break_reason_name(BreakReason r);

struct AuthorizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-zone append-only ledger: a pending transaction pool, the sealed
// chain, and the behavior store keyed by SEQ-ID. Single logical writer.
class Ledger {
 public:
  Ledger(ZoneId zone_id, int blocksize);

  // When enforcement is on, submissions from devices outside the
  // authorized set throw AuthorizationError and leave no trace in the
  // store or pool. The zone grants authorization upon association.
  void require_authorization() { enforce_auth_ = true; }
  void authorize(const DeviceId& device_id) { authorized_.insert(device_id); }
  bool is_authorized(const DeviceId& device_id) const {
    return !enforce_auth_ || authorized_.contains(device_id);
  }

  // Persists the snapshot, enqueues its transaction, and seals a block
  // automatically once the pool reaches blocksize. Returns the SEQ-ID.
  uint64_t submit(Bytes snapshot, const DeviceId& device_id, int64_t timestamp_ms);

  // Explicit flush of a non-empty pool into a block (throws on empty).
  const Block& seal_pending(int64_t now_ms);

  void set_verdict(uint64_t seq_id, Verdict v);  // once per entry

  // Joined view across store and chain; throws on unknown id. Read path
  // is independent of chain validity.
  const StoreEntry& lookup(uint64_t seq_id) const;

  // Checks genesis, every link, every tx root (recomputing tx hashes
  // from stored snapshots), h_id inclusion indexes, seq ordering and the
  // head hash. Returns the first failing height.
  VerifyResult verify() const;

  const ZoneId& zone_id() const { return zone_id_; }
  int blocksize() const { return blocksize_; }
  uint64_t height() const { return blocks_.empty() ? 0 : blocks_.back().header.height; }
  const Digest& head_hash() const { return head_hash_; }
  const BlockHeader& genesis() const { return genesis_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  size_t pending_count() const { return pending_.size(); }
  const std::map<uint64_t, StoreEntry>& store() const { return store_; }

  // Length-prefixed binary chain file (layout in docs/formats.md).
  Bytes export_bytes() const;
  static Ledger import_bytes(std::span<const uint8_t> bytes);

  static BlockHeader make_genesis(const ZoneId& zone_id);

 private:
  ZoneId zone_id_;
  int blocksize_;
  BlockHeader genesis_;
  std::vector<Block> blocks_;
  std::vector<Transaction> pending_;
  std::map<uint64_t, StoreEntry> store_;
  Digest head_hash_{};
  uint64_t next_seq_ = 1;
  uint64_t next_h_ = 1;
  bool enforce_auth_ = false;
  std::set<DeviceId> authorized_;
};

}  // namespace zonemon
