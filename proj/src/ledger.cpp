#include "zonemon/ledger.hpp"

#include <algorithm>

namespace zonemon {

Bytes encode_behavior_snapshot(const TrafficRecord& rec, const Vec& features) {
  if (features.size() != kFeatureDim)
    throw ParseError("behavior snapshot needs a 115-dimensional feature vector");
  ByteWriter w;
  w.u8(static_cast<uint8_t>(SnapshotKind::Behavior));
  w.i64(rec.timestamp_ms);
  w.u32(rec.src_ip);
  w.u32(rec.dst_ip);
  w.u64(rec.src_mac);
  w.u16(rec.dst_port);
  w.u8(static_cast<uint8_t>(rec.protocol));
  w.f64(rec.payload_size);
  w.str(rec.device_id);
  w.u32(kFeatureDim);
  for (Eigen::Index i = 0; i < features.size(); ++i) w.f64(features[i]);
  return w.take();
}

BehaviorSnapshot decode_behavior_snapshot(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u8() != static_cast<uint8_t>(SnapshotKind::Behavior))
    throw ParseError("not a behavior snapshot");
  BehaviorSnapshot s;
  s.record.timestamp_ms = r.i64();
  s.record.src_ip = r.u32();
  s.record.dst_ip = r.u32();
  s.record.src_mac = r.u64();
  s.record.dst_port = r.u16();
  s.record.protocol = static_cast<Protocol>(r.u8());
  s.record.payload_size = r.f64();
  s.record.device_id = r.str();
  const uint32_t n = r.u32();
  if (n != kFeatureDim) throw ParseError("behavior snapshot feature count mismatch");
  s.features = Vec(kFeatureDim);
  for (Eigen::Index i = 0; i < kFeatureDim; ++i) s.features[i] = r.f64();
  if (!r.done()) throw ParseError("trailing bytes in behavior snapshot");
  return s;
}

Bytes encode_association_snapshot(const std::string& group_id, const DeviceId& follower_id,
                                  int64_t established_at) {
  ByteWriter w;
  w.u8(static_cast<uint8_t>(SnapshotKind::Association));
  w.i64(established_at);
  w.str(group_id);
  w.str(follower_id);
  return w.take();
}

SnapshotKind snapshot_kind(std::span<const uint8_t> bytes) {
  if (bytes.empty()) throw ParseError("empty snapshot");
  return static_cast<SnapshotKind>(bytes[0]);
}

Bytes BlockHeader::canonical() const {
  ByteWriter w;
  w.u64(height);
  w.bytes(prev_hash);
  w.bytes(tx_root);
  w.i64(timestamp_ms);
  return w.take();
}

Digest BlockHeader::hash() const { return sha256(canonical()); }

const char* break_reason_name(BreakReason r) {
  switch (r) {
    case BreakReason::Link: return "link";
    case BreakReason::Root: return "root";
    case BreakReason::Sequence: return "sequence";
  }
  return "?";
}

BlockHeader Ledger::make_genesis(const ZoneId& zone_id) {
  BlockHeader g;
  g.height = 0;
  g.prev_hash.fill(0);
  // the genesis root anchors the zone identity
  g.tx_root = sha256(Bytes(zone_id.begin(), zone_id.end()));
  g.timestamp_ms = 0;
  return g;
}

Ledger::Ledger(ZoneId zone_id, int blocksize)
    : zone_id_(std::move(zone_id)), blocksize_(blocksize) {
  if (blocksize_ < 1) throw ConfigError("blocksize must be at least 1");
  genesis_ = make_genesis(zone_id_);
  head_hash_ = genesis_.hash();
}

uint64_t Ledger::submit(Bytes snapshot, const DeviceId& device_id, int64_t timestamp_ms) {
  if (!is_authorized(device_id))
    throw AuthorizationError("submission rejected: device not associated: " + device_id);

  const uint64_t seq = next_seq_++;
  Transaction tx;
  tx.seq_id = seq;
  tx.device_id = device_id;
  tx.zone_id = zone_id_;
  tx.tx_hash = sha256(snapshot);
  tx.timestamp_ms = timestamp_ms;

  StoreEntry entry;
  entry.seq_id = seq;
  entry.snapshot = std::move(snapshot);
  entry.device_id = device_id;
  entry.timestamp_ms = timestamp_ms;
  store_.emplace(seq, std::move(entry));

  pending_.push_back(std::move(tx));
  if (static_cast<int>(pending_.size()) == blocksize_) seal_pending(timestamp_ms);
  return seq;
}

const Block& Ledger::seal_pending(int64_t now_ms) {
  if (pending_.empty()) throw ConfigError("cannot seal an empty transaction pool");

  Block block;
  block.transactions = std::move(pending_);
  pending_.clear();

  ByteWriter hashes;
  for (Transaction& tx : block.transactions) {
    tx.h_id = next_h_++;
    hashes.bytes(tx.tx_hash);
  }

  block.header.height = height() + 1;
  block.header.prev_hash = head_hash_;
  block.header.tx_root = sha256(hashes.data());
  block.header.timestamp_ms = now_ms;
  head_hash_ = block.header.hash();

  for (const Transaction& tx : block.transactions) {
    StoreEntry& e = store_.at(tx.seq_id);
    e.h_id = tx.h_id;
    e.height = block.header.height;
  }
  blocks_.push_back(std::move(block));
  return blocks_.back();
}

void Ledger::set_verdict(uint64_t seq_id, Verdict v) {
  auto it = store_.find(seq_id);
  if (it == store_.end()) throw ConfigError("unknown SEQ-ID " + std::to_string(seq_id));
  if (it->second.verdict) throw ConfigError("verdict already assigned");
  it->second.verdict = v;
}

const StoreEntry& Ledger::lookup(uint64_t seq_id) const {
  auto it = store_.find(seq_id);
  if (it == store_.end()) throw ConfigError("unknown SEQ-ID " + std::to_string(seq_id));
  return it->second;
}

VerifyResult Ledger::verify() const {
  const Digest zero{};
  if (genesis_.height != 0 || genesis_.prev_hash != zero ||
      genesis_.timestamp_ms != 0)
    return {false, 0, BreakReason::Link};
  if (genesis_.tx_root != sha256(Bytes(zone_id_.begin(), zone_id_.end())))
    return {false, 0, BreakReason::Root};

  Digest prev = genesis_.hash();
  uint64_t expected_h = 1;
  uint64_t last_seq = 0;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    const Block& b = blocks_[i];
    const uint64_t h = b.header.height;
    if (h != i + 1) return {false, h, BreakReason::Link};
    if (b.header.prev_hash != prev) return {false, h, BreakReason::Link};

    ByteWriter hashes;
    for (const Transaction& tx : b.transactions) {
      if (tx.seq_id <= last_seq) return {false, h, BreakReason::Sequence};
      last_seq = tx.seq_id;
      if (!tx.h_id || *tx.h_id != expected_h) return {false, h, BreakReason::Sequence};
      ++expected_h;
      auto it = store_.find(tx.seq_id);
      if (it == store_.end()) return {false, h, BreakReason::Sequence};
      if (sha256(it->second.snapshot) != tx.tx_hash) return {false, h, BreakReason::Root};
      hashes.bytes(tx.tx_hash);
    }
    if (sha256(hashes.data()) != b.header.tx_root) return {false, h, BreakReason::Root};
    prev = b.header.hash();
  }
  if (head_hash_ != prev)
    return {false, blocks_.empty() ? 0 : blocks_.back().header.height, BreakReason::Link};
  return {};
}

Bytes Ledger::export_bytes() const {
  ByteWriter w;
  w.u8('Z'); w.u8('C'); w.u8('H'); w.u8('1');
  w.u32(1);  // format version
  w.str(zone_id_);
  w.bytes(genesis_.canonical());
  w.u32(static_cast<uint32_t>(blocks_.size()));
  for (const Block& b : blocks_) {
    w.bytes(b.header.canonical());
    w.u32(static_cast<uint32_t>(b.transactions.size()));
    for (const Transaction& tx : b.transactions) {
      w.u64(tx.seq_id);
      w.u64(tx.h_id.value_or(0));
      w.bytes(tx.tx_hash);
    }
  }
  w.u32(static_cast<uint32_t>(store_.size()));
  for (const auto& [seq, e] : store_) {
    w.u64(seq);
    w.u8(e.verdict ? 1 : 0);
    w.u8(e.verdict ? static_cast<uint8_t>(*e.verdict) : 0);
    w.u8(e.h_id ? 1 : 0);
    w.u64(e.h_id.value_or(0));
    w.u64(e.height.value_or(0));
    w.str(e.device_id);
    w.i64(e.timestamp_ms);
    w.u32(static_cast<uint32_t>(e.snapshot.size()));
    w.bytes(e.snapshot);
  }
  w.bytes(head_hash_);
  return w.take();
}

static BlockHeader read_header(ByteReader& r) {
  BlockHeader h;
  h.height = r.u64();
  auto ph = r.bytes(32);
  std::copy(ph.begin(), ph.end(), h.prev_hash.begin());
  auto root = r.bytes(32);
  std::copy(root.begin(), root.end(), h.tx_root.begin());
  h.timestamp_ms = r.i64();
  return h;
}

Ledger Ledger::import_bytes(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u8() != 'Z' || r.u8() != 'C' || r.u8() != 'H' || r.u8() != '1')
    throw ParseError("not a chain file");
  if (r.u32() != 1) throw ParseError("unsupported chain format version");
  const ZoneId zone_id = r.str();

  Ledger ledger(zone_id, 1);
  ledger.blocksize_ = 0;  // restored below
  ledger.genesis_ = read_header(r);

  const uint32_t n_blocks = r.u32();
  size_t max_block = 0;
  for (uint32_t i = 0; i < n_blocks; ++i) {
    Block b;
    b.header = read_header(r);
    const uint32_t n_tx = r.u32();
    for (uint32_t t = 0; t < n_tx; ++t) {
      Transaction tx;
      tx.seq_id = r.u64();
      const uint64_t h = r.u64();
      if (h != 0) tx.h_id = h;
      auto hash = r.bytes(32);
      std::copy(hash.begin(), hash.end(), tx.tx_hash.begin());
      tx.zone_id = zone_id;
      b.transactions.push_back(std::move(tx));
    }
    max_block = std::max(max_block, b.transactions.size());
    ledger.blocks_.push_back(std::move(b));
  }

  const uint32_t n_entries = r.u32();
  uint64_t max_seq = 0, max_h = 0;
  for (uint32_t i = 0; i < n_entries; ++i) {
    StoreEntry e;
    e.seq_id = r.u64();
    const bool has_verdict = r.u8() != 0;
    const uint8_t verdict = r.u8();
    if (has_verdict) e.verdict = static_cast<Verdict>(verdict);
    const bool has_h = r.u8() != 0;
    const uint64_t h = r.u64();
    if (has_h) e.h_id = h;
    const uint64_t height = r.u64();
    if (height != 0) e.height = height;
    e.device_id = r.str();
    e.timestamp_ms = r.i64();
    const uint32_t snap_len = r.u32();
    e.snapshot = r.bytes(snap_len);
    max_seq = std::max(max_seq, e.seq_id);
    max_h = std::max(max_h, h);
    ledger.store_.emplace(e.seq_id, std::move(e));
  }
  auto head = r.bytes(32);
  std::copy(head.begin(), head.end(), ledger.head_hash_.begin());
  if (!r.done()) throw ParseError("trailing bytes in chain file");

  // hydrate tx metadata from the store
  for (Block& b : ledger.blocks_) {
    for (Transaction& tx : b.transactions) {
      auto it = ledger.store_.find(tx.seq_id);
      if (it != ledger.store_.end()) {
        tx.device_id = it->second.device_id;
        tx.timestamp_ms = it->second.timestamp_ms;
      }
    }
  }
  ledger.blocksize_ = std::max<int>(1, static_cast<int>(max_block));
  ledger.next_seq_ = max_seq + 1;
  ledger.next_h_ = max_h + 1;
  return ledger;
}

}  // namespace zonemon
