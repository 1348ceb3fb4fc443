#include "zonemon/enclave.hpp"

namespace zonemon {

Measurement measure(std::span<const uint8_t> code_identity) {
  if (code_identity.empty()) throw ConfigError("cannot measure empty code identity");
  return sha256(code_identity);
}

Enclave::Enclave(std::span<const uint8_t> code_identity, uint64_t platform_seed) {
  identity_.measurement = measure(code_identity);
  identity_.platform_key = KeyPair::from_seed(derive_seed(platform_seed, "platform-key"));
  // seal key binds the platform secret to this exact measurement
  ByteWriter w;
  w.str("seal-key");
  w.bytes(derive_seed(platform_seed, "platform-seal-secret"));
  w.bytes(identity_.measurement);
  seal_key_ = sha256(w.data());
}

SealedBlob Enclave::seal(std::span<const uint8_t> plaintext) const {
  const AeadBox box = aead_seal(seal_key_, plaintext, identity_.measurement);
  SealedBlob blob;
  blob.bound_measurement = identity_.measurement;
  blob.nonce = box.nonce;
  blob.tag = box.tag;
  blob.ciphertext = box.ciphertext;
  return blob;
}

std::optional<Bytes> Enclave::unseal(const SealedBlob& blob) const {
  if (blob.bound_measurement != identity_.measurement) return std::nullopt;
  AeadBox box{blob.nonce, blob.tag, blob.ciphertext};
  return aead_open(seal_key_, box, blob.bound_measurement);
}

Enclave::Quote Enclave::attest(std::span<const uint8_t> report_data) const {
  if (report_data.size() > 64) throw ConfigError("report_data exceeds 64 bytes");
  Quote q;
  q.measurement = identity_.measurement;
  std::copy(report_data.begin(), report_data.end(), q.report_data.begin());
  ByteWriter w;
  w.bytes(q.measurement);
  w.bytes(q.report_data);
  q.signature = sign(identity_.platform_key.sk, w.data());
  return q;
}

bool verify_quote(const Enclave::Quote& quote, const Measurement& expected,
                  const PublicKey& platform_pk) {
  ByteWriter w;
  w.bytes(quote.measurement);
  w.bytes(quote.report_data);
  if (!verify(platform_pk, w.data(), quote.signature)) return false;
  return quote.measurement == expected;
}

Bytes serialize_quote(const Enclave::Quote& quote) {
  ByteWriter w;
  w.bytes(quote.measurement);
  w.bytes(quote.report_data);
  w.bytes(quote.signature);
  return w.take();
}

Enclave::Quote deserialize_quote(std::span<const uint8_t> bytes) {
  if (bytes.size() != 160) throw ParseError("quote must be exactly 160 bytes");
  ByteReader r(bytes);
  Enclave::Quote q;
  auto m = r.bytes(32);
  std::copy(m.begin(), m.end(), q.measurement.begin());
  auto rd = r.bytes(64);
  std::copy(rd.begin(), rd.end(), q.report_data.begin());
  auto sig = r.bytes(64);
  std::copy(sig.begin(), sig.end(), q.signature.begin());
  return q;
}

Bytes serialize_sealed_blob(const SealedBlob& blob) {
  ByteWriter w;
  w.u8('Z'); w.u8('S'); w.u8('B'); w.u8('1');
  w.u32(1);  // format version
  w.bytes(blob.bound_measurement);
  w.bytes(blob.nonce);
  w.bytes(blob.tag);
  w.u64(blob.ciphertext.size());
  w.bytes(blob.ciphertext);
  return w.take();
}

SealedBlob deserialize_sealed_blob(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u8() != 'Z' || r.u8() != 'S' || r.u8() != 'B' || r.u8() != '1')
    throw ParseError("not a sealed blob file");
  if (r.u32() != 1) throw ParseError("unsupported sealed blob version");
  SealedBlob blob;
  auto m = r.bytes(32);
  std::copy(m.begin(), m.end(), blob.bound_measurement.begin());
  auto n = r.bytes(24);
  std::copy(n.begin(), n.end(), blob.nonce.begin());
  auto tag = r.bytes(16);
  std::copy(tag.begin(), tag.end(), blob.tag.begin());
  const uint64_t len = r.u64();
  blob.ciphertext = r.bytes(len);
  if (!r.done()) throw ParseError("trailing bytes in sealed blob");
  return blob;
}

Bytes behavior_monitor_code_identity() {
  static const std::string id = "zonemon-behavior-monitor/model-format-1";
  return Bytes(id.begin(), id.end());
}

}  // namespace zonemon
