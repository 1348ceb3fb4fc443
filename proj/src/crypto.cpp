#include "zonemon/crypto.hpp"

#include <sodium.h>

namespace zonemon {

void crypto_init() {
  if (sodium_init() < 0) throw CryptoError("libsodium initialization failed");
}

Digest sha256(std::span<const uint8_t> data) {
  crypto_init();
  Digest out;
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Digest sha256(const Bytes& data) { return sha256(std::span<const uint8_t>(data)); }

KeyPair KeyPair::from_seed(const KeySeed& seed) {
  crypto_init();
  KeyPair kp;
  crypto_sign_seed_keypair(kp.pk.data(), kp.sk.data(), seed.data());
  return kp;
}

KeyPair KeyPair::random() {
  crypto_init();
  KeyPair kp;
  crypto_sign_keypair(kp.pk.data(), kp.sk.data());
  return kp;
}

KeySeed derive_seed(uint64_t seed, const std::string& tag) {
  ByteWriter w;
  w.u64(seed);
  w.str(tag);
  return sha256(w.data());
}

Signature sign(const SecretKey& sk, std::span<const uint8_t> msg) {
  crypto_init();
  Signature sig;
  crypto_sign_detached(sig.data(), nullptr, msg.data(), msg.size(), sk.data());
  return sig;
}

bool verify(const PublicKey& pk, std::span<const uint8_t> msg, const Signature& sig) {
  crypto_init();
  return crypto_sign_verify_detached(sig.data(), msg.data(), msg.size(), pk.data()) == 0;
}

AeadBox aead_seal(const Digest& key, std::span<const uint8_t> plaintext,
                  std::span<const uint8_t> aad) {
  crypto_init();
  static_assert(crypto_aead_xchacha20poly1305_ietf_KEYBYTES == 32);
  AeadBox box;
  // Deterministic nonce (SIV style): runs with identical inputs produce
  // identical blobs, which the chain/model determinism contract needs.
  ByteWriter w;
  w.bytes(key);
  w.bytes(sha256(plaintext));
  const Digest n = sha256(w.data());
  std::copy_n(n.begin(), box.nonce.size(), box.nonce.begin());

  box.ciphertext.resize(plaintext.size());
  unsigned long long maclen = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt_detached(
      box.ciphertext.data(), box.tag.data(), &maclen, plaintext.data(), plaintext.size(),
      aad.data(), aad.size(), nullptr, box.nonce.data(), key.data());
  return box;
}

std::optional<Bytes> aead_open(const Digest& key, const AeadBox& box,
                               std::span<const uint8_t> aad) {
  crypto_init();
  Bytes plain(box.ciphertext.size());
  const int rc = crypto_aead_xchacha20poly1305_ietf_decrypt_detached(
      plain.data(), nullptr, box.ciphertext.data(), box.ciphertext.size(), box.tag.data(),
      aad.data(), aad.size(), box.nonce.data(), key.data());
  if (rc != 0) return std::nullopt;
  return plain;
}

}  // namespace zonemon
