#pragma once

#include "zonemon/bytes.hpp"

#include <array>
#include <optional>

namespace zonemon {

using Digest = std::array<uint8_t, 32>;
using Signature = std::array<uint8_t, 64>;
using PublicKey = std::array<uint8_t, 32>;
using SecretKey = std::array<uint8_t, 64>;
using KeySeed = std::array<uint8_t, 32>;

// Must be called once before any other crypto routine; safe to repeat.
void crypto_init();

Digest sha256(std::span<const uint8_t> data);
Digest sha256(const Bytes& data);

struct KeyPair {
  PublicKey pk{};
  SecretKey sk{};

  // Deterministic derivation so scenario runs reproduce key material.
  static KeyPair from_seed(const KeySeed& seed);
  static KeyPair random();
};

// Derives a 32-byte seed from a counter-tagged string, for per-device keys.
KeySeed derive_seed(uint64_t seed, const std::string& tag);

Signature sign(const SecretKey& sk, std::span<const uint8_t> msg);
bool verify(const PublicKey& pk, std::span<const uint8_t> msg, const Signature& sig);

// Authenticated encryption with detached tag (XChaCha20-Poly1305).
// The additional-data parameter is bound into the tag.
struct AeadBox {
  std::array<uint8_t, 24> nonce{};
  std::array<uint8_t, 16> tag{};
  Bytes ciphertext;
};

AeadBox aead_seal(const Digest& key, std::span<const uint8_t> plaintext,
                  std::span<const uint8_t> aad);
// Empty optional on any authentication failure; never partial plaintext.
std::optional<Bytes> aead_open(const Digest& key, const AeadBox& box,
                               std::span<const uint8_t> aad);

}  // namespace zonemon
