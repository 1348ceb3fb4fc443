#pragma once

#include "zonemon/crypto.hpp"
#include "zonemon/types.hpp"

#include <optional>

namespace zonemon {

using Measurement = Digest;

// Simulated trusted-execution layer: measurement binding, sealed storage
// and verifiable quotes. Models the contract, not the hardware.
struct EnclaveIdentity {
  Measurement measurement{};
  KeyPair platform_key;  // simulated hardware key
};

// 32-byte digest of the enclave's code-identity bytes; deterministic.
// Throws ConfigError on empty input.
Measurement measure(std::span<const uint8_t> code_identity);

struct SealedBlob {
  Measurement bound_measurement{};
  std::array<uint8_t, 24> nonce{};
  std::array<uint8_t, 16> tag{};
  Bytes ciphertext;
};

class Enclave {
 public:
  // Deterministic per (code_identity, platform_seed). The platform seed
  // models the per-CPU secret that keys sealing and attestation.
  Enclave(std::span<const uint8_t> code_identity, uint64_t platform_seed);

  const EnclaveIdentity& identity() const { return identity_; }
  const Measurement& measurement() const { return identity_.measurement; }
  const PublicKey& platform_public_key() const { return identity_.platform_key.pk; }

  // Authenticated encryption keyed by (platform secret, measurement);
  // the measurement is also bound as associated data.
  SealedBlob seal(std::span<const uint8_t> plaintext) const;

  // Empty optional on any tamper or foreign measurement; all-or-nothing.
  std::optional<Bytes> unseal(const SealedBlob& blob) const;

  struct Quote {
    Measurement measurement{};
    std::array<uint8_t, 64> report_data{};
    Signature signature{};
  };

  // report_data is caller-chosen (shorter inputs are zero-padded,
  // longer rejected).
  Quote attest(std::span<const uint8_t> report_data) const;

 private:
  EnclaveIdentity identity_;
  Digest seal_key_{};
};

// True iff the signature verifies under the platform key and the quoted
// measurement equals the expected one.
bool verify_quote(const Enclave::Quote& quote, const Measurement& expected,
                  const PublicKey& platform_pk);

// Fixed-layout quote bytes: measurement (32) || report_data (64) || signature (64).
Bytes serialize_quote(const Enclave::Quote& quote);
Enclave::Quote deserialize_quote(std::span<const uint8_t> bytes);

// Fixed-layout sealed-blob file (docs/formats.md).
Bytes serialize_sealed_blob(const SealedBlob& blob);
SealedBlob deserialize_sealed_blob(std::span<const uint8_t> bytes);

// Code-identity bytes of the behavior monitor build; what gets measured.
Bytes behavior_monitor_code_identity();

}  // namespace zonemon
