#pragma once

// Hash lock, result protection and sealing primitives. All key material is
// derived from seeded generators so whole simulations replay bit-for-bit.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spoc/error.hpp"

namespace spoc {

using Bytes = std::vector<std::uint8_t>;

std::string toHex(std::span<const std::uint8_t> bytes);
Bytes fromHex(std::string_view hex);

template <std::size_t N, class Tag>
struct FixedBytes {
    static constexpr std::size_t size = N;
    std::array<std::uint8_t, N> bytes{};

    std::span<const std::uint8_t, N> view() const { return bytes; }
    std::string hex() const { return toHex(bytes); }
    bool isZero() const {
        for (auto b : bytes)
            if (b != 0) return false;
        return true;
    }

    static FixedBytes fromSpan(std::span<const std::uint8_t> in) {
        if (in.size() != N)
            throw Error(ErrorCode::WrongLength,
                        "expected " + std::to_string(N) + " bytes, got " + std::to_string(in.size()));
        FixedBytes out;
        std::copy(in.begin(), in.end(), out.bytes.begin());
        return out;
    }
    static FixedBytes fromHex(std::string_view hex) { return fromSpan(spoc::fromHex(hex)); }

    friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;
    friend bool operator==(const FixedBytes&, const FixedBytes&) = default;
};

using Secret = FixedBytes<32, struct SecretTag>;
using Digest = FixedBytes<32, struct DigestTag>;
using Measurement = FixedBytes<32, struct MeasurementTag>;
using Nonce = FixedBytes<24, struct NonceTag>;
using EncryptionKey = FixedBytes<32, struct EncryptionKeyTag>;
using VerifyKey = FixedBytes<32, struct VerifyKeyTag>;
using KeyId = FixedBytes<16, struct KeyIdTag>;
using Signature = FixedBytes<64, struct SignatureTag>;
using PlatformKey = FixedBytes<32, struct PlatformKeyTag>;

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);

// SHA-256 of a 32-byte secret. Any other length is rejected.
Digest hashSecret(std::span<const std::uint8_t> secret);
inline Digest hashSecret(const Secret& secret) { return hashSecret(std::span<const std::uint8_t>(secret.bytes)); }

// Counter-mode expansion of a 64-bit seed. Same seed, same stream.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed);

    void fill(std::span<std::uint8_t> out);
    std::uint64_t nextU64();

    template <class T>
    T draw() {
        T out;
        fill(out.bytes);
        return out;
    }

private:
    Digest root_;
    std::uint64_t counter_ = 0;
};

Secret generateSecret(std::uint64_t seed);
Secret generateSecret(DeterministicRng& rng);

// Per-task key material provisioned to the enclave. The signing key never
// leaves the requestor/enclave pair; the verify key may be handed to third
// parties that only need to check authenticity.
struct ResultKeys {
    EncryptionKey encryptionKey;
    std::array<std::uint8_t, 64> signingKey{};
    VerifyKey verifyKey;

    static ResultKeys generate(DeterministicRng& rng);
    KeyId keyId() const;

    friend bool operator==(const ResultKeys&, const ResultKeys&) = default;
};

struct ProtectedResult {
    KeyId keyId;
    Nonce nonce;
    Bytes ciphertext;
    Signature signature;

    friend bool operator==(const ProtectedResult&, const ProtectedResult&) = default;
};

ProtectedResult protectResult(std::span<const std::uint8_t> plaintext, const ResultKeys& keys, const Nonce& nonce);
// Throws WrongKey when the result was produced for other keys, TamperDetected
// when the ciphertext, nonce or signature were altered.
Bytes openResult(const ProtectedResult& result, const ResultKeys& keys);
bool verifyResultSignature(const ProtectedResult& result, const VerifyKey& verifyKey);

struct SealedBlob {
    Measurement measurement;
    Nonce nonce;
    Bytes ciphertext;

    friend bool operator==(const SealedBlob&, const SealedBlob&) = default;
};

// Seal key = H(platform key || measurement). Unseal rejects any other
// measurement with IdentityMismatch.
SealedBlob seal(const PlatformKey& platform, const Measurement& identity, std::span<const std::uint8_t> state,
                const Nonce& nonce);
Bytes unseal(const PlatformKey& platform, const Measurement& identity, const SealedBlob& blob);

} // namespace spoc
