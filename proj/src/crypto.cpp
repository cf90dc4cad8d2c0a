#include "spoc/crypto.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>

namespace spoc {

namespace {

void ensureSodium() {
    static std::once_flag once;
    std::call_once(once, [] {
        if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
    });
}

void appendU64(Bytes& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

void append(Bytes& out, std::span<const std::uint8_t> data) { out.insert(out.end(), data.begin(), data.end()); }

void append(Bytes& out, std::string_view text) { out.insert(out.end(), text.begin(), text.end()); }

Bytes signedMessage(const KeyId& keyId, const Nonce& nonce, std::span<const std::uint8_t> ciphertext) {
    Bytes msg;
    append(msg, std::string_view("spoc-result-v1"));
    append(msg, keyId.bytes);
    append(msg, nonce.bytes);
    append(msg, ciphertext);
    return msg;
}

EncryptionKey sealKey(const PlatformKey& platform, const Measurement& identity) {
    Bytes material;
    append(material, std::string_view("spoc-seal-v1"));
    append(material, platform.bytes);
    append(material, identity.bytes);
    const Digest d = sha256(material);
    return EncryptionKey{d.bytes};
}

} // namespace

std::string toHex(std::span<const std::uint8_t> bytes) {
    ensureSodium();
    std::string out(bytes.size() * 2 + 1, '\0');
    sodium_bin2hex(out.data(), out.size(), bytes.data(), bytes.size());
    out.pop_back();
    return out;
}

Bytes fromHex(std::string_view hex) {
    ensureSodium();
    Bytes out(hex.size() / 2);
    size_t len = 0;
    const char* end = nullptr;
    if (hex.size() % 2 != 0 ||
        sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr, &len, &end) != 0 ||
        end != hex.data() + hex.size())
        throw Error(ErrorCode::BadHex, "invalid hex string '" + std::string(hex) + "'");
    out.resize(len);
    return out;
}

Digest sha256(std::span<const std::uint8_t> data) {
    ensureSodium();
    Digest d;
    crypto_hash_sha256(d.bytes.data(), data.data(), data.size());
    return d;
}

Digest sha256(std::string_view data) {
    return sha256(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

Digest hashSecret(std::span<const std::uint8_t> secret) {
    if (secret.size() != Secret::size)
        throw Error(ErrorCode::WrongLength, "secret must be 32 bytes, got " + std::to_string(secret.size()));
    return sha256(secret);
}

DeterministicRng::DeterministicRng(std::uint64_t seed) {
    Bytes material;
    append(material, std::string_view("spoc-rng-v1"));
    appendU64(material, seed);
    root_ = sha256(material);
}

void DeterministicRng::fill(std::span<std::uint8_t> out) {
    ensureSodium();
    Bytes material(root_.bytes.begin(), root_.bytes.end());
    appendU64(material, counter_++);
    const Digest blockSeed = sha256(material);
    static_assert(randombytes_SEEDBYTES == 32);
    randombytes_buf_deterministic(out.data(), out.size(), blockSeed.bytes.data());
}

std::uint64_t DeterministicRng::nextU64() {
    std::array<std::uint8_t, 8> buf{};
    fill(buf);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[i]) << (8 * i);
    return v;
}

Secret generateSecret(std::uint64_t seed) {
    DeterministicRng rng(seed);
    return generateSecret(rng);
}

Secret generateSecret(DeterministicRng& rng) {
    Secret s;
    do {
        rng.fill(s.bytes);
    } while (s.isZero());
    return s;
}

ResultKeys ResultKeys::generate(DeterministicRng& rng) {
    ensureSodium();
    ResultKeys k;
    rng.fill(k.encryptionKey.bytes);
    std::array<std::uint8_t, crypto_sign_SEEDBYTES> seed{};
    rng.fill(seed);
    crypto_sign_seed_keypair(k.verifyKey.bytes.data(), k.signingKey.data(), seed.data());
    sodium_memzero(seed.data(), seed.size());
    return k;
}

KeyId ResultKeys::keyId() const {
    Bytes material;
    append(material, std::string_view("spoc-key-id-v1"));
    append(material, verifyKey.bytes);
    const Digest d = sha256(material);
    KeyId id;
    std::memcpy(id.bytes.data(), d.bytes.data(), id.bytes.size());
    return id;
}

ProtectedResult protectResult(std::span<const std::uint8_t> plaintext, const ResultKeys& keys, const Nonce& nonce) {
    ensureSodium();
    ProtectedResult out;
    out.keyId = keys.keyId();
    out.nonce = nonce;
    out.ciphertext.resize(plaintext.size() + crypto_aead_xchacha20poly1305_ietf_ABYTES);
    unsigned long long clen = 0;
    crypto_aead_xchacha20poly1305_ietf_encrypt(out.ciphertext.data(), &clen, plaintext.data(), plaintext.size(),
                                               out.keyId.bytes.data(), out.keyId.bytes.size(), nullptr,
                                               nonce.bytes.data(), keys.encryptionKey.bytes.data());
    out.ciphertext.resize(clen);
    const Bytes msg = signedMessage(out.keyId, out.nonce, out.ciphertext);
    crypto_sign_detached(out.signature.bytes.data(), nullptr, msg.data(), msg.size(), keys.signingKey.data());
    return out;
}

bool verifyResultSignature(const ProtectedResult& result, const VerifyKey& verifyKey) {
    ensureSodium();
    const Bytes msg = signedMessage(result.keyId, result.nonce, result.ciphertext);
    return crypto_sign_verify_detached(result.signature.bytes.data(), msg.data(), msg.size(),
                                       verifyKey.bytes.data()) == 0;
}

Bytes openResult(const ProtectedResult& result, const ResultKeys& keys) {
    ensureSodium();
    if (result.keyId != keys.keyId()) throw Error(ErrorCode::WrongKey, "result was protected for other keys");
    if (!verifyResultSignature(result, keys.verifyKey))
        throw Error(ErrorCode::TamperDetected, "result signature does not verify");
    if (result.ciphertext.size() < crypto_aead_xchacha20poly1305_ietf_ABYTES)
        throw Error(ErrorCode::TamperDetected, "ciphertext truncated");
    Bytes plain(result.ciphertext.size() - crypto_aead_xchacha20poly1305_ietf_ABYTES);
    unsigned long long plen = 0;
    if (crypto_aead_xchacha20poly1305_ietf_decrypt(plain.data(), &plen, nullptr, result.ciphertext.data(),
                                                   result.ciphertext.size(), result.keyId.bytes.data(),
                                                   result.keyId.bytes.size(), result.nonce.bytes.data(),
                                                   keys.encryptionKey.bytes.data()) != 0)
        throw Error(ErrorCode::TamperDetected, "authentication tag mismatch");
    plain.resize(plen);
    return plain;
}

SealedBlob seal(const PlatformKey& platform, const Measurement& identity, std::span<const std::uint8_t> state,
                const Nonce& nonce) {
    ensureSodium();
    const EncryptionKey key = sealKey(platform, identity);
    SealedBlob blob;
    blob.measurement = identity;
    blob.nonce = nonce;
    blob.ciphertext.resize(state.size() + crypto_aead_xchacha20poly1305_ietf_ABYTES);
    unsigned long long clen = 0;
    crypto_aead_xchacha20poly1305_ietf_encrypt(blob.ciphertext.data(), &clen, state.data(), state.size(),
                                               identity.bytes.data(), identity.bytes.size(), nullptr,
                                               nonce.bytes.data(), key.bytes.data());
    blob.ciphertext.resize(clen);
    return blob;
}

Bytes unseal(const PlatformKey& platform, const Measurement& identity, const SealedBlob& blob) {
    ensureSodium();
    if (blob.ciphertext.size() < crypto_aead_xchacha20poly1305_ietf_ABYTES)
        throw Error(ErrorCode::IdentityMismatch, "sealed blob truncated");
    const EncryptionKey key = sealKey(platform, identity);
    Bytes plain(blob.ciphertext.size() - crypto_aead_xchacha20poly1305_ietf_ABYTES);
    unsigned long long plen = 0;
    if (crypto_aead_xchacha20poly1305_ietf_decrypt(plain.data(), &plen, nullptr, blob.ciphertext.data(),
                                                   blob.ciphertext.size(), identity.bytes.data(),
                                                   identity.bytes.size(), blob.nonce.bytes.data(),
                                                   key.bytes.data()) != 0)
        throw Error(ErrorCode::IdentityMismatch, "blob was not sealed by this enclave identity");
    plain.resize(plen);
    return plain;
}

} // namespace spoc
