#include <catch_amalgamated.hpp>

#include "spoc/crypto.hpp"

using namespace spoc;

TEST_CASE("SHA-256 published vectors") {
    CHECK(sha256(std::string_view("")).hex() == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256(std::string_view("abc")).hex() == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256(std::string_view("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq")).hex() ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("hashSecret takes exactly 32 bytes") {
    // value frozen from Python's hashlib.sha256(bytes(32))
    CHECK(hashSecret(Secret{}).hex() == "66687aadf862bd776c8fc18b8e9f8e20089714856ee233b3902a591d0d5f2925");
    const Bytes short31(31, 0);
    CHECK_THROWS_MATCHES(hashSecret(short31), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == ErrorCode::WrongLength;
                         }));
}

TEST_CASE("hex round trip and rejection") {
    const Bytes b{0x00, 0xab, 0xff};
    CHECK(toHex(b) == "00abff");
    CHECK(fromHex("00abff") == b);
    CHECK_THROWS_AS(fromHex("0g"), Error);
    CHECK_THROWS_AS(fromHex("abc"), Error);
    CHECK_THROWS_AS(Secret::fromHex("00"), Error);
}

TEST_CASE("seeded generation is reproducible and never zero") {
    CHECK(generateSecret(42) == generateSecret(42));
    CHECK(generateSecret(42) != generateSecret(43));
    CHECK_FALSE(generateSecret(0).isZero());
    DeterministicRng a(9), b(9);
    for (int i = 0; i < 10; ++i) CHECK(a.nextU64() == b.nextU64());
}

TEST_CASE("protected results open only with the right keys") {
    DeterministicRng rng(1);
    const ResultKeys keys = ResultKeys::generate(rng);
    const ResultKeys other = ResultKeys::generate(rng);
    const Bytes plain{'o', 'k'};
    const ProtectedResult r = protectResult(plain, keys, rng.draw<Nonce>());
    CHECK(openResult(r, keys) == plain);
    CHECK(verifyResultSignature(r, keys.verifyKey));
    CHECK_FALSE(verifyResultSignature(r, other.verifyKey));

    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::ParseError; // sentinel: no error
    };
    CHECK(code([&] { openResult(r, other); }) == ErrorCode::WrongKey);

    ProtectedResult t = r;
    t.ciphertext[0] ^= 1;
    CHECK(code([&] { openResult(t, keys); }) == ErrorCode::TamperDetected);
    t = r;
    t.nonce.bytes[3] ^= 0x80;
    CHECK(code([&] { openResult(t, keys); }) == ErrorCode::TamperDetected);
    t = r;
    t.signature.bytes[10] ^= 1;
    CHECK(code([&] { openResult(t, keys); }) == ErrorCode::TamperDetected);
}

TEST_CASE("sealed state is bound to platform and measurement") {
    DeterministicRng rng(3);
    const auto platform = rng.draw<PlatformKey>();
    const auto m = rng.draw<Measurement>();
    const Bytes state{1, 2, 3, 4};
    const SealedBlob blob = seal(platform, m, state, rng.draw<Nonce>());
    CHECK(unseal(platform, m, blob) == state);
    CHECK_THROWS_AS(unseal(platform, rng.draw<Measurement>(), blob), Error);
    CHECK_THROWS_AS(unseal(rng.draw<PlatformKey>(), m, blob), Error);
    SealedBlob bad = blob;
    bad.ciphertext.back() ^= 1;
    CHECK_THROWS_AS(unseal(platform, m, bad), Error);
}
