#include "spoc/enclave.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace spoc {

namespace {

void putU32(Bytes& out, std::uint32_t v) {
    for (int i = 3; i >= 0; --i) out.push_back(std::uint8_t(v >> (8 * i)));
}

void putBlob(Bytes& out, std::span<const std::uint8_t> data) {
    putU32(out, std::uint32_t(data.size()));
    out.insert(out.end(), data.begin(), data.end());
}

void putString(Bytes& out, std::string_view s) {
    putBlob(out, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | in_[pos_++];
        return v;
    }
    std::span<const std::uint8_t> take(std::size_t n) {
        need(n);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    Bytes blob() {
        const auto n = u32();
        auto s = take(n);
        return Bytes(s.begin(), s.end());
    }
    bool done() const { return pos_ == in_.size(); }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw Error(ErrorCode::IdentityMismatch, "sealed state truncated");
    }
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

} // namespace

Measurement FunctionImage::measurement() const {
    Bytes canonical;
    putString(canonical, "spoc-image-v1");
    putString(canonical, name);
    putString(canonical, bodyId);
    putU32(canonical, version);
    return Measurement{sha256(canonical).bytes};
}

FunctionBody builtinBody(const std::string& bodyId) {
    if (bodyId == "identity") return [](std::span<const std::uint8_t> in) { return Bytes(in.begin(), in.end()); };
    if (bodyId == "reverse") return [](std::span<const std::uint8_t> in) { return Bytes(in.rbegin(), in.rend()); };
    if (bodyId == "sha256")
        return [](std::span<const std::uint8_t> in) {
            const Digest d = sha256(in);
            return Bytes(d.bytes.begin(), d.bytes.end());
        };
    if (bodyId == "sum")
        return [](std::span<const std::uint8_t> in) {
            std::uint64_t total = 0;
            for (auto b : in) total += b;
            Bytes out;
            for (int i = 7; i >= 0; --i) out.push_back(std::uint8_t(total >> (8 * i)));
            return out;
        };
    if (bodyId == "fault")
        return [](std::span<const std::uint8_t>) -> Bytes { throw std::runtime_error("function body fault"); };
    throw Error(ErrorCode::UnknownFunction, "no built-in body '" + bodyId + "'");
}

FunctionStore FunctionStore::builtin() {
    FunctionStore store;
    for (const char* id : {"identity", "reverse", "sha256", "sum", "fault"})
        store.add({id, id, 1, Money(3'000'000'000'000'000'000ULL), builtinBody(id)});
    return store;
}

FunctionStore FunctionStore::fromManifest(const std::string& jsonText) {
    FunctionStore store;
    try {
        const auto doc = nlohmann::json::parse(jsonText);
        for (const auto& entry : doc.at("functions")) {
            FunctionImage image;
            image.name = entry.at("name").get<std::string>();
            image.bodyId = entry.at("body").get<std::string>();
            image.version = entry.value("version", 1u);
            const auto& cost = entry.at("resourceCost");
            image.resourceCost = cost.is_string() ? parseMoney(cost.get<std::string>()) : Money(cost.get<std::uint64_t>());
            image.body = builtinBody(image.bodyId);
            if (entry.contains("measurement")) {
                const auto declared = Measurement::fromHex(entry.at("measurement").get<std::string>());
                if (declared != image.measurement())
                    throw Error(ErrorCode::ConfigInvalid, "manifest measurement mismatch for '" + image.name + "'");
            }
            store.add(std::move(image));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigInvalid, std::string("function manifest: ") + e.what());
    }
    return store;
}

FunctionStore FunctionStore::fromManifestFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open manifest " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return fromManifest(ss.str());
}

void FunctionStore::add(FunctionImage image) {
    auto name = image.name;
    images_.insert_or_assign(std::move(name), std::move(image));
}

const FunctionImage& FunctionStore::find(const std::string& name) const {
    auto it = images_.find(name);
    if (it == images_.end()) throw Error(ErrorCode::UnknownFunction, "function '" + name + "' not in store");
    return it->second;
}

Nonce NonceRegistry::issue(DeterministicRng& rng) {
    Nonce n;
    do {
        n = rng.draw<Nonce>();
    } while (issued_.contains(n));
    issued_.insert(n);
    return n;
}

bool NonceRegistry::consume(const Nonce& nonce) {
    if (!issued_.contains(nonce) || spent_.contains(nonce)) return false;
    spent_.insert(nonce);
    return true;
}

std::string_view toString(EnclaveState state) {
    switch (state) {
    case EnclaveState::Created: return "Created";
    case EnclaveState::Attested: return "Attested";
    case EnclaveState::Provisioned: return "Provisioned";
    case EnclaveState::Executed: return "Executed";
    case EnclaveState::Destroyed: return "Destroyed";
    }
    return "?";
}

EnclaveInstance::EnclaveInstance(const FunctionImage& image, EnclavePlatform& platform)
    : image_(image), measurement_(image.measurement()), platform_(&platform), id_(platform.nextInstance++) {}

EnclaveInstance instantiate(const FunctionStore& store, const std::string& name, EnclavePlatform& platform) {
    return EnclaveInstance(store.find(name), platform);
}

FlowTag EnclaveInstance::tag(FlowItem item) const { return {data_ ? data_->flowScope : std::string{}, item}; }

void EnclaveInstance::grant(FlowItem item, Principal p, const char* via) {
    if (platform_->flow != nullptr) platform_->flow->grant(tag(item), p, via);
}

AttestationQuote EnclaveInstance::attest(const Measurement& expected, const Nonce& nonce, NonceRegistry& verifier,
                                         Principal requestor) {
    if (state_ != EnclaveState::Created)
        throw Error(ErrorCode::InvalidState, "attest requires a fresh instance, state is " + std::string(toString(state_)));
    AttestationQuote quote{measurement_, platform_->rng.draw<Digest>(), nonce};
    if (quote.measurement != expected)
        throw Error(ErrorCode::MeasurementMismatch, "enclave reports " + quote.measurement.hex());
    if (!verifier.consume(quote.nonce)) throw Error(ErrorCode::StaleNonce, "nonce not fresh");
    channelKey_ = quote.channelBindingKey;
    peer_ = requestor;
    state_ = EnclaveState::Attested;
    return quote;
}

void EnclaveInstance::provision(Principal caller, ProvisionedData data) {
    if (state_ != EnclaveState::Attested) throw Error(ErrorCode::NotAttested, "no attested channel");
    if (!peer_ || *peer_ != caller) throw Error(ErrorCode::WrongPrincipal, caller.str() + " is not the channel peer");
    data_ = std::move(data);
    for (auto item : {FlowItem::Secret, FlowItem::Inputs, FlowItem::EncryptionKey, FlowItem::SigningKey}) {
        grant(item, caller, "provision");
        grant(item, principal(), "provision");
    }
    state_ = EnclaveState::Provisioned;
}

ExecutionOutput EnclaveInstance::execute() {
    if (state_ != EnclaveState::Provisioned) throw Error(ErrorCode::NotProvisioned, "nothing to execute");
    platform_->resourceSpent += image_.resourceCost;
    Bytes plain;
    try {
        plain = image_.body(data_->inputs);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ExecutionFault, e.what());
    }
    grant(FlowItem::PlaintextResult, principal(), "execute");
    ExecutionOutput out{protectResult(plain, data_->keys, platform_->rng.draw<Nonce>()), data_->secret};
    plaintextResult_ = std::move(plain);
    grant(FlowItem::Secret, platform_->host(), "execute");
    state_ = EnclaveState::Executed;
    return out;
}

void EnclaveInstance::destroy() {
    if (platform_->flow != nullptr) platform_->flow->revokeEverywhere(principal(), "destroy");
    if (data_) {
        std::fill(data_->secret.bytes.begin(), data_->secret.bytes.end(), 0);
        std::fill(data_->keys.signingKey.begin(), data_->keys.signingKey.end(), 0);
    }
    data_.reset();
    plaintextResult_.reset();
    peer_.reset();
    state_ = EnclaveState::Destroyed;
}

SealedBlob EnclaveInstance::seal() {
    if (state_ != EnclaveState::Provisioned) throw Error(ErrorCode::InvalidState, "only provisioned state can be sealed");
    Bytes state;
    putBlob(state, data_->secret.bytes);
    putBlob(state, data_->keys.encryptionKey.bytes);
    putBlob(state, data_->keys.signingKey);
    putBlob(state, data_->keys.verifyKey.bytes);
    putU32(state, std::uint32_t(peer_->kind));
    putU32(state, peer_->index);
    putString(state, data_->flowScope);
    putBlob(state, data_->inputs);
    return spoc::seal(platform_->sealRoot, measurement_, state, platform_->rng.draw<Nonce>());
}

void EnclaveInstance::unseal(const SealedBlob& blob) {
    if (state_ != EnclaveState::Created) throw Error(ErrorCode::InvalidState, "unseal requires a fresh instance");
    const Bytes state = spoc::unseal(platform_->sealRoot, measurement_, blob);
    Reader r(state);
    ProvisionedData d;
    d.secret = Secret::fromSpan(r.blob());
    d.keys.encryptionKey = EncryptionKey::fromSpan(r.blob());
    const Bytes sk = r.blob();
    if (sk.size() != d.keys.signingKey.size()) throw Error(ErrorCode::IdentityMismatch, "bad signing key in blob");
    std::copy(sk.begin(), sk.end(), d.keys.signingKey.begin());
    d.keys.verifyKey = VerifyKey::fromSpan(r.blob());
    const std::uint32_t kind = r.u32();
    if (kind > std::uint32_t(Principal::Kind::Public)) throw Error(ErrorCode::IdentityMismatch, "bad peer in blob");
    Principal peer{Principal::Kind(kind), r.u32()};
    const Bytes scope = r.blob();
    d.flowScope.assign(scope.begin(), scope.end());
    d.inputs = r.blob();
    peer_ = peer;
    data_ = std::move(d);
    for (auto item : {FlowItem::Secret, FlowItem::Inputs, FlowItem::EncryptionKey, FlowItem::SigningKey})
        grant(item, principal(), "unseal");
    state_ = EnclaveState::Provisioned;
}

std::optional<Bytes> EnclaveInstance::hostRead(FlowItem item) {
    const Principal host = platform_->host();
    const bool allowed = platform_->flow != nullptr
                             ? platform_->flow->attemptRead(tag(item), host, "host-read")
                             : item == FlowItem::Secret && state_ == EnclaveState::Executed;
    if (!allowed || !data_) return std::nullopt;
    switch (item) {
    case FlowItem::Secret: return Bytes(data_->secret.bytes.begin(), data_->secret.bytes.end());
    case FlowItem::Inputs: return data_->inputs;
    case FlowItem::EncryptionKey: return Bytes(data_->keys.encryptionKey.bytes.begin(), data_->keys.encryptionKey.bytes.end());
    case FlowItem::SigningKey: return Bytes(data_->keys.signingKey.begin(), data_->keys.signingKey.end());
    case FlowItem::PlaintextResult: return plaintextResult_;
    }
    return std::nullopt;
}

} // namespace spoc
