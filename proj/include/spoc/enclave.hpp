#pragma once

// Simulated trusted execution: measured function images, attestation with a
// verifier-side nonce registry, provisioning over the attested channel,
// execution, sealing and teardown.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "spoc/crypto.hpp"
#include "spoc/infoflow.hpp"
#include "spoc/money.hpp"

namespace spoc {

using FunctionBody = std::function<Bytes(std::span<const std::uint8_t>)>;

struct FunctionImage {
    std::string name;
    std::string bodyId;
    std::uint32_t version = 1;
    Money resourceCost; // C_i, charged to the host on every execution
    FunctionBody body;

    // SHA-256 over a length-prefixed encoding of (name, bodyId, version).
    Measurement measurement() const;
};

// Built-in deterministic bodies: identity, reverse, sha256, sum, fault.
FunctionBody builtinBody(const std::string& bodyId);

class FunctionStore {
public:
    static FunctionStore builtin();
    // {"functions": [{"name", "body", "version", "resourceCost", "measurement"?}]}
    static FunctionStore fromManifest(const std::string& jsonText);
    static FunctionStore fromManifestFile(const std::string& path);

    void add(FunctionImage image);
    const FunctionImage& find(const std::string& name) const; // throws UnknownFunction
    bool contains(const std::string& name) const { return images_.contains(name); }
    const std::map<std::string, FunctionImage>& images() const { return images_; }

private:
    std::map<std::string, FunctionImage> images_;
};

struct AttestationQuote {
    Measurement measurement;
    Digest channelBindingKey;
    Nonce nonce;
};

// Verifier side of attestation: nonces it handed out and which were spent.
class NonceRegistry {
public:
    Nonce issue(DeterministicRng& rng);
    bool consume(const Nonce& nonce);

private:
    std::set<Nonce> issued_;
    std::set<Nonce> spent_;
};

// The execution node's machine: owns the seal root, meters compute and
// records information flow for every enclave it hosts.
struct EnclavePlatform {
    std::uint32_t hostIndex = 0;
    PlatformKey sealRoot;
    Money resourceSpent;
    InfoFlowLedger* flow = nullptr;
    DeterministicRng rng{0};
    std::uint32_t nextInstance = 0;

    Principal host() const { return Principal::nodeHost(hostIndex); }
};

enum class EnclaveState { Created, Attested, Provisioned, Executed, Destroyed };

std::string_view toString(EnclaveState state);

struct ProvisionedData {
    Secret secret;
    Bytes inputs;
    ResultKeys keys;
    std::string flowScope;
};

struct ExecutionOutput {
    ProtectedResult result;
    Secret secret;
};

class EnclaveInstance {
public:
    EnclaveInstance(const FunctionImage& image, EnclavePlatform& platform);

    EnclaveState state() const { return state_; }
    const FunctionImage& image() const { return image_; }
    Measurement measurement() const { return measurement_; }
    Principal principal() const { return Principal::enclave(id_); }
    std::optional<Principal> channelPeer() const { return peer_; }
    bool holdsProvisionedData() const { return data_.has_value(); }

    // Requestor-side remote attestation. Throws MeasurementMismatch or
    // StaleNonce and leaves the instance untouched on failure.
    AttestationQuote attest(const Measurement& expected, const Nonce& nonce, NonceRegistry& verifier,
                            Principal requestor);

    // Throws NotAttested unless in state Attested; WrongPrincipal unless the
    // caller is the channel peer.
    void provision(Principal caller, ProvisionedData data);

    // Runs the body on the provisioned inputs and releases the protected
    // result plus the secret to the host. Throws NotProvisioned or ExecutionFault.
    ExecutionOutput execute();

    void destroy();

    SealedBlob seal();
    // Restart path: Created -> Provisioned without a new attestation.
    void unseal(const SealedBlob& blob);

    // The untrusted host poking at enclave memory.
    std::optional<Bytes> hostRead(FlowItem item);

private:
    FlowTag tag(FlowItem item) const;
    void grant(FlowItem item, Principal p, const char* via);

    FunctionImage image_;
    Measurement measurement_;
    EnclavePlatform* platform_;
    std::uint32_t id_;
    EnclaveState state_ = EnclaveState::Created;
    std::optional<Principal> peer_;
    Digest channelKey_;
    std::optional<ProvisionedData> data_;
    std::optional<Bytes> plaintextResult_;
};

EnclaveInstance instantiate(const FunctionStore& store, const std::string& name, EnclavePlatform& platform);

} // namespace spoc
