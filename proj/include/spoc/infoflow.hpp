#pragma once

// Tracks which principals can see each sensitive value of a task. Grants and
// revocations are append-only history; reads by principals outside a value's
// visibility set are recorded as violations.

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace spoc {

struct Principal {
    enum class Kind { Requestor, NodeHost, Enclave, ThirdParty, Public };
    Kind kind = Kind::Public;
    std::uint32_t index = 0;

    static Principal requestor(std::uint32_t i = 0) { return {Kind::Requestor, i}; }
    static Principal nodeHost(std::uint32_t i) { return {Kind::NodeHost, i}; }
    static Principal enclave(std::uint32_t i) { return {Kind::Enclave, i}; }
    static Principal thirdParty(std::uint32_t i = 0) { return {Kind::ThirdParty, i}; }
    static Principal everyone() { return {Kind::Public, 0}; }

    std::string str() const;

    friend auto operator<=>(const Principal&, const Principal&) = default;
    friend bool operator==(const Principal&, const Principal&) = default;
};

enum class FlowItem { Secret, Inputs, EncryptionKey, SigningKey, PlaintextResult };

std::string_view toString(FlowItem item);

struct FlowTag {
    std::string scope; // one per task request
    FlowItem item = FlowItem::Secret;

    friend auto operator<=>(const FlowTag&, const FlowTag&) = default;
    friend bool operator==(const FlowTag&, const FlowTag&) = default;
};

struct FlowRecord {
    std::uint64_t seq = 0;
    FlowTag tag;
    Principal principal;
    bool granted = true;
    std::string via;
};

struct FlowViolation {
    std::uint64_t seq = 0;
    FlowTag tag;
    Principal reader;
    std::string via;
};

class InfoFlowLedger {
public:
    void grant(const FlowTag& tag, Principal p, std::string via);
    void revoke(const FlowTag& tag, Principal p, std::string via);
    void revokeEverywhere(Principal p, std::string via);

    // True if p is in the set directly or the value has been published.
    bool visible(const FlowTag& tag, Principal p) const;
    std::set<Principal> visibility(const FlowTag& tag) const;

    // Records a violation when the read is not allowed.
    bool attemptRead(const FlowTag& tag, Principal reader, std::string via);

    const std::vector<FlowRecord>& history() const { return history_; }
    const std::vector<FlowViolation>& violations() const { return violations_; }
    std::uint64_t seq() const { return seq_; }

private:
    std::vector<FlowRecord> history_;
    std::vector<FlowViolation> violations_;
    std::set<std::pair<FlowTag, Principal>> current_;
    std::uint64_t seq_ = 0;
};

} // namespace spoc
