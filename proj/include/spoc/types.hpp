#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "spoc/crypto.hpp"
#include "spoc/money.hpp"

namespace spoc {

using AccountId = FixedBytes<20, struct AccountIdTag>;
using TaskId = std::uint64_t;
using Timestamp = std::uint64_t;
using Seconds = std::uint64_t;

inline const AccountId kNullAccount{};

enum class Tier { Slow, Standard, Fast };

std::string_view toString(Tier tier);
Tier parseTier(std::string_view name);

enum class EventKind { TaskSubmitted, TaskClaimed, TaskFinished, TaskTimedOut };

std::string_view toString(EventKind kind);
EventKind parseEventKind(std::string_view name);

using Payload = std::map<std::string, std::string>;

struct LedgerEvent {
    EventKind kind;
    TaskId taskId = 0;
    std::uint64_t blockHeight = 0;
    std::uint32_t index = 0; // position inside its block
    Payload payload;

    friend bool operator==(const LedgerEvent&, const LedgerEvent&) = default;
};

// One alternative per function of the escrow contract.
struct SubmitTaskCall {
    std::string functionName;
    Digest hashLock;
    Seconds expires = 0;
};
struct ClaimTaskCall {
    TaskId taskId = 0;
};
struct FinalizeExecutionNodeCall {
    TaskId taskId = 0;
    Secret secret;
};
struct FinalizeRequestorCall {
    TaskId taskId = 0;
};
struct TimeoutCall {
    TaskId taskId = 0;
};

using ContractCall =
    std::variant<SubmitTaskCall, ClaimTaskCall, FinalizeExecutionNodeCall, FinalizeRequestorCall, TimeoutCall>;

// Name used by the gas schedule: "submitTask", "claimTask", ...
std::string_view functionName(const ContractCall& call);
bool isPayable(const ContractCall& call);

inline constexpr std::string_view kDeployFunction = "deploy";

} // namespace spoc
