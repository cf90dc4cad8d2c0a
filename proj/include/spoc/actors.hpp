#pragma once

// Requestor, execution-node and third-party behaviour as deterministic state
// machines. Each step consumes one observation and returns the protocol
// actions the harness should perform on the actor's behalf.

#include <deque>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spoc/contract.hpp"
#include "spoc/enclave.hpp"
#include "spoc/ledger.hpp"

namespace spoc {

enum class RequestorStrategy { Honest, NoConfirm, WithholdInput };
enum class NodeStrategy { Honest, ClaimOnly, ComputeNoDeliver };
enum class Destination { Requestor, ThirdParty };

// CLI names: honest, no-confirm, withhold-input, claim-only, compute-no-deliver.
std::string_view toString(RequestorStrategy s);
std::string_view toString(NodeStrategy s);
std::string_view toString(Destination d);
RequestorStrategy parseRequestorStrategy(std::string_view name);
NodeStrategy parseNodeStrategy(std::string_view name);
Destination parseDestination(std::string_view name);

struct TaskRequest {
    std::string functionName = "identity";
    Bytes inputs;
    Money valueOfResult;  // V
    Money offeredPayment; // P
    Seconds expires = 3600;
    Tier tier = Tier::Standard;
    Destination destination = Destination::Requestor;
};

// ---- observations -------------------------------------------------------

struct Started {};
struct TxConfirmed {
    Receipt receipt;
};
struct TxRejected {
    std::string function;
    ErrorCode error;
};
struct EventObserved {
    LedgerEvent event;
};
struct Wake {
    TaskId taskId;
};
struct EnclaveReady {
    TaskId taskId;
    std::uint32_t node;
    AccountId nodeAccount;
};
struct AttestationResult {
    TaskId taskId;
    std::uint32_t node;
    bool ok;
};
struct InputsProvisioned {
    TaskId taskId;
};
struct ExecutionFinished {
    TaskId taskId;
    std::optional<ExecutionOutput> output; // empty on a body fault
};
struct ResultReceived {
    TaskId taskId;
    ProtectedResult result;
};
struct DeliveryAcknowledged {
    TaskId taskId;
    ProtectedResult evidence;
};

using Observation = std::variant<Started, TxConfirmed, TxRejected, EventObserved, Wake, EnclaveReady,
                                 AttestationResult, InputsProvisioned, ExecutionFinished, ResultReceived,
                                 DeliveryAcknowledged>;

// ---- actions ------------------------------------------------------------

struct SendTx {
    ContractCall call;
    Money value;
};
struct SetTimer {
    TaskId taskId;
    Timestamp at;
};
struct InstantiateEnclave {
    TaskId taskId;
    std::string functionName;
};
struct Attest {
    TaskId taskId;
    std::uint32_t node;
    Measurement expected;
    Nonce nonce;
};
struct Provision {
    TaskId taskId;
    std::uint32_t node;
    ProvisionedData data;
};
struct Execute {
    TaskId taskId;
};
struct DestroyEnclave {
    TaskId taskId;
};
struct Deliver {
    TaskId taskId;
    ProtectedResult result;
    Destination destination;
};
struct Acknowledge {
    TaskId taskId;
    ProtectedResult evidence;
};

using Action = std::variant<SendTx, SetTimer, InstantiateEnclave, Attest, Provision, Execute, DestroyEnclave, Deliver,
                            Acknowledge>;

std::string_view actionName(const Action& action);

// ---- actors -------------------------------------------------------------

struct RequestorState {
    RequestorStrategy strategy = RequestorStrategy::Honest;
    TaskRequest request;
    AccountId account;
    Principal self = Principal::requestor();
    Money deposit;                  // D_R, equal to the contract threshold
    Measurement allowedMeasurement; // only this image gets the inputs
    unsigned resubmitsLeft = 0;
    InfoFlowLedger* flow = nullptr;

    DeterministicRng rng{0};
    NonceRegistry nonces;

    // current request
    std::uint32_t requestSeq = 0;
    std::string flowScope;
    Secret secret;
    Digest hashLock;
    ResultKeys keys;
    std::optional<TaskId> taskId;
    std::optional<AccountId> claimant;
    bool attesting = false;
    bool provisioned = false;
    bool completedOnChain = false;
    bool resultValid = false;
    bool resultRejected = false;
    bool finalized = false;
    bool timedOut = false;
    bool refused = false;

    std::vector<std::string> calls;     // protocol calls in issue order
    std::vector<Digest> hashLocksUsed;  // one per submitted request
    std::vector<Secret> secretsUsed;
};

struct NodeState {
    NodeStrategy strategy = NodeStrategy::Honest;
    std::uint32_t index = 0;
    AccountId account;
    Money deposit; // D_E
    Destination deliverTo = Destination::Requestor;

    std::optional<TaskId> target;
    std::string functionName;
    bool claimed = false;
    bool enclaveLive = false;
    std::optional<ExecutionOutput> output;
    bool finalized = false;
    bool delivered = false;

    std::vector<std::string> calls;
};

struct ThirdPartyState {
    std::vector<TaskId> received;
};

std::vector<Action> requestorStep(RequestorState& state, const Observation& obs);
std::vector<Action> executionNodeStep(NodeState& state, const Observation& obs);
std::vector<Action> thirdPartyStep(ThirdPartyState& state, const Observation& obs);

// ---- result delivery ----------------------------------------------------

struct Message {
    std::uint64_t seq = 0;
    Destination to = Destination::Requestor;
    TaskId taskId = 0;
    ProtectedResult result;
};

struct DeliveryReceipt {
    std::uint64_t seq = 0;
    Destination destination = Destination::Requestor;
};

class MessageQueue {
public:
    DeliveryReceipt push(Destination to, TaskId taskId, ProtectedResult result);
    std::optional<Message> pop();
    bool empty() const { return queue_.empty(); }
    // Network adversary: flips one ciphertext bit of every queued message.
    void tamperAll();

private:
    std::deque<Message> queue_;
    std::uint64_t next_ = 0;
};

DeliveryReceipt deliverResult(MessageQueue& queue, const ProtectedResult& result, Destination destination,
                              TaskId taskId);

} // namespace spoc
