#pragma once

// The SPOC escrow contract as a state machine. Each public function mirrors
// one contract entry point; value and transfers go through a CallContext
// provided by the ledger so the contract itself never touches balances.

#include <map>
#include <optional>
#include <string>

#include "spoc/types.hpp"

namespace spoc {

enum class TaskState { Open, Claimed, Completed, Closed, TimedOutDead };

std::string_view toString(TaskState state);

enum class Refusal {
    ValueBelowThreshold,
    NoSuchTask,
    AlreadyClaimed,
    Completed,
    TimedOut,
    NotClaimant,
    NotClaimed,
    AlreadyCompleted,
    BadSecret,
    NotRequestor,
    NotCompleted,
    NotExpired,
};

std::string_view toString(Refusal refusal);

struct CallOutcome {
    bool accepted = false;
    std::optional<Refusal> refusal;
    std::optional<TaskId> taskId;

    static CallOutcome accept(std::optional<TaskId> id = std::nullopt) { return {true, std::nullopt, id}; }
    static CallOutcome refuse(Refusal why) { return {false, why, std::nullopt}; }

    friend bool operator==(const CallOutcome&, const CallOutcome&) = default;
};

struct Task {
    std::string functionName;
    Digest hashLock;
    AccountId requestor;
    Money payment;
    Money requestorDeposit;
    AccountId executionNode;
    Money executionNodeDeposit;
    bool claimed = false;
    bool completed = false;
    bool timedOut = false;
    Timestamp start = 0;
    Seconds expires = 0;

    TaskState state() const;

    friend bool operator==(const Task&, const Task&) = default;
};

class CallContext {
public:
    virtual ~CallContext() = default;

    virtual const AccountId& sender() const = 0;
    virtual Money value() const = 0;
    virtual Timestamp now() const = 0;
    // Pays out of the contract's own balance.
    virtual void transfer(const AccountId& to, Money amount) = 0;
    virtual void emit(EventKind kind, TaskId taskId, Payload payload) = 0;
};

class Contract {
public:
    explicit Contract(Money threshold);

    CallOutcome submitTask(CallContext& ctx, const std::string& functionName, const Digest& hashLock,
                           Seconds expires);
    CallOutcome claimTask(CallContext& ctx, TaskId taskId);
    CallOutcome finalizeExecutionNode(CallContext& ctx, TaskId taskId, const Secret& secret);
    CallOutcome finalizeRequestor(CallContext& ctx, TaskId taskId);
    CallOutcome timeout(CallContext& ctx, TaskId taskId);

    CallOutcome dispatch(CallContext& ctx, const ContractCall& call);

    Money threshold() const { return threshold_; }
    std::uint64_t numTasks() const { return numTasks_; }
    const std::map<TaskId, Task>& tasks() const { return tasks_; }
    const Task* find(TaskId taskId) const;

    // Closed for ids that were created and later deleted; nullopt for ids never issued.
    std::optional<TaskState> stateOf(TaskId taskId) const;

    // Funds the contract owes or has permanently locked for one task.
    Money heldFor(TaskId taskId) const;
    Money totalHeld() const;

    friend bool operator==(const Contract&, const Contract&) = default;

private:
    Money threshold_;
    std::uint64_t numTasks_ = 0;
    std::map<TaskId, Task> tasks_;
};

} // namespace spoc
