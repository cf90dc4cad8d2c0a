#include "spoc/contract.hpp"

namespace spoc {

std::string_view toString(TaskState state) {
    switch (state) {
    case TaskState::Open: return "Open";
    case TaskState::Claimed: return "Claimed";
    case TaskState::Completed: return "Completed";
    case TaskState::Closed: return "Closed";
    case TaskState::TimedOutDead: return "TimedOutDead";
    }
    return "?";
}

std::string_view toString(Refusal refusal) {
    switch (refusal) {
    case Refusal::ValueBelowThreshold: return "ValueBelowThreshold";
    case Refusal::NoSuchTask: return "NoSuchTask";
    case Refusal::AlreadyClaimed: return "AlreadyClaimed";
    case Refusal::Completed: return "Completed";
    case Refusal::TimedOut: return "TimedOut";
    case Refusal::NotClaimant: return "NotClaimant";
    case Refusal::NotClaimed: return "NotClaimed";
    case Refusal::AlreadyCompleted: return "AlreadyCompleted";
    case Refusal::BadSecret: return "BadSecret";
    case Refusal::NotRequestor: return "NotRequestor";
    case Refusal::NotCompleted: return "NotCompleted";
    case Refusal::NotExpired: return "NotExpired";
    }
    return "?";
}

TaskState Task::state() const {
    if (timedOut) return TaskState::TimedOutDead;
    if (completed) return TaskState::Completed;
    if (claimed) return TaskState::Claimed;
    return TaskState::Open;
}

Contract::Contract(Money threshold) : threshold_(threshold) {
    if (threshold.isZero()) throw Error(ErrorCode::ConfigInvalid, "THRESHOLD must be positive");
}

const Task* Contract::find(TaskId taskId) const {
    auto it = tasks_.find(taskId);
    return it == tasks_.end() ? nullptr : &it->second;
}

std::optional<TaskState> Contract::stateOf(TaskId taskId) const {
    if (const Task* t = find(taskId)) return t->state();
    if (taskId < numTasks_) return TaskState::Closed;
    return std::nullopt;
}

Money Contract::heldFor(TaskId taskId) const {
    const Task* t = find(taskId);
    if (t == nullptr) return Money{};
    switch (t->state()) {
    case TaskState::Open: return t->payment + t->requestorDeposit;
    case TaskState::Claimed: return t->payment + t->requestorDeposit + t->executionNodeDeposit;
    case TaskState::Completed: return t->payment + t->requestorDeposit;
    case TaskState::TimedOutDead:
        return t->requestorDeposit + (t->claimed ? t->executionNodeDeposit : Money{});
    case TaskState::Closed: break;
    }
    return Money{};
}

Money Contract::totalHeld() const {
    Money sum;
    for (const auto& [id, task] : tasks_) sum += heldFor(id);
    return sum;
}

CallOutcome Contract::submitTask(CallContext& ctx, const std::string& functionName, const Digest& hashLock,
                                 Seconds expires) {
    if (ctx.value() < threshold_) {
        ctx.transfer(ctx.sender(), ctx.value());
        return CallOutcome::refuse(Refusal::ValueBelowThreshold);
    }
    const TaskId id = numTasks_++;
    Task t;
    t.functionName = functionName;
    t.hashLock = hashLock;
    t.requestor = ctx.sender();
    t.payment = ctx.value() - threshold_;
    t.requestorDeposit = threshold_;
    t.start = ctx.now();
    t.expires = expires;
    tasks_.emplace(id, t);
    ctx.emit(EventKind::TaskSubmitted, id,
             {{"functionName", functionName},
              {"hashLock", hashLock.hex()},
              {"requestor", t.requestor.hex()},
              {"payment", toDecimal(t.payment)},
              {"requestorDeposit", toDecimal(t.requestorDeposit)},
              {"start", std::to_string(t.start)},
              {"expires", std::to_string(expires)}});
    return CallOutcome::accept(id);
}

CallOutcome Contract::claimTask(CallContext& ctx, TaskId taskId) {
    auto refuse = [&](Refusal why) {
        ctx.transfer(ctx.sender(), ctx.value());
        return CallOutcome::refuse(why);
    };
    if (ctx.value() < threshold_) return refuse(Refusal::ValueBelowThreshold);
    auto it = tasks_.find(taskId);
    if (it == tasks_.end()) return refuse(Refusal::NoSuchTask);
    Task& t = it->second;
    if (t.timedOut) return refuse(Refusal::TimedOut);
    if (t.claimed) return refuse(Refusal::AlreadyClaimed);
    if (t.completed) return refuse(Refusal::Completed);

    t.executionNode = ctx.sender();
    t.executionNodeDeposit = ctx.value();
    t.claimed = true;
    ctx.emit(EventKind::TaskClaimed, taskId,
             {{"executionNode", t.executionNode.hex()}, {"executionNodeDeposit", toDecimal(t.executionNodeDeposit)}});
    return CallOutcome::accept(taskId);
}

CallOutcome Contract::finalizeExecutionNode(CallContext& ctx, TaskId taskId, const Secret& secret) {
    auto it = tasks_.find(taskId);
    // A missing record reads as all-zero, so its execution node is the null account.
    if (it == tasks_.end() || it->second.executionNode != ctx.sender()) return CallOutcome::refuse(Refusal::NotClaimant);
    Task& t = it->second;
    if (!t.claimed) return CallOutcome::refuse(Refusal::NotClaimed);
    if (t.completed) return CallOutcome::refuse(Refusal::AlreadyCompleted);
    if (t.timedOut) return CallOutcome::refuse(Refusal::TimedOut);
    if (hashSecret(secret) != t.hashLock) return CallOutcome::refuse(Refusal::BadSecret);

    t.completed = true;
    ctx.transfer(ctx.sender(), t.executionNodeDeposit);
    ctx.emit(EventKind::TaskFinished, taskId, {{"executionNode", t.executionNode.hex()}, {"secret", secret.hex()}});
    return CallOutcome::accept(taskId);
}

CallOutcome Contract::finalizeRequestor(CallContext& ctx, TaskId taskId) {
    auto it = tasks_.find(taskId);
    if (it == tasks_.end() || it->second.requestor != ctx.sender()) return CallOutcome::refuse(Refusal::NotRequestor);
    const Task t = it->second;
    if (!t.claimed) return CallOutcome::refuse(Refusal::NotClaimed);
    if (!t.completed) return CallOutcome::refuse(Refusal::NotCompleted);

    ctx.transfer(ctx.sender(), t.requestorDeposit);
    ctx.transfer(t.executionNode, t.payment);
    tasks_.erase(it);
    return CallOutcome::accept(taskId);
}

CallOutcome Contract::timeout(CallContext& ctx, TaskId taskId) {
    auto it = tasks_.find(taskId);
    if (it == tasks_.end() || it->second.requestor != ctx.sender()) return CallOutcome::refuse(Refusal::NotRequestor);
    Task& t = it->second;
    if (t.completed) return CallOutcome::refuse(Refusal::AlreadyCompleted);
    if (t.timedOut) return CallOutcome::refuse(Refusal::TimedOut);
    // strict: now > start + expires, written to avoid overflow
    const bool expired = ctx.now() > t.start && ctx.now() - t.start > t.expires;
    if (!expired) return CallOutcome::refuse(Refusal::NotExpired);

    t.timedOut = true;
    ctx.transfer(t.requestor, t.payment);
    ctx.emit(EventKind::TaskTimedOut, taskId,
             {{"refunded", toDecimal(t.payment)},
              {"lockedRequestorDeposit", toDecimal(t.requestorDeposit)},
              {"lockedExecutionNodeDeposit", toDecimal(t.claimed ? t.executionNodeDeposit : Money{})}});
    return CallOutcome::accept(taskId);
}

CallOutcome Contract::dispatch(CallContext& ctx, const ContractCall& call) {
    return std::visit(
        [&](const auto& c) -> CallOutcome {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SubmitTaskCall>)
                return submitTask(ctx, c.functionName, c.hashLock, c.expires);
            else if constexpr (std::is_same_v<T, ClaimTaskCall>)
                return claimTask(ctx, c.taskId);
            else if constexpr (std::is_same_v<T, FinalizeExecutionNodeCall>)
                return finalizeExecutionNode(ctx, c.taskId, c.secret);
            else if constexpr (std::is_same_v<T, FinalizeRequestorCall>)
                return finalizeRequestor(ctx, c.taskId);
            else
                return timeout(ctx, c.taskId);
        },
        call);
}

} // namespace spoc
