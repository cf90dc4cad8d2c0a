#include "spoc/actors.hpp"

namespace spoc {

std::string_view toString(RequestorStrategy s) {
    switch (s) {
    case RequestorStrategy::Honest: return "honest";
    case RequestorStrategy::NoConfirm: return "no-confirm";
    case RequestorStrategy::WithholdInput: return "withhold-input";
    }
    return "?";
}

std::string_view toString(NodeStrategy s) {
    switch (s) {
    case NodeStrategy::Honest: return "honest";
    case NodeStrategy::ClaimOnly: return "claim-only";
    case NodeStrategy::ComputeNoDeliver: return "compute-no-deliver";
    }
    return "?";
}

std::string_view toString(Destination d) { return d == Destination::Requestor ? "requestor" : "third-party"; }

RequestorStrategy parseRequestorStrategy(std::string_view name) {
    for (auto s : {RequestorStrategy::Honest, RequestorStrategy::NoConfirm, RequestorStrategy::WithholdInput})
        if (toString(s) == name) return s;
    throw Error(ErrorCode::ParseError, "unknown requestor strategy '" + std::string(name) + "'");
}

NodeStrategy parseNodeStrategy(std::string_view name) {
    for (auto s : {NodeStrategy::Honest, NodeStrategy::ClaimOnly, NodeStrategy::ComputeNoDeliver})
        if (toString(s) == name) return s;
    throw Error(ErrorCode::ParseError, "unknown node strategy '" + std::string(name) + "'");
}

Destination parseDestination(std::string_view name) {
    if (name == "requestor") return Destination::Requestor;
    if (name == "third-party") return Destination::ThirdParty;
    throw Error(ErrorCode::ParseError, "unknown destination '" + std::string(name) + "'");
}

std::string_view actionName(const Action& action) {
    static constexpr std::string_view names[] = {"sendTx",  "setTimer",  "instantiate", "attest",     "provision",
                                                 "execute", "destroy",   "deliver",     "acknowledge"};
    return names[action.index()];
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void newRequest(RequestorState& s, std::vector<Action>& out) {
    ++s.requestSeq;
    s.flowScope = "req" + std::to_string(s.requestSeq);
    s.secret = generateSecret(s.rng);
    s.hashLock = hashSecret(s.secret);
    s.keys = ResultKeys::generate(s.rng);
    s.taskId.reset();
    s.claimant.reset();
    s.attesting = s.provisioned = s.completedOnChain = false;
    s.resultValid = s.resultRejected = s.finalized = s.timedOut = s.refused = false;
    s.hashLocksUsed.push_back(s.hashLock);
    s.secretsUsed.push_back(s.secret);
    if (s.flow != nullptr) {
        for (auto item : {FlowItem::Secret, FlowItem::Inputs, FlowItem::EncryptionKey, FlowItem::SigningKey})
            s.flow->grant({s.flowScope, item}, s.self, "generate");
    }
    out.push_back(SendTx{SubmitTaskCall{s.request.functionName, s.hashLock, s.request.expires},
                         s.request.offeredPayment + s.deposit});
    s.calls.push_back("submitTask");
}

void maybeFinalize(RequestorState& s, std::vector<Action>& out) {
    if (!s.resultValid || !s.completedOnChain || s.finalized || !s.taskId) return;
    if (s.strategy == RequestorStrategy::NoConfirm) return;
    if (!s.calls.empty() && s.calls.back() == "finalizeRequestor") return;
    out.push_back(SendTx{FinalizeRequestorCall{*s.taskId}, Money{}});
    s.calls.push_back("finalizeRequestor");
}

bool mine(const RequestorState& s, TaskId id) { return s.taskId && *s.taskId == id; }

} // namespace

std::vector<Action> requestorStep(RequestorState& s, const Observation& obs) {
    std::vector<Action> out;
    std::visit(
        Overloaded{
            [&](const Started&) { newRequest(s, out); },
            [&](const TxConfirmed& c) {
                const Receipt& r = c.receipt;
                if (r.function == "submitTask") {
                    if (r.outcome.accepted && r.outcome.taskId) {
                        s.taskId = r.outcome.taskId;
                        out.push_back(SetTimer{*s.taskId, r.timestamp + s.request.expires + 1});
                    } else {
                        s.refused = true;
                    }
                } else if (r.function == "finalizeRequestor" && r.outcome.accepted) {
                    s.finalized = true;
                } else if (r.function == "timeout" && r.outcome.accepted) {
                    s.timedOut = true;
                    if (s.resubmitsLeft > 0) {
                        --s.resubmitsLeft;
                        newRequest(s, out);
                    }
                }
            },
            [&](const TxRejected&) {},
            [&](const EventObserved& e) {
                if (!mine(s, e.event.taskId)) return;
                if (e.event.kind == EventKind::TaskClaimed) {
                    s.claimant = AccountId::fromHex(e.event.payload.at("executionNode"));
                } else if (e.event.kind == EventKind::TaskFinished) {
                    s.completedOnChain = true;
                    maybeFinalize(s, out);
                }
            },
            [&](const Wake& w) {
                if (!mine(s, w.taskId) || s.resultValid || s.timedOut || s.finalized) return;
                out.push_back(SendTx{TimeoutCall{w.taskId}, Money{}});
                s.calls.push_back("timeout");
            },
            [&](const EnclaveReady& ready) {
                if (s.strategy == RequestorStrategy::WithholdInput) return;
                if (!mine(s, ready.taskId) || s.attesting || !s.claimant || *s.claimant != ready.nodeAccount) return;
                s.attesting = true;
                out.push_back(Attest{ready.taskId, ready.node, s.allowedMeasurement, s.nonces.issue(s.rng)});
                s.calls.push_back("attest");
            },
            [&](const AttestationResult& a) {
                if (!mine(s, a.taskId) || !a.ok || s.provisioned) return;
                s.provisioned = true;
                out.push_back(Provision{a.taskId, a.node, {s.secret, s.request.inputs, s.keys, s.flowScope}});
                s.calls.push_back("provision");
            },
            [&](const InputsProvisioned&) {},
            [&](const ExecutionFinished&) {},
            [&](const ResultReceived& rr) {
                if (!mine(s, rr.taskId) || s.resultValid) return;
                try {
                    (void)openResult(rr.result, s.keys);
                    s.resultValid = true;
                    if (s.flow != nullptr) s.flow->grant({s.flowScope, FlowItem::PlaintextResult}, s.self, "open");
                } catch (const Error&) {
                    s.resultRejected = true;
                }
                maybeFinalize(s, out);
            },
            [&](const DeliveryAcknowledged& ack) {
                if (!mine(s, ack.taskId) || s.resultValid) return;
                if (ack.evidence.keyId == s.keys.keyId() && verifyResultSignature(ack.evidence, s.keys.verifyKey))
                    s.resultValid = true;
                else
                    s.resultRejected = true;
                maybeFinalize(s, out);
            },
        },
        obs);
    return out;
}

std::vector<Action> executionNodeStep(NodeState& s, const Observation& obs) {
    std::vector<Action> out;
    auto onTarget = [&](TaskId id) { return s.target && *s.target == id; };
    auto release = [&] {
        if (s.enclaveLive) out.push_back(DestroyEnclave{*s.target});
        s.enclaveLive = false;
    };
    std::visit(
        Overloaded{
            [&](const EventObserved& e) {
                if (e.event.kind == EventKind::TaskSubmitted && !s.target) {
                    s.target = e.event.taskId;
                    s.functionName = e.event.payload.at("functionName");
                    s.claimed = s.finalized = s.delivered = false;
                    s.output.reset();
                    out.push_back(SendTx{ClaimTaskCall{e.event.taskId}, s.deposit});
                    s.calls.push_back("claim");
                } else if (e.event.kind == EventKind::TaskTimedOut && onTarget(e.event.taskId)) {
                    release();
                    s.target.reset();
                }
            },
            [&](const TxConfirmed& c) {
                const Receipt& r = c.receipt;
                if (r.function == "claimTask") {
                    if (!r.outcome.accepted) {
                        s.target.reset();
                        return;
                    }
                    s.claimed = true;
                    if (s.strategy == NodeStrategy::ClaimOnly) return;
                    s.enclaveLive = true;
                    out.push_back(InstantiateEnclave{*s.target, s.functionName});
                } else if (r.function == "finalizeExecutionNode" && r.outcome.accepted && s.output) {
                    s.finalized = true;
                    if (s.strategy == NodeStrategy::Honest) {
                        out.push_back(Deliver{*s.target, s.output->result, s.deliverTo});
                        s.calls.push_back("deliver");
                        s.delivered = true;
                    }
                    release();
                }
            },
            [&](const InputsProvisioned& p) {
                if (!onTarget(p.taskId) || !s.enclaveLive) return;
                out.push_back(Execute{p.taskId});
                s.calls.push_back("execute");
            },
            [&](const ExecutionFinished& f) {
                if (!onTarget(f.taskId)) return;
                if (!f.output) {
                    release();
                    return;
                }
                s.output = f.output;
                out.push_back(SendTx{FinalizeExecutionNodeCall{f.taskId, f.output->secret}, Money{}});
                s.calls.push_back("finalizeExecutionNode");
            },
            [&](const auto&) {},
        },
        obs);
    return out;
}

std::vector<Action> thirdPartyStep(ThirdPartyState& s, const Observation& obs) {
    std::vector<Action> out;
    if (const auto* rr = std::get_if<ResultReceived>(&obs)) {
        s.received.push_back(rr->taskId);
        out.push_back(Acknowledge{rr->taskId, rr->result});
    }
    return out;
}

DeliveryReceipt MessageQueue::push(Destination to, TaskId taskId, ProtectedResult result) {
    Message m{next_++, to, taskId, std::move(result)};
    queue_.push_back(m);
    return {m.seq, to};
}

std::optional<Message> MessageQueue::pop() {
    if (queue_.empty()) return std::nullopt;
    Message m = std::move(queue_.front());
    queue_.pop_front();
    return m;
}

void MessageQueue::tamperAll() {
    for (auto& m : queue_)
        if (!m.result.ciphertext.empty()) m.result.ciphertext[0] ^= 0x01;
}

DeliveryReceipt deliverResult(MessageQueue& queue, const ProtectedResult& result, Destination destination,
                              TaskId taskId) {
    return queue.push(destination, taskId, result);
}

} // namespace spoc
