#include <catch_amalgamated.hpp>

#include "spoc/actors.hpp"

using namespace spoc;

namespace {

RequestorState requestor(RequestorStrategy s = RequestorStrategy::Honest) {
    RequestorState r;
    r.strategy = s;
    r.request.valueOfResult = Money::whole(100);
    r.request.offeredPayment = Money::whole(10);
    r.deposit = Money::whole(1);
    r.rng = DeterministicRng(4);
    return r;
}

LedgerEvent event(EventKind kind, TaskId id, Payload payload = {}) { return LedgerEvent{kind, id, 1, 0, payload}; }

Receipt accepted(const std::string& fn, TaskId id, Timestamp at = 50) {
    Receipt r;
    r.function = fn;
    r.timestamp = at;
    r.outcome = CallOutcome::accept(id);
    return r;
}

} // namespace

TEST_CASE("strategy names") {
    for (auto s : {RequestorStrategy::Honest, RequestorStrategy::NoConfirm, RequestorStrategy::WithholdInput})
        CHECK(parseRequestorStrategy(toString(s)) == s);
    for (auto s : {NodeStrategy::Honest, NodeStrategy::ClaimOnly, NodeStrategy::ComputeNoDeliver})
        CHECK(parseNodeStrategy(toString(s)) == s);
    CHECK(toString(NodeStrategy::ComputeNoDeliver) == "compute-no-deliver");
    CHECK_THROWS_AS(parseNodeStrategy("lazy"), Error);
}

TEST_CASE("requestor submits with payment plus deposit and a fresh hash lock") {
    RequestorState r = requestor();
    const auto actions = requestorStep(r, Started{});
    REQUIRE(actions.size() == 1);
    const auto& tx = std::get<SendTx>(actions[0]);
    CHECK(tx.value == Money::whole(11));
    const auto& call = std::get<SubmitTaskCall>(tx.call);
    CHECK(call.hashLock == hashSecret(r.secret));
    CHECK(r.calls == std::vector<std::string>{"submitTask"});

    const auto timer = requestorStep(r, TxConfirmed{accepted("submitTask", 0, 50)});
    REQUIRE(timer.size() == 1);
    CHECK(std::get<SetTimer>(timer[0]).at == 50 + 3600 + 1);
    CHECK(r.taskId == 0u);
}

TEST_CASE("requestor only attests the claimant's enclave") {
    RequestorState r = requestor();
    requestorStep(r, Started{});
    requestorStep(r, TxConfirmed{accepted("submitTask", 0)});
    AccountId claimant;
    claimant.bytes[0] = 7;
    AccountId impostor;
    impostor.bytes[0] = 8;
    requestorStep(r, EventObserved{event(EventKind::TaskClaimed, 0, {{"executionNode", claimant.hex()}})});
    CHECK(requestorStep(r, EnclaveReady{0, 1, impostor}).empty());
    const auto a = requestorStep(r, EnclaveReady{0, 0, claimant});
    REQUIRE(a.size() == 1);
    CHECK(std::get<Attest>(a[0]).expected == r.allowedMeasurement);
    const auto p = requestorStep(r, AttestationResult{0, 0, true});
    REQUIRE(p.size() == 1);
    CHECK(std::get<Provision>(p[0]).data.secret == r.secret);
}

TEST_CASE("withholding requestor never provisions") {
    RequestorState r = requestor(RequestorStrategy::WithholdInput);
    requestorStep(r, Started{});
    requestorStep(r, TxConfirmed{accepted("submitTask", 0)});
    AccountId claimant;
    claimant.bytes[0] = 7;
    requestorStep(r, EventObserved{event(EventKind::TaskClaimed, 0, {{"executionNode", claimant.hex()}})});
    CHECK(requestorStep(r, EnclaveReady{0, 0, claimant}).empty());
    const auto t = requestorStep(r, Wake{0});
    REQUIRE(t.size() == 1);
    CHECK(std::holds_alternative<TimeoutCall>(std::get<SendTx>(t[0]).call));
}

TEST_CASE("requestor finalizes only after a valid result and the on-chain finish") {
    for (auto strategy : {RequestorStrategy::Honest, RequestorStrategy::NoConfirm}) {
        RequestorState r = requestor(strategy);
        requestorStep(r, Started{});
        requestorStep(r, TxConfirmed{accepted("submitTask", 0)});
        DeterministicRng rng(1);
        const ProtectedResult good = protectResult(Bytes{1}, r.keys, rng.draw<Nonce>());
        ProtectedResult bad = good;
        bad.ciphertext[0] ^= 1;
        CHECK(requestorStep(r, ResultReceived{0, bad}).empty());
        CHECK(r.resultRejected);
        CHECK(requestorStep(r, ResultReceived{0, good}).empty()); // chain has not finished yet
        CHECK(r.resultValid);
        const auto fin = requestorStep(r, EventObserved{event(EventKind::TaskFinished, 0)});
        if (strategy == RequestorStrategy::Honest) {
            REQUIRE(fin.size() == 1);
            CHECK(std::holds_alternative<FinalizeRequestorCall>(std::get<SendTx>(fin[0]).call));
        } else {
            CHECK(fin.empty());
        }
        CHECK(requestorStep(r, Wake{0}).empty()); // a valid result suppresses the timeout
    }
}

TEST_CASE("resubmission uses a fresh secret") {
    RequestorState r = requestor();
    r.resubmitsLeft = 1;
    requestorStep(r, Started{});
    requestorStep(r, TxConfirmed{accepted("submitTask", 0)});
    requestorStep(r, Wake{0});
    const auto again = requestorStep(r, TxConfirmed{accepted("timeout", 0)});
    REQUIRE(again.size() == 1);
    CHECK(r.secretsUsed.size() == 2);
    CHECK(r.secretsUsed[0] != r.secretsUsed[1]);
    CHECK(r.hashLocksUsed[0] != r.hashLocksUsed[1]);
    CHECK(r.flowScope == "req2");
}

TEST_CASE("node strategies diverge after the claim") {
    for (auto strategy : {NodeStrategy::Honest, NodeStrategy::ClaimOnly, NodeStrategy::ComputeNoDeliver}) {
        NodeState n;
        n.strategy = strategy;
        n.deposit = Money::whole(1);
        const auto claim =
            executionNodeStep(n, EventObserved{event(EventKind::TaskSubmitted, 3, {{"functionName", "identity"}})});
        REQUIRE(claim.size() == 1);
        CHECK(std::get<SendTx>(claim[0]).value == Money::whole(1));
        // a second task is ignored while busy
        CHECK(executionNodeStep(n, EventObserved{event(EventKind::TaskSubmitted, 4, {{"functionName", "x"}})}).empty());

        const auto afterClaim = executionNodeStep(n, TxConfirmed{accepted("claimTask", 3)});
        if (strategy == NodeStrategy::ClaimOnly) {
            CHECK(afterClaim.empty());
            continue;
        }
        REQUIRE(afterClaim.size() == 1);
        CHECK(std::holds_alternative<InstantiateEnclave>(afterClaim[0]));
        CHECK(std::holds_alternative<Execute>(executionNodeStep(n, InputsProvisioned{3}).at(0)));

        DeterministicRng rng(2);
        const ResultKeys keys = ResultKeys::generate(rng);
        const ExecutionOutput out{protectResult(Bytes{1}, keys, rng.draw<Nonce>()), generateSecret(rng)};
        const auto fin = executionNodeStep(n, ExecutionFinished{3, out});
        CHECK(std::get<FinalizeExecutionNodeCall>(std::get<SendTx>(fin.at(0)).call).secret == out.secret);

        const auto after = executionNodeStep(n, TxConfirmed{accepted("finalizeExecutionNode", 3)});
        const bool delivers = std::any_of(after.begin(), after.end(),
                                          [](const Action& a) { return std::holds_alternative<Deliver>(a); });
        CHECK(delivers == (strategy == NodeStrategy::Honest));
        CHECK(std::holds_alternative<DestroyEnclave>(after.back()));
    }
}

TEST_CASE("message queue delivers in order and can be tampered with") {
    MessageQueue q;
    DeterministicRng rng(3);
    const ResultKeys keys = ResultKeys::generate(rng);
    const ProtectedResult r = protectResult(Bytes{9, 9}, keys, rng.draw<Nonce>());
    CHECK(deliverResult(q, r, Destination::Requestor, 1).seq == 0);
    CHECK(deliverResult(q, r, Destination::ThirdParty, 1).seq == 1);
    q.tamperAll();
    const auto first = q.pop();
    REQUIRE(first);
    CHECK(first->to == Destination::Requestor);
    CHECK_THROWS_AS(openResult(first->result, keys), Error);
    CHECK(q.pop()->to == Destination::ThirdParty);
    CHECK(q.empty());
}
