#include <catch_amalgamated.hpp>

#include "spoc/harness.hpp"
#include "spoc/serialize.hpp"

using namespace spoc;

namespace {

ScenarioRun run(RequestorStrategy r, NodeStrategy n, ScenarioConfig c = {}) {
    c.requestorStrategy = r;
    c.nodeStrategy = n;
    return runScenario(c);
}

int128 whole(std::int64_t n) { return int128(n) * int128(kUnitsPerWhole); }
constexpr int128 kHalf = 500'000'000'000'000'000;

} // namespace

TEST_CASE("default scenarios reproduce the outcome table") {
    using R = RequestorStrategy;
    using N = NodeStrategy;
    // V=100, P=10, C=3, D_R=D_E=0.5, evaluated by hand
    const auto hh = run(R::Honest, N::Honest);
    CHECK(hh.outcome.requestorPayoff == whole(90));
    CHECK(hh.outcome.nodePayoff == whole(7));
    CHECK(hh.outcome.finalState == TaskState::Closed);
    CHECK(hh.outcome.lockedInContract.isZero());

    const auto noExec = run(R::Honest, N::ClaimOnly);
    CHECK(noExec.outcome.requestorPayoff == -kHalf);
    CHECK(noExec.outcome.nodePayoff == -kHalf);
    CHECK(noExec.outcome.finalState == TaskState::TimedOutDead);
    CHECK(noExec.outcome.lockedInContract == Money(2 * 500'000'000'000'000'000ULL));

    const auto noSend = run(R::Honest, N::ComputeNoDeliver);
    CHECK(noSend.outcome.requestorPayoff == -(whole(10) + kHalf));
    CHECK(noSend.outcome.nodePayoff == -whole(3));

    const auto noConfirm = run(R::NoConfirm, N::Honest);
    CHECK(noConfirm.outcome.requestorPayoff == whole(90) - kHalf);
    CHECK(noConfirm.outcome.nodePayoff == -whole(3));

    for (const auto* r : {&hh, &noExec, &noSend, &noConfirm}) CHECK(invariantViolations(*r).empty());
}

TEST_CASE("withholding inputs and claim-only look the same on chain") {
    const auto withhold = run(RequestorStrategy::WithholdInput, NodeStrategy::Honest);
    const auto claimOnly = run(RequestorStrategy::Honest, NodeStrategy::ClaimOnly);
    CHECK(withhold.outcome.requestorPayoff == claimOnly.outcome.requestorPayoff);
    CHECK(withhold.outcome.nodePayoff == claimOnly.outcome.nodePayoff);
    CHECK_FALSE(withhold.outcome.nodeExecuted);
}

TEST_CASE("closed forms cover exactly four pairs") {
    const ParamDraw p{Money(10), Money(6), Money(2), Money(1), Money(3)};
    int covered = 0;
    for (auto r : {RequestorStrategy::Honest, RequestorStrategy::NoConfirm, RequestorStrategy::WithholdInput})
        for (auto n : {NodeStrategy::Honest, NodeStrategy::ClaimOnly, NodeStrategy::ComputeNoDeliver})
            covered += closedFormPayoff(r, n, p).has_value() ? 1 : 0;
    CHECK(covered == 4);
    CHECK(closedFormPayoff(RequestorStrategy::NoConfirm, NodeStrategy::Honest, p) == std::pair<int128, int128>{3, -2});
}

TEST_CASE("payoff matrix and dominance on small integer draws") {
    const auto grid = randomRationalGrid(5, 7, 50);
    for (const auto& d : grid) {
        CHECK(d.rational());
        CHECK(d.D_E >= d.D_R);
    }
    const auto matrices = payoffMatrix(grid);
    REQUIRE(matrices.size() == 5);
    for (const auto& m : matrices) {
        CHECK(m.cells.size() == 9);
        CHECK(m.tableRowsMatch());
    }
    CHECK(dominanceCheck(grid).holds());
    CHECK(randomRationalGrid(5, 7, 50)[3].V == grid[3].V);
}

TEST_CASE("gas charged runs keep Table-style payoffs separate from gas") {
    ScenarioConfig c;
    c.chargeGas = true;
    const auto r = runScenario(c);
    CHECK(r.outcome.requestorPayoff == whole(90));
    CHECK(r.outcome.requestorGas > Money{});
    CHECK(r.outcome.requestorPayoffWithGas == r.outcome.requestorPayoff - signedUnits(r.outcome.requestorGas));
    CHECK(r.outcome.nodePayoffWithGas == r.outcome.nodePayoff - signedUnits(r.outcome.nodeGas));
    CHECK(invariantViolations(r).empty());
}

TEST_CASE("reports") {
    const GasReport g = gasReport(Tier::Fast);
    CHECK(g.deploy.gas == 1260850);
    CHECK(g.totalPerTaskGas == 582159);
    CHECK(g.totalPerTaskCost == checkedMul(g.pricePerGas, 582159));
    for (auto tier : {Tier::Slow, Tier::Standard, Tier::Fast}) {
        const auto l = latencyReport(tier);
        CHECK(l.latency == 4 * GasSchedule::defaults().delayFor(tier));
    }
    ScenarioConfig slowEnclave;
    slowEnclave.executionDelay = 45;
    CHECK(latencyReport(Tier::Standard, slowEnclave).latency == 1200 + 45);
}

TEST_CASE("tampered delivery is rejected and the timeout comes too late") {
    ScenarioConfig c;
    c.tamperDelivery = true;
    const auto r = runScenario(c);
    CHECK_FALSE(r.outcome.resultReceived);
    CHECK(r.requestorState.resultRejected);
    bool refusedTimeout = false;
    for (const auto& s : r.trace)
        if (s.receipt && s.receipt->function == "timeout")
            refusedTimeout = s.receipt->outcome.refusal == Refusal::AlreadyCompleted;
    CHECK(refusedTimeout);
    CHECK(r.outcome.requestorPayoff == -(whole(10) + kHalf));
}

TEST_CASE("an unexpected enclave image never receives inputs") {
    ScenarioConfig c;
    c.tamperedImage = true;
    const auto r = runScenario(c);
    CHECK_FALSE(r.outcome.nodeExecuted);
    CHECK(r.outcome.finalState == TaskState::TimedOutDead);
    bool attestFailed = false;
    for (const auto& s : r.trace)
        if (s.action == "attest") attestFailed = s.detail.at("ok") == "false";
    CHECK(attestFailed);
    CHECK(invariantViolations(r).empty());
}

TEST_CASE("third-party delivery completes with signature evidence") {
    ScenarioConfig c;
    c.destination = Destination::ThirdParty;
    const auto r = runScenario(c);
    CHECK(r.outcome.resultReceived);
    CHECK(r.outcome.requestorPayoff == whole(90));
    bool acknowledged = false;
    for (const auto& s : r.trace) acknowledged |= s.actor == "third-party" && s.action == "acknowledge";
    CHECK(acknowledged);
}

TEST_CASE("a faulting function costs the node and times out") {
    ScenarioConfig c;
    c.functionName = "fault";
    const auto r = runScenario(c);
    CHECK(r.outcome.nodeExecuted);
    CHECK(r.outcome.nodePayoff == -kHalf - whole(3));
    CHECK(r.outcome.requestorPayoff == -kHalf);
    CHECK(invariantViolations(r).empty());
}

TEST_CASE("resubmission after a timeout uses a new secret") {
    ScenarioConfig c;
    c.nodeStrategy = NodeStrategy::ClaimOnly;
    c.resubmits = 1;
    c.extraHonestNodes = 0;
    const auto r = runScenario(c);
    CHECK(r.requestorState.secretsUsed.size() == 2);
    CHECK(r.requestorState.secretsUsed[0] != r.requestorState.secretsUsed[1]);
    CHECK(r.ledger.contract().numTasks() == 2);
}

TEST_CASE("racing nodes: first arrival wins, others are refunded") {
    ScenarioConfig c;
    c.extraHonestNodes = 4;
    c.rngSeed = 3;
    const auto r = runScenario(c);
    const std::uint32_t winner = r.arrivalOrder.front();
    CHECK(r.nodeStates[winner].claimed);
    for (std::uint32_t i = 0; i < r.nodes.size(); ++i)
        if (i != winner) CHECK(r.nodes[i].finalBalance == r.nodes[i].initialBalance);
    CHECK(r.outcome.resultReceived);
}

TEST_CASE("runs are deterministic per seed") {
    ScenarioConfig c;
    const auto a = traceJsonLines(runScenario(c));
    CHECK(a == traceJsonLines(runScenario(c)));
    c.rngSeed = 8;
    CHECK(a != traceJsonLines(runScenario(c)));
}

TEST_CASE("configuration is validated") {
    ScenarioConfig c;
    c.D_E = Money(1);
    CHECK_THROWS_AS(runScenario(c), Error);
    c = {};
    c.D_R = Money::whole(2);
    CHECK_THROWS_AS(runScenario(c), Error);
    c = {};
    c.functionName = "missing";
    CHECK_THROWS_AS(runScenario(c), Error);
    c = {};
    c.expires = 0;
    CHECK_THROWS_AS(runScenario(c), Error);
}
