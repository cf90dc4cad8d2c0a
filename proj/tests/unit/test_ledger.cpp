#include <catch_amalgamated.hpp>

#include "spoc/ledger.hpp"

using namespace spoc;

namespace {

struct Chain {
    LedgerConfig cfg;
    Ledger ledger;
    AccountId op, req, node;
    Secret secret = generateSecret(5);

    explicit Chain(bool chargeGas = true) : cfg(make(chargeGas)), ledger(cfg) {
        op = ledger.createAccount(Money::whole(1));
        ledger.deploy(op, Tier::Standard);
        req = ledger.createAccount(Money::whole(20));
        node = ledger.createAccount(Money::whole(2));
    }
    static LedgerConfig make(bool chargeGas) {
        LedgerConfig c;
        c.chargeGas = chargeGas;
        return c;
    }
    Receipt submit(Money value) {
        return ledger.submitTransaction(req, SubmitTaskCall{"identity", hashSecret(secret), 3600}, value, Tier::Standard);
    }
};

ErrorCode codeOf(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::ParseError;
}

} // namespace

TEST_CASE("default gas schedule") {
    const GasSchedule g = GasSchedule::defaults();
    CHECK(g.gasFor("deploy") == 1260850);
    CHECK(g.gasFor("submitTask") + g.gasFor("claimTask") + g.gasFor("finalizeExecutionNode") +
              g.gasFor("finalizeRequestor") ==
          582159);
    CHECK(g.delayFor(Tier::Slow) == 600);
    CHECK(g.delayFor(Tier::Standard) == 300);
    CHECK(g.delayFor(Tier::Fast) == 120);
    CHECK_THROWS_AS(g.gasFor("nope"), Error);
    GasSchedule zeroDelay = g;
    zeroDelay.confirmationDelay[Tier::Fast] = 0;
    CHECK_NOTHROW(zeroDelay.validate());
    GasSchedule zeroPrice = g;
    zeroPrice.pricePerGas[Tier::Fast] = Money{};
    CHECK_THROWS_AS(zeroPrice.validate(), Error);
}

TEST_CASE("deploy burns gas and mines a block") {
    Chain c;
    const Money price = c.cfg.gas.priceFor(Tier::Standard);
    CHECK(c.ledger.burned() == checkedMul(price, 1260850));
    CHECK(c.ledger.clock().blockHeight == 1);
    CHECK(c.ledger.clock().now == 300);
    CHECK(c.ledger.conserved());
}

TEST_CASE("transactions escrow value, charge gas and advance the clock") {
    Chain c;
    const Money before = c.ledger.balanceOf(c.req);
    const Money value = Money::whole(10) + c.cfg.threshold;
    const Receipt r = c.submit(value);
    CHECK(r.outcome.accepted);
    CHECK(r.gasUsed == 277880);
    CHECK(r.gasCharged == checkedMul(c.cfg.gas.priceFor(Tier::Standard), 277880));
    CHECK(c.ledger.balanceOf(c.req) + value + r.gasCharged == before);
    CHECK(c.ledger.balanceOf(c.ledger.contractAccount()) == value);
    CHECK(r.blockHeight == 2);
    CHECK(r.timestamp == 600);
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].kind == EventKind::TaskSubmitted);
    CHECK(r.events[0].blockHeight == 2);
    CHECK(c.ledger.conserved());
}

TEST_CASE("refused calls are refunded minus gas") {
    Chain c;
    const Money before = c.ledger.balanceOf(c.req);
    const Receipt r = c.submit(Money(1));
    CHECK_FALSE(r.outcome.accepted);
    CHECK(r.outcome.refusal == Refusal::ValueBelowThreshold);
    CHECK(c.ledger.balanceOf(c.req) + r.gasCharged == before);
    CHECK(c.ledger.events().size() == 0);
}

TEST_CASE("pre-checks reject bad senders and values") {
    Chain c;
    CHECK(codeOf([&] { c.ledger.submitTransaction(kNullAccount, ClaimTaskCall{0}, Money{}, Tier::Fast); }) ==
          ErrorCode::NullSender);
    AccountId ghost;
    ghost.bytes[5] = 9;
    CHECK(codeOf([&] { c.ledger.submitTransaction(ghost, ClaimTaskCall{0}, Money{}, Tier::Fast); }) ==
          ErrorCode::UnknownAccount);
    CHECK(codeOf([&] { c.ledger.submitTransaction(c.req, TimeoutCall{0}, Money(1), Tier::Fast); }) ==
          ErrorCode::NonPayable);
    CHECK(codeOf([&] { c.submit(Money::whole(1000)); }) == ErrorCode::InsufficientBalance);
    CHECK(codeOf([&] { c.ledger.balanceOf(ghost); }) == ErrorCode::UnknownAccount);

    Ledger fresh;
    const AccountId a = fresh.createAccount(Money::whole(1));
    CHECK(codeOf([&] { fresh.submitTransaction(a, ClaimTaskCall{0}, Money{}, Tier::Fast); }) ==
          ErrorCode::ContractNotDeployed);
}

TEST_CASE("full honest flow conserves funds and filters events") {
    Chain c(false);
    const Money P = Money::whole(10);
    const Receipt sub = c.submit(P + c.cfg.threshold);
    const TaskId id = *sub.outcome.taskId;
    CHECK(c.ledger.submitTransaction(c.node, ClaimTaskCall{id}, c.cfg.threshold, Tier::Standard).outcome.accepted);
    CHECK(c.ledger.submitTransaction(c.node, FinalizeExecutionNodeCall{id, c.secret}, Money{}, Tier::Standard)
              .outcome.accepted);
    const Receipt fin = c.ledger.submitTransaction(c.req, FinalizeRequestorCall{id}, Money{}, Tier::Standard);
    CHECK(fin.outcome.accepted);
    CHECK(fin.transfers.size() == 2);
    CHECK(c.ledger.balanceOf(c.node) == Money::whole(12));
    CHECK(c.ledger.balanceOf(c.req) == Money::whole(10));
    CHECK(c.ledger.balanceOf(c.ledger.contractAccount()).isZero());
    CHECK(c.ledger.conserved());
    CHECK(c.ledger.burned().isZero());

    CHECK(c.ledger.queryEvents().size() == 3);
    CHECK(c.ledger.queryEvents({EventKind::TaskClaimed, std::nullopt}).size() == 1);
    CHECK(c.ledger.queryEvents({std::nullopt, id + 1}).empty());
}

TEST_CASE("time only moves forward") {
    Chain c;
    const Timestamp t = c.ledger.clock().now;
    c.ledger.advanceTime(10);
    CHECK(c.ledger.clock().now == t + 10);
    c.ledger.advanceTo(t);
    CHECK(c.ledger.clock().now == t + 10);
    CHECK(c.ledger.clock().blockHeight == 1);
}

TEST_CASE("ledger is a value type") {
    Chain c;
    Ledger copy = c.ledger;
    c.submit(Money::whole(1));
    CHECK_FALSE(copy == c.ledger);
    CHECK(copy.contract().numTasks() == 0);
}
