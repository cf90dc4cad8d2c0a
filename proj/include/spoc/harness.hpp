#pragma once

// Scenario runner and reports. A scenario wires one requestor, one or more
// execution nodes and an optional third party to a fresh ledger and drives
// them with a time-ordered event queue until nothing is left to do.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spoc/actors.hpp"
#include "spoc/enclave.hpp"
#include "spoc/infoflow.hpp"
#include "spoc/ledger.hpp"

namespace spoc {

struct ScenarioConfig {
    RequestorStrategy requestorStrategy = RequestorStrategy::Honest;
    NodeStrategy nodeStrategy = NodeStrategy::Honest;

    Money V = Money::whole(100);
    Money P = Money::whole(10);
    Money C = Money::whole(3);
    Money threshold = Money(500'000'000'000'000'000ULL);
    Money D_R = Money(500'000'000'000'000'000ULL);
    Money D_E = Money(500'000'000'000'000'000ULL);

    Seconds expires = 3600;
    Tier tier = Tier::Standard;
    std::uint64_t rngSeed = 1;
    Seconds executionDelay = 0;

    bool chargeGas = false;
    GasSchedule gas = GasSchedule::defaults();
    double usdPerEther = 456.0; // reference output only

    std::string functionName = "identity";
    Bytes inputs = {'s', 'p', 'o', 'c'};
    std::optional<std::string> manifestPath;
    Destination destination = Destination::Requestor;

    // adversarial knobs outside the two strategies
    bool tamperDelivery = false;
    bool tamperedImage = false;
    std::uint32_t extraHonestNodes = 0;
    unsigned resubmits = 0;

    std::optional<Money> requestorBalance;
    std::optional<Money> nodeBalance;

    // Throws ConfigInvalid.
    void validate() const;
    // V > P > C > 0
    bool rationalRegime() const;
};

struct SupplySnapshot {
    Money circulating; // every account including the contract
    Money contractHeld;
    Money burned;
    Money totalSupply;

    bool conserved() const { return circulating + burned == totalSupply; }
};

struct FlowSnapshot {
    bool hostSeesSecret = false;
    bool hostSeesEncryptionKey = false;
    bool hostSeesPlaintext = false;
    bool secretVisibleBeforeExecute = false;
};

struct TraceStep {
    std::uint64_t index = 0;
    Timestamp time = 0;
    std::uint64_t blockHeight = 0;
    std::string actor;  // "requestor", "node#0", "third-party", "harness"
    std::string action; // action name or tx function
    Payload detail;
    std::optional<Receipt> receipt;
    SupplySnapshot supply;
    FlowSnapshot flow;
};

struct PartyOutcome {
    AccountId account;
    Money initialBalance;
    Money finalBalance;
    Money gasPaid;
    bool valueReceived = false; // requestor: a valid result arrived
    Money resourceSpent;        // node: C charged by its enclave platform
    int128 payoff = 0;          // gas excluded
    int128 payoffWithGas = 0;
};

struct ScenarioOutcome {
    int128 requestorPayoff = 0;
    int128 nodePayoff = 0;
    int128 requestorPayoffWithGas = 0;
    int128 nodePayoffWithGas = 0;
    Money lockedInContract;
    Money requestorGas;
    Money nodeGas;
    bool resultReceived = false;
    bool nodeExecuted = false;
    std::optional<TaskId> taskId;
    std::optional<TaskState> finalState;
    std::optional<Seconds> onChainLatency;
    std::string traceId;

    friend bool operator==(const ScenarioOutcome&, const ScenarioOutcome&) = default;
};

struct ScenarioRun {
    ScenarioConfig config;
    ScenarioOutcome outcome;
    PartyOutcome requestor;
    std::vector<PartyOutcome> nodes;
    std::vector<TraceStep> trace;
    Ledger ledger;
    InfoFlowLedger flow;
    RequestorState requestorState;
    std::vector<NodeState> nodeStates;
    std::vector<std::uint32_t> arrivalOrder;
    std::optional<Receipt> deployReceipt;
};

// Deterministic for a fixed config (seed included). Throws ConfigInvalid.
ScenarioRun runScenario(const ScenarioConfig& config);

// Post-run checks: conservation and host visibility at every step, contract
// balance equal to what it owes or has locked, and the outcome-table formula
// where one applies. Empty when the run is clean.
std::vector<std::string> invariantViolations(const ScenarioRun& run);

// Payoff formula for the four named outcome-table rows, or nullopt for pairs
// the table does not cover. Returns {requestor, node}.
struct ParamDraw {
    Money V, P, C, D_R, D_E;

    bool rational() const { return V > P && P > C && !C.isZero(); }
};

std::optional<std::string> tableRowName(RequestorStrategy r, NodeStrategy n);
std::optional<std::pair<int128, int128>> closedFormPayoff(RequestorStrategy r, NodeStrategy n, const ParamDraw& p);

ScenarioConfig withParams(ScenarioConfig base, const ParamDraw& p);

struct MatrixCell {
    RequestorStrategy requestor;
    NodeStrategy node;
    ScenarioOutcome outcome;
    std::optional<std::string> tableRow;
    std::optional<std::pair<int128, int128>> expected;
    bool matches = true; // vacuously true off-table
};

struct PayoffMatrix {
    ParamDraw params;
    bool rational = true;
    std::vector<MatrixCell> cells; // requestor-major, all 3x3 pairs

    bool tableRowsMatch() const;
    const MatrixCell& at(RequestorStrategy r, NodeStrategy n) const;
};

std::vector<PayoffMatrix> payoffMatrix(const std::vector<ParamDraw>& grid, const ScenarioConfig& base = {});

// Random whole-unit draws with V > P > C > 0, D_R > 0, D_E >= D_R (the contract
// sets the requestor deposit to THRESHOLD and needs node deposits >= THRESHOLD).
std::vector<ParamDraw> randomRationalGrid(std::size_t count, std::uint64_t seed, std::uint64_t maxValue = 1'000'000);

struct DominanceDraw {
    ParamDraw params;
    bool requestorHonestDominates = false; // vs every requestor deviation, node honest
    bool nodeHonestDominates = false;      // vs every node deviation, requestor honest
    bool cheatersLose = false;             // every deviation except no-confirm strictly negative
    bool noConfirmPositive = false;        // reported, not asserted
    bool honestBothPositive = false;
};

struct DominanceReport {
    std::vector<DominanceDraw> draws;
    std::size_t noConfirmPositiveCount = 0;
    bool holds() const;
};

DominanceReport dominanceCheck(const std::vector<ParamDraw>& grid, const ScenarioConfig& base = {});

struct GasLine {
    std::string function;
    std::uint64_t gas = 0;
    Money cost;
    double usd = 0;
};

struct GasReport {
    Tier tier = Tier::Standard;
    Money pricePerGas;
    double usdPerEther = 0;
    GasLine deploy;
    std::vector<GasLine> perFunction; // the four calls of an honest task
    std::uint64_t totalPerTaskGas = 0;
    Money totalPerTaskCost;
    double totalUsd = 0;
};

// Metered from the receipts of an honest run with gas charging switched on.
GasReport gasReport(Tier tier, const ScenarioConfig& base = {});

struct LatencyReport {
    Tier tier = Tier::Standard;
    Seconds confirmationDelay = 0;
    unsigned sequentialConfirmations = 0;
    Seconds executionDelay = 0;
    Seconds latency = 0;
};

// End-to-end ledger time of an honest run, submit to finalizeRequestor.
LatencyReport latencyReport(Tier tier, const ScenarioConfig& base = {});

} // namespace spoc
