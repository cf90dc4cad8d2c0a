#include "spoc/harness.hpp"

#include <map>
#include <queue>
#include <random>
#include <set>

#include "spoc/serialize.hpp"

namespace spoc {

void ScenarioConfig::validate() const {
    auto invalid = [](const std::string& why) { throw Error(ErrorCode::ConfigInvalid, why); };
    if (threshold.isZero()) invalid("THRESHOLD must be positive");
    if (D_R != threshold) invalid("D_R must equal THRESHOLD (the contract fixes the requestor deposit)");
    if (D_E < threshold) invalid("D_E must be at least THRESHOLD or no claim can succeed");
    if (expires == 0) invalid("expires must be positive");
    if (functionName.empty()) invalid("function name is empty");
    try {
        gas.validate();
    } catch (const Error& e) {
        invalid(e.what());
    }
}

bool ScenarioConfig::rationalRegime() const { return V > P && P > C && !C.isZero(); }

namespace {

constexpr int kRequestor = -1;
constexpr int kThirdParty = -2;

struct Pending {
    Timestamp at;
    std::uint64_t seq;
    int who;
    Observation obs;
};

struct PendingLater {
    bool operator()(const Pending& a, const Pending& b) const {
        return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
};

constexpr std::size_t kStepLimit = 100'000;

class Simulation {
public:
    explicit Simulation(const ScenarioConfig& cfg) : cfg_(cfg), ledger_(makeLedgerConfig(cfg)) {
        cfg_.validate();
        setupStores();
        setupParties();
    }

    ScenarioRun run() {
        post(kRequestor, Started{}, ledger_.clock().now);
        std::size_t processed = 0;
        while (!queue_.empty()) {
            if (++processed > kStepLimit) throw Error(ErrorCode::InvalidState, "scenario did not quiesce");
            Pending p = queue_.top();
            queue_.pop();
            ledger_.advanceTo(p.at);
            dispatch(p.who, p.obs);
        }
        return finish();
    }

private:
    static LedgerConfig makeLedgerConfig(const ScenarioConfig& cfg) {
        LedgerConfig lc;
        lc.gas = cfg.gas;
        lc.threshold = cfg.threshold;
        lc.chargeGas = cfg.chargeGas;
        return lc;
    }

    void setupStores() {
        store_ = cfg_.manifestPath ? FunctionStore::fromManifestFile(*cfg_.manifestPath) : FunctionStore::builtin();
        if (!store_.contains(cfg_.functionName))
            throw Error(ErrorCode::ConfigInvalid, "function '" + cfg_.functionName + "' not in the function store");
        FunctionImage image = store_.find(cfg_.functionName);
        image.resourceCost = cfg_.C;
        store_.add(image);
        nodeStore_ = store_;
        if (cfg_.tamperedImage) {
            image.version += 1;
            nodeStore_.add(image);
        }
    }

    Money gasBudget() const {
        if (!cfg_.chargeGas) return Money{};
        std::uint64_t maxGas = 0;
        for (const auto& [fn, g] : cfg_.gas.perFunction) maxGas = std::max(maxGas, g);
        Money maxPrice;
        for (const auto& [tier, price] : cfg_.gas.pricePerGas) maxPrice = std::max(maxPrice, price);
        return checkedMul(checkedMul(maxPrice, maxGas), 16 * (cfg_.resubmits + 1));
    }

    void setupParties() {
        DeterministicRng setupRng(cfg_.rngSeed ^ 0x5eed5eed5eed5eedULL);
        const Money budget = gasBudget();

        const AccountId operatorId = ledger_.createAccount(budget);
        record("harness", "genesis", {{"operator", operatorId.hex()}});
        deployReceipt_ = ledger_.deploy(operatorId, cfg_.tier);
        record("harness", "deploy", {}, deployReceipt_);

        const Money requestorFunds =
            cfg_.requestorBalance.value_or(checkedMul(cfg_.P + cfg_.threshold, cfg_.resubmits + 1) + budget);
        requestor_.account = ledger_.createAccount(requestorFunds);
        requestorInitial_ = requestorFunds;
        requestor_.strategy = cfg_.requestorStrategy;
        requestor_.request = TaskRequest{cfg_.functionName, cfg_.inputs, cfg_.V, cfg_.P, cfg_.expires, cfg_.tier,
                                         cfg_.destination};
        requestor_.deposit = cfg_.threshold;
        requestor_.allowedMeasurement = store_.find(cfg_.functionName).measurement();
        requestor_.resubmitsLeft = cfg_.resubmits;
        requestor_.flow = &flow_;
        requestor_.rng = DeterministicRng(cfg_.rngSeed);

        const std::uint32_t nodeCount = 1 + cfg_.extraHonestNodes;
        platforms_.resize(nodeCount);
        for (std::uint32_t i = 0; i < nodeCount; ++i) {
            NodeState n;
            n.strategy = i == 0 ? cfg_.nodeStrategy : NodeStrategy::Honest;
            n.index = i;
            n.deposit = cfg_.D_E;
            n.deliverTo = cfg_.destination;
            const Money funds = cfg_.nodeBalance.value_or(cfg_.D_E + budget);
            n.account = ledger_.createAccount(funds);
            nodeInitial_.push_back(funds);
            nodes_.push_back(n);

            EnclavePlatform& pf = platforms_[i];
            pf.hostIndex = i;
            pf.sealRoot = setupRng.draw<PlatformKey>();
            pf.flow = &flow_;
            pf.rng = DeterministicRng(setupRng.nextU64());
        }
        // Seeded arrival order for racing nodes (Fisher-Yates on our own stream).
        arrival_.resize(nodeCount);
        for (std::uint32_t i = 0; i < nodeCount; ++i) arrival_[i] = i;
        for (std::uint32_t i = nodeCount; i > 1; --i) std::swap(arrival_[i - 1], arrival_[setupRng.nextU64() % i]);
        record("harness", "accounts", {{"requestor", requestor_.account.hex()}, {"nodes", std::to_string(nodeCount)}});
    }

    void post(int who, Observation obs, Timestamp at) { queue_.push(Pending{at, seq_++, who, std::move(obs)}); }

    std::string actorName(int who) const {
        if (who == kRequestor) return "requestor";
        if (who == kThirdParty) return "third-party";
        return "node#" + std::to_string(who);
    }

    const AccountId& accountOf(int who) const {
        return who == kRequestor ? requestor_.account : nodes_.at(std::size_t(who)).account;
    }

    void dispatch(int who, const Observation& obs) {
        std::vector<Action> actions;
        if (who == kRequestor) {
            const bool validBefore = requestor_.resultValid;
            const bool rejectedBefore = requestor_.resultRejected;
            actions = requestorStep(requestor_, obs);
            if (!validBefore && requestor_.resultValid)
                record("requestor", "acceptResult", {{"value", toDecimal(cfg_.V)}, {"scope", requestor_.flowScope}});
            if (!rejectedBefore && requestor_.resultRejected) record("requestor", "rejectResult", {});
        } else if (who == kThirdParty) {
            actions = thirdPartyStep(thirdParty_, obs);
        } else {
            actions = executionNodeStep(nodes_.at(std::size_t(who)), obs);
        }
        for (const auto& a : actions) perform(who, a);
    }

    void broadcast(const LedgerEvent& e, Timestamp at) {
        post(kRequestor, EventObserved{e}, at);
        for (auto i : arrival_) post(int(i), EventObserved{e}, at);
        post(kThirdParty, EventObserved{e}, at);
    }

    EnclaveInstance* instanceFor(int node, TaskId taskId) {
        auto it = instances_.find({node, taskId});
        return it == instances_.end() ? nullptr : &it->second;
    }

    void perform(int who, const Action& action) {
        const std::string actor = actorName(who);
        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, SendTx>) {
                    sendTx(who, a);
                } else if constexpr (std::is_same_v<T, SetTimer>) {
                    post(who, Wake{a.taskId}, a.at);
                    record(actor, "setTimer", {{"taskId", std::to_string(a.taskId)}, {"at", std::to_string(a.at)}});
                } else if constexpr (std::is_same_v<T, InstantiateEnclave>) {
                    try {
                        auto inst = instantiate(nodeStore_, a.functionName, platforms_.at(std::size_t(who)));
                        const Measurement m = inst.measurement();
                        instances_.insert_or_assign({who, a.taskId}, std::move(inst));
                        record(actor, "instantiate", {{"taskId", std::to_string(a.taskId)}, {"measurement", m.hex()}});
                        post(kRequestor, EnclaveReady{a.taskId, std::uint32_t(who), accountOf(who)}, ledger_.clock().now);
                    } catch (const Error& e) {
                        record(actor, "instantiateFailed", {{"error", e.what()}});
                    }
                } else if constexpr (std::is_same_v<T, Attest>) {
                    EnclaveInstance* inst = instanceFor(int(a.node), a.taskId);
                    bool ok = false;
                    std::string error;
                    if (inst == nullptr) {
                        error = "no such enclave";
                    } else {
                        try {
                            inst->attest(a.expected, a.nonce, requestor_.nonces, requestor_.self);
                            ok = true;
                        } catch (const Error& e) {
                            error = e.what();
                        }
                    }
                    record(actor, "attest", {{"node", std::to_string(a.node)}, {"ok", ok ? "true" : "false"},
                                             {"error", error}});
                    post(kRequestor, AttestationResult{a.taskId, a.node, ok}, ledger_.clock().now);
                } else if constexpr (std::is_same_v<T, Provision>) {
                    EnclaveInstance* inst = instanceFor(int(a.node), a.taskId);
                    try {
                        if (inst == nullptr) throw Error(ErrorCode::NotAttested, "no such enclave");
                        inst->provision(requestor_.self, a.data);
                        record(actor, "provision", {{"node", std::to_string(a.node)}});
                        post(int(a.node), InputsProvisioned{a.taskId}, ledger_.clock().now);
                    } catch (const Error& e) {
                        record(actor, "provisionFailed", {{"error", e.what()}});
                    }
                } else if constexpr (std::is_same_v<T, Execute>) {
                    EnclaveInstance* inst = instanceFor(who, a.taskId);
                    ledger_.advanceTime(cfg_.executionDelay);
                    std::optional<ExecutionOutput> out;
                    try {
                        if (inst == nullptr) throw Error(ErrorCode::NotProvisioned, "no such enclave");
                        out = inst->execute();
                        if (auto it = taskScopes_.find(a.taskId); it != taskScopes_.end())
                            executedScopes_.insert(it->second);
                        record(actor, "execute",
                               {{"taskId", std::to_string(a.taskId)},
                                {"node", std::to_string(who)},
                                {"resourceCost", toDecimal(inst->image().resourceCost)}});
                    } catch (const Error& e) {
                        // the enclave charges C even when the body faults
                        record(actor, "executeFailed",
                               {{"error", e.what()},
                                {"node", std::to_string(who)},
                                {"resourceCost", toDecimal(inst != nullptr ? inst->image().resourceCost : Money{})}});
                    }
                    post(who, ExecutionFinished{a.taskId, out}, ledger_.clock().now);
                } else if constexpr (std::is_same_v<T, DestroyEnclave>) {
                    if (EnclaveInstance* inst = instanceFor(who, a.taskId)) inst->destroy();
                    record(actor, "destroy", {{"taskId", std::to_string(a.taskId)}});
                } else if constexpr (std::is_same_v<T, Deliver>) {
                    const DeliveryReceipt dr = deliverResult(messages_, a.result, a.destination, a.taskId);
                    if (cfg_.tamperDelivery) messages_.tamperAll();
                    record(actor, "deliver",
                           {{"destination", std::string(toString(a.destination))}, {"message", std::to_string(dr.seq)},
                            {"tampered", cfg_.tamperDelivery ? "true" : "false"}});
                    while (auto m = messages_.pop()) {
                        const int to = m->to == Destination::Requestor ? kRequestor : kThirdParty;
                        post(to, ResultReceived{m->taskId, m->result}, ledger_.clock().now);
                    }
                } else if constexpr (std::is_same_v<T, Acknowledge>) {
                    record(actor, "acknowledge", {{"taskId", std::to_string(a.taskId)}});
                    post(kRequestor, DeliveryAcknowledged{a.taskId, a.evidence}, ledger_.clock().now);
                }
            },
            action);
    }

    void sendTx(int who, const SendTx& tx) {
        const std::string actor = actorName(who);
        const bool firstSubmit = who == kRequestor && std::holds_alternative<SubmitTaskCall>(tx.call) && !submitStart_;
        const Timestamp before = ledger_.clock().now;
        Receipt r;
        try {
            r = ledger_.submitTransaction(accountOf(who), tx.call, tx.value, cfg_.tier);
        } catch (const Error& e) {
            record(actor, std::string(functionName(tx.call)) + "Rejected", {{"error", e.what()}});
            post(who, TxRejected{std::string(functionName(tx.call)), e.code()}, ledger_.clock().now);
            return;
        }
        if (firstSubmit) submitStart_ = before;
        if (r.outcome.accepted) {
            if (who == kRequestor && r.function == "submitTask" && r.outcome.taskId)
                taskScopes_[*r.outcome.taskId] = requestor_.flowScope;
            if (r.function == "finalizeExecutionNode") {
                const auto& call = std::get<FinalizeExecutionNodeCall>(tx.call);
                if (auto it = taskScopes_.find(call.taskId); it != taskScopes_.end())
                    flow_.grant({it->second, FlowItem::Secret}, Principal::everyone(), "on-chain");
            }
            if (who == kRequestor && r.function == "finalizeRequestor" && submitStart_)
                latency_ = r.timestamp - *submitStart_;
        }
        gasPaid_[r.sender] += r.gasCharged;
        record(actor, r.function, {}, r);
        post(who, TxConfirmed{r}, r.timestamp);
        for (const auto& e : r.events) broadcast(e, r.timestamp);
    }

    FlowSnapshot flowSnapshot() const {
        FlowSnapshot f;
        for (std::uint32_t s = 1; s <= requestor_.requestSeq; ++s) {
            const std::string scope = "req" + std::to_string(s);
            for (const auto& pf : platforms_) {
                const Principal host = pf.host();
                const bool secret = flow_.visible({scope, FlowItem::Secret}, host);
                f.hostSeesSecret |= secret;
                f.hostSeesEncryptionKey |= flow_.visible({scope, FlowItem::EncryptionKey}, host);
                f.hostSeesPlaintext |= flow_.visible({scope, FlowItem::PlaintextResult}, host);
                if (secret && !executedScopes_.contains(scope)) f.secretVisibleBeforeExecute = true;
            }
        }
        return f;
    }

    void record(std::string actor, std::string action, Payload detail, std::optional<Receipt> receipt = std::nullopt) {
        TraceStep step;
        step.index = trace_.size();
        step.time = ledger_.clock().now;
        step.blockHeight = ledger_.clock().blockHeight;
        step.actor = std::move(actor);
        step.action = std::move(action);
        step.detail = std::move(detail);
        step.receipt = std::move(receipt);
        step.supply = {ledger_.circulating(), ledger_.balanceOf(ledger_.contractAccount()), ledger_.burned(),
                       ledger_.totalSupply()};
        step.flow = flowSnapshot();
        trace_.push_back(std::move(step));
    }

    ScenarioRun finish() {
        ScenarioRun run{cfg_, {}, {}, {}, {}, ledger_, {}, requestor_, nodes_, arrival_, deployReceipt_};

        auto gasOf = [&](const AccountId& id) {
            auto it = gasPaid_.find(id);
            return it == gasPaid_.end() ? Money{} : it->second;
        };

        PartyOutcome& r = run.requestor;
        r.account = requestor_.account;
        r.initialBalance = requestorInitial_;
        r.finalBalance = ledger_.balanceOf(r.account);
        r.gasPaid = gasOf(r.account);
        r.valueReceived = requestor_.resultValid;
        r.payoffWithGas = signedUnits(r.finalBalance) - signedUnits(r.initialBalance) +
                          (r.valueReceived ? signedUnits(cfg_.V) : 0);
        r.payoff = r.payoffWithGas + signedUnits(r.gasPaid);

        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            PartyOutcome n;
            n.account = nodes_[i].account;
            n.initialBalance = nodeInitial_[i];
            n.finalBalance = ledger_.balanceOf(n.account);
            n.gasPaid = gasOf(n.account);
            n.resourceSpent = platforms_[i].resourceSpent;
            n.payoffWithGas =
                signedUnits(n.finalBalance) - signedUnits(n.initialBalance) - signedUnits(n.resourceSpent);
            n.payoff = n.payoffWithGas + signedUnits(n.gasPaid);
            run.nodes.push_back(n);
        }

        ScenarioOutcome& o = run.outcome;
        o.requestorPayoff = r.payoff;
        o.requestorPayoffWithGas = r.payoffWithGas;
        o.nodePayoff = run.nodes[0].payoff;
        o.nodePayoffWithGas = run.nodes[0].payoffWithGas;
        o.requestorGas = r.gasPaid;
        o.nodeGas = run.nodes[0].gasPaid;
        o.lockedInContract = ledger_.balanceOf(ledger_.contractAccount());
        o.resultReceived = r.valueReceived;
        o.nodeExecuted = !run.nodes[0].resourceSpent.isZero();
        o.taskId = requestor_.taskId;
        if (o.taskId) o.finalState = ledger_.contract().stateOf(*o.taskId);
        o.onChainLatency = latency_;

        run.trace = std::move(trace_);
        o.traceId = sha256(traceStepsJsonLines(run.trace)).hex().substr(0, 16);
        run.flow = flow_;
        return run;
    }

    ScenarioConfig cfg_;
    Ledger ledger_;
    FunctionStore store_;
    FunctionStore nodeStore_;
    InfoFlowLedger flow_;
    RequestorState requestor_;
    Money requestorInitial_;
    std::vector<NodeState> nodes_;
    std::vector<Money> nodeInitial_;
    std::vector<EnclavePlatform> platforms_;
    std::vector<std::uint32_t> arrival_;
    ThirdPartyState thirdParty_;
    MessageQueue messages_;
    std::map<std::pair<int, TaskId>, EnclaveInstance> instances_;
    std::map<TaskId, std::string> taskScopes_;
    std::set<std::string> executedScopes_;
    std::map<AccountId, Money> gasPaid_;
    std::optional<Receipt> deployReceipt_;
    std::optional<Timestamp> submitStart_;
    std::optional<Seconds> latency_;
    std::priority_queue<Pending, std::vector<Pending>, PendingLater> queue_;
    std::uint64_t seq_ = 0;
    std::vector<TraceStep> trace_;
};

} // namespace

ScenarioRun runScenario(const ScenarioConfig& config) { return Simulation(config).run(); }

std::vector<std::string> invariantViolations(const ScenarioRun& run) {
    std::vector<std::string> out;
    for (const auto& s : run.trace) {
        const std::string at = "step " + std::to_string(s.index) + " (" + s.actor + " " + s.action + "): ";
        if (!s.supply.conserved()) out.push_back(at + "supply not conserved");
        if (s.flow.hostSeesEncryptionKey) out.push_back(at + "host sees the result encryption key");
        if (s.flow.hostSeesPlaintext) out.push_back(at + "host sees the plaintext result");
        if (s.flow.secretVisibleBeforeExecute) out.push_back(at + "host sees the secret before execution");
    }
    const Money held = run.ledger.balanceOf(run.ledger.contractAccount());
    if (held != run.ledger.contract().totalHeld())
        out.push_back("contract balance " + toDecimal(held) + " differs from obligations " +
                      toDecimal(run.ledger.contract().totalHeld()));
    const ScenarioConfig& c = run.config;
    const bool plain = !c.tamperDelivery && !c.tamperedImage && c.resubmits == 0 && c.extraHonestNodes == 0 &&
                       !c.requestorBalance && !c.nodeBalance && c.executionDelay <= c.expires &&
                       c.functionName != "fault";
    if (plain) {
        const ParamDraw p{c.V, c.P, c.C, c.D_R, c.D_E};
        if (auto expected = closedFormPayoff(c.requestorStrategy, c.nodeStrategy, p)) {
            if (run.outcome.requestorPayoff != expected->first || run.outcome.nodePayoff != expected->second)
                out.push_back("payoffs (" + formatWhole(run.outcome.requestorPayoff) + ", " +
                              formatWhole(run.outcome.nodePayoff) + ") differ from the outcome table (" +
                              formatWhole(expected->first) + ", " + formatWhole(expected->second) + ")");
        }
    }
    return out;
}

std::optional<std::string> tableRowName(RequestorStrategy r, NodeStrategy n) {
    using R = RequestorStrategy;
    using N = NodeStrategy;
    if (r == R::Honest && n == N::Honest) return "Both honest";
    if (r == R::Honest && n == N::ClaimOnly) return "EN does not execute";
    if (r == R::Honest && n == N::ComputeNoDeliver) return "EN does not send the result";
    if (r == R::NoConfirm && n == N::Honest) return "R does not confirm";
    return std::nullopt;
}

std::optional<std::pair<int128, int128>> closedFormPayoff(RequestorStrategy r, NodeStrategy n, const ParamDraw& p) {
    const int128 V = signedUnits(p.V), P = signedUnits(p.P), C = signedUnits(p.C);
    const int128 DR = signedUnits(p.D_R), DE = signedUnits(p.D_E);
    const auto row = tableRowName(r, n);
    if (!row) return std::nullopt;
    if (*row == "Both honest") return std::pair{V - P, P - C};
    if (*row == "EN does not execute") return std::pair{-DR, -DE};
    if (*row == "EN does not send the result") return std::pair{-(P + DR), -C};
    return std::pair{V - P - DR, -C};
}

ScenarioConfig withParams(ScenarioConfig base, const ParamDraw& p) {
    base.V = p.V;
    base.P = p.P;
    base.C = p.C;
    base.D_R = p.D_R;
    base.D_E = p.D_E;
    base.threshold = p.D_R;
    return base;
}

bool PayoffMatrix::tableRowsMatch() const {
    for (const auto& c : cells)
        if (!c.matches) return false;
    return true;
}

const MatrixCell& PayoffMatrix::at(RequestorStrategy r, NodeStrategy n) const {
    for (const auto& c : cells)
        if (c.requestor == r && c.node == n) return c;
    throw Error(ErrorCode::InvalidState, "matrix cell missing");
}

namespace {
constexpr RequestorStrategy kRequestorStrategies[] = {RequestorStrategy::Honest, RequestorStrategy::NoConfirm,
                                                      RequestorStrategy::WithholdInput};
constexpr NodeStrategy kNodeStrategies[] = {NodeStrategy::Honest, NodeStrategy::ClaimOnly,
                                            NodeStrategy::ComputeNoDeliver};
} // namespace

std::vector<PayoffMatrix> payoffMatrix(const std::vector<ParamDraw>& grid, const ScenarioConfig& base) {
    std::vector<PayoffMatrix> out;
    out.reserve(grid.size());
    for (const auto& p : grid) {
        PayoffMatrix m;
        m.params = p;
        m.rational = p.rational();
        for (auto r : kRequestorStrategies) {
            for (auto n : kNodeStrategies) {
                ScenarioConfig cfg = withParams(base, p);
                cfg.requestorStrategy = r;
                cfg.nodeStrategy = n;
                MatrixCell cell{r, n, runScenario(cfg).outcome, tableRowName(r, n), closedFormPayoff(r, n, p), true};
                if (cell.expected)
                    cell.matches = cell.outcome.requestorPayoff == cell.expected->first &&
                                   cell.outcome.nodePayoff == cell.expected->second;
                m.cells.push_back(std::move(cell));
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<ParamDraw> randomRationalGrid(std::size_t count, std::uint64_t seed, std::uint64_t maxValue) {
    if (maxValue < 3) throw Error(ErrorCode::ConfigInvalid, "maxValue must allow V > P > C > 0");
    DeterministicRng rng(seed);
    auto uniform = [&](std::uint64_t lo, std::uint64_t hi) { return lo + rng.nextU64() % (hi - lo + 1); };
    std::vector<ParamDraw> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto c = uniform(1, maxValue - 2);
        const auto p = uniform(c + 1, maxValue - 1);
        const auto v = uniform(p + 1, maxValue);
        const auto dr = uniform(1, maxValue);
        const auto de = uniform(dr, maxValue);
        grid.push_back({Money::whole(v), Money::whole(p), Money::whole(c), Money::whole(dr), Money::whole(de)});
    }
    return grid;
}

bool DominanceReport::holds() const {
    for (const auto& d : draws)
        if (!d.requestorHonestDominates || !d.nodeHonestDominates || !d.cheatersLose || !d.honestBothPositive)
            return false;
    return true;
}

DominanceReport dominanceCheck(const std::vector<ParamDraw>& grid, const ScenarioConfig& base) {
    DominanceReport report;
    for (const auto& p : grid) {
        auto run = [&](RequestorStrategy r, NodeStrategy n) {
            ScenarioConfig cfg = withParams(base, p);
            cfg.requestorStrategy = r;
            cfg.nodeStrategy = n;
            return runScenario(cfg).outcome;
        };
        const auto honest = run(RequestorStrategy::Honest, NodeStrategy::Honest);
        const auto noConfirm = run(RequestorStrategy::NoConfirm, NodeStrategy::Honest);
        const auto withhold = run(RequestorStrategy::WithholdInput, NodeStrategy::Honest);
        const auto claimOnly = run(RequestorStrategy::Honest, NodeStrategy::ClaimOnly);
        const auto noDeliver = run(RequestorStrategy::Honest, NodeStrategy::ComputeNoDeliver);

        DominanceDraw d;
        d.params = p;
        d.requestorHonestDominates = honest.requestorPayoff > noConfirm.requestorPayoff &&
                                     honest.requestorPayoff > withhold.requestorPayoff;
        d.nodeHonestDominates =
            honest.nodePayoff > claimOnly.nodePayoff && honest.nodePayoff > noDeliver.nodePayoff;
        d.cheatersLose = claimOnly.nodePayoff < 0 && noDeliver.nodePayoff < 0 && withhold.requestorPayoff < 0;
        d.noConfirmPositive = noConfirm.requestorPayoff > 0;
        d.honestBothPositive = honest.requestorPayoff > 0 && honest.nodePayoff > 0;
        if (d.noConfirmPositive) ++report.noConfirmPositiveCount;
        report.draws.push_back(d);
    }
    return report;
}

namespace {

double toUsd(Money cost, double usdPerEther) {
    return double(cost.units()) / double(kUnitsPerWhole) * usdPerEther;
}

} // namespace

GasReport gasReport(Tier tier, const ScenarioConfig& base) {
    ScenarioConfig cfg = base;
    cfg.requestorStrategy = RequestorStrategy::Honest;
    cfg.nodeStrategy = NodeStrategy::Honest;
    cfg.chargeGas = true;
    cfg.tier = tier;
    const ScenarioRun run = runScenario(cfg);

    GasReport report;
    report.tier = tier;
    report.pricePerGas = cfg.gas.priceFor(tier);
    report.usdPerEther = cfg.usdPerEther;
    auto line = [&](const Receipt& r) {
        return GasLine{r.function, r.gasUsed, r.gasCharged, toUsd(r.gasCharged, cfg.usdPerEther)};
    };
    report.deploy = line(*run.deployReceipt);
    for (const char* fn : {"submitTask", "claimTask", "finalizeExecutionNode", "finalizeRequestor"}) {
        for (const auto& step : run.trace) {
            if (step.receipt && step.receipt->function == fn && step.receipt->outcome.accepted) {
                report.perFunction.push_back(line(*step.receipt));
                break;
            }
        }
    }
    if (report.perFunction.size() != 4)
        throw Error(ErrorCode::InvalidState, "honest run did not issue all four task calls");
    for (const auto& l : report.perFunction) {
        report.totalPerTaskGas += l.gas;
        report.totalPerTaskCost += l.cost;
    }
    report.totalUsd = toUsd(report.totalPerTaskCost, cfg.usdPerEther);
    return report;
}

LatencyReport latencyReport(Tier tier, const ScenarioConfig& base) {
    ScenarioConfig cfg = base;
    cfg.requestorStrategy = RequestorStrategy::Honest;
    cfg.nodeStrategy = NodeStrategy::Honest;
    cfg.tier = tier;
    const ScenarioRun run = runScenario(cfg);
    if (!run.outcome.onChainLatency) throw Error(ErrorCode::InvalidState, "honest run did not finalize");

    LatencyReport report;
    report.tier = tier;
    report.confirmationDelay = cfg.gas.delayFor(tier);
    report.executionDelay = cfg.executionDelay;
    report.latency = *run.outcome.onChainLatency;
    for (const auto& step : run.trace)
        if (step.receipt && step.actor != "harness") ++report.sequentialConfirmations;
    return report;
}

} // namespace spoc
