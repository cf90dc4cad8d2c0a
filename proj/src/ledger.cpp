#include "spoc/ledger.hpp"

#include <cstring>

namespace spoc {

std::string_view toString(Tier tier) {
    switch (tier) {
    case Tier::Slow: return "slow";
    case Tier::Standard: return "standard";
    case Tier::Fast: return "fast";
    }
    return "?";
}

Tier parseTier(std::string_view name) {
    if (name == "slow") return Tier::Slow;
    if (name == "standard") return Tier::Standard;
    if (name == "fast") return Tier::Fast;
    throw Error(ErrorCode::ParseError, "unknown tier '" + std::string(name) + "'");
}

std::string_view toString(EventKind kind) {
    switch (kind) {
    case EventKind::TaskSubmitted: return "TaskSubmitted";
    case EventKind::TaskClaimed: return "TaskClaimed";
    case EventKind::TaskFinished: return "TaskFinished";
    case EventKind::TaskTimedOut: return "TaskTimedOut";
    }
    return "?";
}

EventKind parseEventKind(std::string_view name) {
    for (auto k : {EventKind::TaskSubmitted, EventKind::TaskClaimed, EventKind::TaskFinished, EventKind::TaskTimedOut})
        if (toString(k) == name) return k;
    throw Error(ErrorCode::ParseError, "unknown event kind '" + std::string(name) + "'");
}

std::string_view functionName(const ContractCall& call) {
    static constexpr std::string_view names[] = {"submitTask", "claimTask", "finalizeExecutionNode",
                                                 "finalizeRequestor", "timeout"};
    return names[call.index()];
}

bool isPayable(const ContractCall& call) {
    return std::holds_alternative<SubmitTaskCall>(call) || std::holds_alternative<ClaimTaskCall>(call);
}

GasSchedule GasSchedule::defaults() {
    GasSchedule g;
    g.perFunction = {
        {"deploy", 1'260'850},
        {"submitTask", 277'880},
        {"claimTask", 145'120},
        {"finalizeExecutionNode", 52'802},
        {"finalizeRequestor", 106'357},
        // not measured in the reference deployment; one storage write plus a transfer
        {"timeout", 30'000},
    };
    // floor(total-per-task ether * 10^18 / 582159)
    g.pricePerGas = {
        {Tier::Slow, Money(103'064'626ULL)},
        {Tier::Standard, Money(10'993'560'178ULL)},
        {Tier::Fast, Money(28'995'514'970ULL)},
    };
    g.confirmationDelay = {{Tier::Slow, 600}, {Tier::Standard, 300}, {Tier::Fast, 120}};
    return g;
}

std::uint64_t GasSchedule::gasFor(std::string_view function) const {
    auto it = perFunction.find(function);
    if (it == perFunction.end())
        throw Error(ErrorCode::UnknownFunction, "no gas entry for '" + std::string(function) + "'");
    return it->second;
}

Money GasSchedule::priceFor(Tier tier) const {
    auto it = pricePerGas.find(tier);
    if (it == pricePerGas.end()) throw Error(ErrorCode::ConfigInvalid, "no price for tier " + std::string(toString(tier)));
    return it->second;
}

Seconds GasSchedule::delayFor(Tier tier) const {
    auto it = confirmationDelay.find(tier);
    if (it == confirmationDelay.end())
        throw Error(ErrorCode::ConfigInvalid, "no confirmation delay for tier " + std::string(toString(tier)));
    return it->second;
}

void GasSchedule::validate() const {
    for (const auto& [name, gas] : perFunction)
        if (gas == 0) throw Error(ErrorCode::ConfigInvalid, "gas for '" + name + "' must be positive");
    for (auto tier : {Tier::Slow, Tier::Standard, Tier::Fast}) {
        if (priceFor(tier).isZero())
            throw Error(ErrorCode::ConfigInvalid, "price for tier " + std::string(toString(tier)) + " must be positive");
        (void)delayFor(tier); // zero delay is allowed
    }
}

namespace {

AccountId deriveAccount(std::string_view domain, std::uint64_t counter) {
    std::string material(domain);
    material += ':';
    material += std::to_string(counter);
    const Digest d = sha256(material);
    AccountId id;
    std::memcpy(id.bytes.data(), d.bytes.data(), id.bytes.size());
    return id;
}

} // namespace

class Ledger::TxContext final : public CallContext {
public:
    TxContext(Ledger& ledger, Receipt& receipt) : ledger_(ledger), receipt_(receipt) {}

    const AccountId& sender() const override { return receipt_.sender; }
    Money value() const override { return receipt_.value; }
    Timestamp now() const override { return ledger_.clock_.now; }

    void transfer(const AccountId& to, Money amount) override {
        if (amount.isZero()) return;
        Money& from = ledger_.balances_.at(ledger_.contractId_);
        if (from < amount) throw Error(ErrorCode::InsufficientBalance, "contract cannot cover payout");
        from -= amount;
        // sending to an address that never transacted creates it, as on a real chain
        ledger_.balances_[to] += amount;
        receipt_.transfers.push_back({ledger_.contractId_, to, amount});
    }

    void emit(EventKind kind, TaskId taskId, Payload payload) override {
        LedgerEvent e{kind, taskId, ledger_.clock_.blockHeight, std::uint32_t(receipt_.events.size()),
                      std::move(payload)};
        receipt_.events.push_back(std::move(e));
    }

private:
    Ledger& ledger_;
    Receipt& receipt_;
};

Ledger::Ledger(LedgerConfig config)
    : config_(std::move(config)), contractId_(deriveAccount("spoc-contract", 0)), contract_(config_.threshold) {
    config_.gas.validate();
    balances_[contractId_] = Money{};
}

AccountId Ledger::createAccount(Money initialBalance) {
    AccountId id;
    do {
        id = deriveAccount("spoc-account", accountCounter_++);
    } while (balances_.contains(id) || id == kNullAccount);
    totalSupply_ += initialBalance;
    balances_[id] = initialBalance;
    return id;
}

Money Ledger::balanceOf(const AccountId& id) const {
    auto it = balances_.find(id);
    if (it == balances_.end()) throw Error(ErrorCode::UnknownAccount, "unknown account " + id.hex());
    return it->second;
}

Money Ledger::circulating() const {
    Money sum;
    for (const auto& [id, balance] : balances_) sum += balance;
    return sum;
}

Money Ledger::gasCost(std::string_view function, Tier tier) const {
    if (!config_.chargeGas) return Money{};
    return checkedMul(config_.gas.priceFor(tier), config_.gas.gasFor(function));
}

void Ledger::requireSender(const AccountId& sender) const {
    if (sender == kNullAccount) throw Error(ErrorCode::NullSender, "the null account cannot send transactions");
    if (sender == contractId_) throw Error(ErrorCode::UnknownAccount, "the contract account cannot send transactions");
    if (!balances_.contains(sender)) throw Error(ErrorCode::UnknownAccount, "unknown sender " + sender.hex());
}

void Ledger::mineBlock(Tier tier) {
    clock_.blockHeight += 1;
    clock_.now += config_.gas.delayFor(tier);
}

void Ledger::advanceTime(Seconds dt) { clock_.now += dt; }

void Ledger::advanceTo(Timestamp t) {
    if (t > clock_.now) clock_.now = t;
}

Receipt Ledger::deploy(const AccountId& deployer, Tier tier) {
    requireSender(deployer);
    if (deployed_) throw Error(ErrorCode::InvalidState, "contract already deployed");
    const std::uint64_t gas = config_.gas.gasFor(kDeployFunction);
    const Money cost = gasCost(kDeployFunction, tier);
    if (balances_.at(deployer) < cost) throw Error(ErrorCode::InsufficientBalance, "deployer cannot pay gas");

    balances_.at(deployer) -= cost;
    burned_ += cost;
    mineBlock(tier);
    deployed_ = true;

    Receipt r;
    r.blockHeight = clock_.blockHeight;
    r.timestamp = clock_.now;
    r.function = std::string(kDeployFunction);
    r.sender = deployer;
    r.tier = tier;
    r.gasUsed = gas;
    r.gasCharged = cost;
    r.outcome = CallOutcome::accept();
    return r;
}

Receipt Ledger::submitTransaction(const AccountId& sender, const ContractCall& call, Money value, Tier tier) {
    requireSender(sender);
    if (!deployed_) throw Error(ErrorCode::ContractNotDeployed, "deploy the contract first");
    const std::string_view fn = functionName(call);
    const std::uint64_t gas = config_.gas.gasFor(fn);
    if (!value.isZero() && !isPayable(call))
        throw Error(ErrorCode::NonPayable, std::string(fn) + " does not accept value");
    const Money cost = gasCost(fn, tier);
    if (balances_.at(sender) < value + cost)
        throw Error(ErrorCode::InsufficientBalance, "sender " + sender.hex() + " cannot cover value and gas");

    balances_.at(sender) -= cost;
    burned_ += cost;
    mineBlock(tier);

    Receipt r;
    r.blockHeight = clock_.blockHeight;
    r.timestamp = clock_.now;
    r.function = std::string(fn);
    r.sender = sender;
    r.value = value;
    r.tier = tier;
    r.gasUsed = gas;
    r.gasCharged = cost;

    // Everything below either fully applies or is rolled back; gas stays burned.
    const auto balancesBefore = balances_;
    const Contract contractBefore = contract_;
    try {
        if (!value.isZero()) {
            balances_.at(sender) -= value;
            balances_.at(contractId_) += value;
            r.transfers.push_back({sender, contractId_, value});
        }
        TxContext ctx(*this, r);
        r.outcome = contract_.dispatch(ctx, call);
    } catch (const Error&) {
        balances_ = balancesBefore;
        contract_ = contractBefore;
        r.reverted = true;
        r.outcome = CallOutcome{};
        r.events.clear();
        r.transfers.clear();
    }
    events_.insert(events_.end(), r.events.begin(), r.events.end());
    return r;
}

std::vector<LedgerEvent> Ledger::queryEvents(const EventFilter& filter) const {
    std::vector<LedgerEvent> out;
    for (const auto& e : events_) {
        if (filter.kind && e.kind != *filter.kind) continue;
        if (filter.taskId && e.taskId != *filter.taskId) continue;
        out.push_back(e);
    }
    return out;
}

} // namespace spoc
