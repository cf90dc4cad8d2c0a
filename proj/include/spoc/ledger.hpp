#pragma once

// Single-chain ledger simulation. One transaction per block; gas is metered
// on every call and, when charging is enabled, burned from the sender.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spoc/contract.hpp"
#include "spoc/types.hpp"

namespace spoc {

struct GasSchedule {
    std::map<std::string, std::uint64_t, std::less<>> perFunction;
    std::map<Tier, Money> pricePerGas;
    std::map<Tier, Seconds> confirmationDelay;

    // Gas units measured for the deployed contract; tier prices are the
    // total-per-task ether figures divided by the per-task gas.
    static GasSchedule defaults();

    std::uint64_t gasFor(std::string_view function) const;
    Money priceFor(Tier tier) const;
    Seconds delayFor(Tier tier) const;
    void validate() const;

    friend bool operator==(const GasSchedule&, const GasSchedule&) = default;
};

struct LedgerConfig {
    GasSchedule gas = GasSchedule::defaults();
    Money threshold = Money(500'000'000'000'000'000ULL);
    bool chargeGas = false;

    friend bool operator==(const LedgerConfig&, const LedgerConfig&) = default;
};

struct BlockClock {
    Timestamp now = 0;
    std::uint64_t blockHeight = 0;

    friend bool operator==(const BlockClock&, const BlockClock&) = default;
};

struct Transfer {
    AccountId from;
    AccountId to;
    Money amount;

    friend bool operator==(const Transfer&, const Transfer&) = default;
};

struct Receipt {
    std::uint64_t blockHeight = 0;
    Timestamp timestamp = 0;
    std::string function;
    AccountId sender;
    Money value;
    Tier tier = Tier::Standard;
    std::uint64_t gasUsed = 0;
    Money gasCharged;
    CallOutcome outcome;
    bool reverted = false;
    std::vector<LedgerEvent> events;
    std::vector<Transfer> transfers; // value escrow first, then contract payouts

    friend bool operator==(const Receipt&, const Receipt&) = default;
};

struct EventFilter {
    std::optional<EventKind> kind;
    std::optional<TaskId> taskId;
};

class Ledger {
public:
    explicit Ledger(LedgerConfig config = {});

    AccountId createAccount(Money initialBalance);
    bool hasAccount(const AccountId& id) const { return balances_.contains(id); }
    Money balanceOf(const AccountId& id) const;
    const AccountId& contractAccount() const { return contractId_; }

    Receipt deploy(const AccountId& deployer, Tier tier);
    bool deployed() const { return deployed_; }

    // Throws InsufficientBalance / UnknownFunction / NonPayable / UnknownAccount
    // without changing any state.
    Receipt submitTransaction(const AccountId& sender, const ContractCall& call, Money value, Tier tier);

    // Off-chain time passing; no block is mined.
    void advanceTime(Seconds dt);
    void advanceTo(Timestamp t);

    std::vector<LedgerEvent> queryEvents(const EventFilter& filter = {}) const;
    const std::vector<LedgerEvent>& events() const { return events_; }

    const Contract& contract() const { return contract_; }
    const BlockClock& clock() const { return clock_; }
    const LedgerConfig& config() const { return config_; }
    const std::map<AccountId, Money>& balances() const { return balances_; }

    Money totalSupply() const { return totalSupply_; }
    Money burned() const { return burned_; }
    Money circulating() const;
    bool conserved() const { return circulating() + burned_ == totalSupply_; }

    friend bool operator==(const Ledger&, const Ledger&) = default;

private:
    class TxContext;

    void mineBlock(Tier tier);
    Money gasCost(std::string_view function, Tier tier) const;
    void requireSender(const AccountId& sender) const;

    LedgerConfig config_;
    AccountId contractId_;
    std::map<AccountId, Money> balances_;
    std::uint64_t accountCounter_ = 0;
    BlockClock clock_;
    std::vector<LedgerEvent> events_;
    Money totalSupply_;
    Money burned_;
    bool deployed_ = false;
    Contract contract_;
};

} // namespace spoc
