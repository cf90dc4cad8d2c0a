#include "spoc/serialize.hpp"

#include <iomanip>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace spoc {

using nlohmann::json;

namespace {

json moneyJ(Money m) { return toDecimal(m); }
json signedJ(int128 v) { return toDecimal(v); }

json payloadJ(const Payload& p) {
    json j = json::object();
    for (const auto& [k, v] : p) j[k] = v;
    return j;
}

json eventJ(const LedgerEvent& e) {
    return {{"kind", std::string(toString(e.kind))},
            {"taskId", e.taskId},
            {"blockHeight", e.blockHeight},
            {"payload", payloadJ(e.payload)}};
}

json receiptJ(const Receipt& r) {
    json j{{"blockHeight", r.blockHeight},
           {"timestamp", r.timestamp},
           {"function", r.function},
           {"sender", r.sender.hex()},
           {"value", moneyJ(r.value)},
           {"tier", std::string(toString(r.tier))},
           {"gasUsed", r.gasUsed},
           {"gasCharged", moneyJ(r.gasCharged)},
           {"accepted", r.outcome.accepted},
           {"reverted", r.reverted}};
    j["refusal"] = r.outcome.refusal ? json(std::string(toString(*r.outcome.refusal))) : json(nullptr);
    j["taskId"] = r.outcome.taskId ? json(*r.outcome.taskId) : json(nullptr);
    j["events"] = json::array();
    for (const auto& e : r.events) j["events"].push_back(eventJ(e));
    j["transfers"] = json::array();
    for (const auto& t : r.transfers)
        j["transfers"].push_back({{"from", t.from.hex()}, {"to", t.to.hex()}, {"amount", moneyJ(t.amount)}});
    return j;
}

json contractJ(const Contract& c) {
    json tasks = json::object();
    for (const auto& [id, t] : c.tasks()) {
        tasks[std::to_string(id)] = {{"functionName", t.functionName},
                                     {"hashLock", t.hashLock.hex()},
                                     {"requestor", t.requestor.hex()},
                                     {"payment", moneyJ(t.payment)},
                                     {"requestorDeposit", moneyJ(t.requestorDeposit)},
                                     {"executionNode", t.executionNode.hex()},
                                     {"executionNodeDeposit", moneyJ(t.executionNodeDeposit)},
                                     {"claimed", t.claimed},
                                     {"completed", t.completed},
                                     {"timedOut", t.timedOut},
                                     {"start", t.start},
                                     {"expires", t.expires},
                                     {"state", std::string(toString(t.state()))},
                                     {"held", moneyJ(c.heldFor(id))}};
    }
    return {{"threshold", moneyJ(c.threshold())},
            {"numTasks", c.numTasks()},
            {"totalHeld", moneyJ(c.totalHeld())},
            {"tasks", tasks}};
}

json outcomeJ(const ScenarioRun& run) {
    const ScenarioOutcome& o = run.outcome;
    json j{{"requestor", std::string(toString(run.config.requestorStrategy))},
           {"node", std::string(toString(run.config.nodeStrategy))},
           {"requestorPayoff", signedJ(o.requestorPayoff)},
           {"nodePayoff", signedJ(o.nodePayoff)},
           {"requestorPayoffWithGas", signedJ(o.requestorPayoffWithGas)},
           {"nodePayoffWithGas", signedJ(o.nodePayoffWithGas)},
           {"lockedInContract", moneyJ(o.lockedInContract)},
           {"requestorGas", moneyJ(o.requestorGas)},
           {"nodeGas", moneyJ(o.nodeGas)},
           {"resultReceived", o.resultReceived},
           {"nodeExecuted", o.nodeExecuted},
           {"traceId", o.traceId}};
    j["taskId"] = o.taskId ? json(*o.taskId) : json(nullptr);
    j["finalState"] = o.finalState ? json(std::string(toString(*o.finalState))) : json(nullptr);
    j["onChainLatency"] = o.onChainLatency ? json(*o.onChainLatency) : json(nullptr);
    return j;
}

json stepJ(const TraceStep& s) {
    json j{{"type", "step"},
           {"index", s.index},
           {"time", s.time},
           {"blockHeight", s.blockHeight},
           {"actor", s.actor},
           {"action", s.action},
           {"detail", payloadJ(s.detail)},
           {"supply",
            {{"circulating", moneyJ(s.supply.circulating)},
             {"contractHeld", moneyJ(s.supply.contractHeld)},
             {"burned", moneyJ(s.supply.burned)},
             {"totalSupply", moneyJ(s.supply.totalSupply)}}},
           {"flow",
            {{"hostSeesSecret", s.flow.hostSeesSecret},
             {"hostSeesEncryptionKey", s.flow.hostSeesEncryptionKey},
             {"hostSeesPlaintext", s.flow.hostSeesPlaintext},
             {"secretVisibleBeforeExecute", s.flow.secretVisibleBeforeExecute}}}};
    if (s.receipt) j["receipt"] = receiptJ(*s.receipt);
    return j;
}

json headerJ(const ScenarioRun& run) {
    const ScenarioConfig& c = run.config;
    json nodes = json::array();
    for (const auto& n : run.nodes) nodes.push_back(n.account.hex());
    return {{"type", "scenario"},
            {"requestor", std::string(toString(c.requestorStrategy))},
            {"node", std::string(toString(c.nodeStrategy))},
            {"V", moneyJ(c.V)},
            {"P", moneyJ(c.P)},
            {"C", moneyJ(c.C)},
            {"D_R", moneyJ(c.D_R)},
            {"D_E", moneyJ(c.D_E)},
            {"threshold", moneyJ(c.threshold)},
            {"expires", c.expires},
            {"tier", std::string(toString(c.tier))},
            {"seed", c.rngSeed},
            {"executionDelay", c.executionDelay},
            {"chargeGas", c.chargeGas},
            {"function", c.functionName},
            {"inputs", toHex(c.inputs)},
            {"destination", std::string(toString(c.destination))},
            {"tamperDelivery", c.tamperDelivery},
            {"tamperedImage", c.tamperedImage},
            {"extraNodes", c.extraHonestNodes},
            {"resubmits", c.resubmits},
            {"requestorAccount", run.requestor.account.hex()},
            {"nodeAccounts", nodes}};
}

Money moneyFrom(const json& j) { return Money(parseMoney(j.get<std::string>())); }

// ---- text tables ----------------------------------------------------------

class Table {
public:
    explicit Table(std::vector<std::string> header) : rows_{std::move(header)} {}
    void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

    std::string render() const {
        std::vector<std::size_t> width;
        for (const auto& r : rows_) {
            width.resize(std::max(width.size(), r.size()), 0);
            for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
        }
        std::ostringstream out;
        for (std::size_t ri = 0; ri < rows_.size(); ++ri) {
            line(out, rows_[ri], width);
            if (ri == 0) {
                std::vector<std::string> rule;
                for (auto w : width) rule.emplace_back(w, '-');
                line(out, rule, width);
            }
        }
        return out.str();
    }

private:
    static void line(std::ostringstream& out, const std::vector<std::string>& cells,
                     const std::vector<std::size_t>& width) {
        std::string text;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) text += "  ";
            text += cells[i];
            if (i + 1 < cells.size()) text.append(width[i] - cells[i].size(), ' ');
        }
        out << text << '\n';
    }

    std::vector<std::vector<std::string>> rows_;
};

std::string usd(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v;
    return s.str();
}

std::string optText(const std::optional<std::pair<int128, int128>>& p, bool first) {
    if (!p) return "-";
    return formatWhole(first ? p->first : p->second);
}

} // namespace

std::string eventJson(const LedgerEvent& event) { return eventJ(event).dump(); }

std::string eventsJsonLines(const std::vector<LedgerEvent>& events) {
    std::string out;
    for (const auto& e : events) out += eventJson(e) + "\n";
    return out;
}

LedgerEvent parseEventJson(std::string_view line) {
    try {
        const json j = json::parse(line);
        if (j.size() != 4) throw Error(ErrorCode::ParseError, "event line must have exactly four fields");
        LedgerEvent e;
        e.kind = parseEventKind(j.at("kind").get<std::string>());
        e.taskId = j.at("taskId").get<TaskId>();
        e.blockHeight = j.at("blockHeight").get<std::uint64_t>();
        for (const auto& [k, v] : j.at("payload").items()) e.payload[k] = v.get<std::string>();
        return e;
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::ParseError, std::string("event line: ") + ex.what());
    }
}

std::string receiptJson(const Receipt& receipt) { return receiptJ(receipt).dump(); }
std::string contractDumpJson(const Contract& contract) { return contractJ(contract).dump(2); }
std::string outcomeJson(const ScenarioRun& run) { return outcomeJ(run).dump(2); }

std::string matrixJson(const std::vector<PayoffMatrix>& matrices) {
    json out = json::array();
    for (const auto& m : matrices) {
        json cells = json::array();
        for (const auto& c : m.cells) {
            json cell{{"requestor", std::string(toString(c.requestor))},
                      {"node", std::string(toString(c.node))},
                      {"requestorPayoff", signedJ(c.outcome.requestorPayoff)},
                      {"nodePayoff", signedJ(c.outcome.nodePayoff)},
                      {"matches", c.matches}};
            cell["tableRow"] = c.tableRow ? json(*c.tableRow) : json(nullptr);
            cell["expected"] = c.expected ? json{{"requestor", signedJ(c.expected->first)},
                                                 {"node", signedJ(c.expected->second)}}
                                          : json(nullptr);
            cells.push_back(cell);
        }
        out.push_back({{"params",
                        {{"V", moneyJ(m.params.V)},
                         {"P", moneyJ(m.params.P)},
                         {"C", moneyJ(m.params.C)},
                         {"D_R", moneyJ(m.params.D_R)},
                         {"D_E", moneyJ(m.params.D_E)}}},
                       {"rational", m.rational},
                       {"tableRowsMatch", m.tableRowsMatch()},
                       {"cells", cells}});
    }
    return out.dump(2);
}

std::string gasReportJson(const GasReport& r) {
    auto line = [](const GasLine& l) {
        return json{{"function", l.function}, {"gas", l.gas}, {"cost", moneyJ(l.cost)}, {"usd", l.usd}};
    };
    json funcs = json::array();
    for (const auto& l : r.perFunction) funcs.push_back(line(l));
    return json{{"tier", std::string(toString(r.tier))},
                {"pricePerGas", moneyJ(r.pricePerGas)},
                {"usdPerEther", r.usdPerEther},
                {"deploy", line(r.deploy)},
                {"functions", funcs},
                {"totalPerTaskGas", r.totalPerTaskGas},
                {"totalPerTaskCost", moneyJ(r.totalPerTaskCost)},
                {"totalUsd", r.totalUsd}}
        .dump(2);
}

std::string latencyReportJson(const LatencyReport& r) {
    return json{{"tier", std::string(toString(r.tier))},
                {"confirmationDelay", r.confirmationDelay},
                {"sequentialConfirmations", r.sequentialConfirmations},
                {"executionDelay", r.executionDelay},
                {"latency", r.latency}}
        .dump(2);
}

std::string traceStepsJsonLines(const std::vector<TraceStep>& steps) {
    std::string out;
    for (const auto& s : steps) out += stepJ(s).dump() + "\n";
    return out;
}

std::string traceJsonLines(const ScenarioRun& run) {
    std::string out = headerJ(run).dump() + "\n";
    out += traceStepsJsonLines(run.trace);
    json outcome = outcomeJ(run);
    outcome["type"] = "outcome";
    out += outcome.dump() + "\n";
    out += json{{"type", "contract"}, {"dump", contractJ(run.ledger.contract())}}.dump() + "\n";
    return out;
}

InspectResult inspectTrace(std::string_view traceText) {
    InspectResult r;
    std::optional<json> header;
    std::optional<json> outcome;
    std::string stepLines;
    std::string requestorAccount;
    std::vector<std::string> nodeAccounts;
    Money V;
    std::map<std::string, int128> net;  // transfers in minus out, per account
    std::map<std::string, int128> gas;  // gas charged per sender
    std::map<std::string, int128> cost; // resource cost per node account
    bool accepted = false;

    std::istringstream in{std::string(traceText)};
    std::string line;
    std::size_t lineNo = 0;
    try {
        while (std::getline(in, line)) {
            ++lineNo;
            if (line.empty()) continue;
            const json j = json::parse(line);
            const std::string type = j.at("type").get<std::string>();
            if (type == "scenario") {
                header = j;
                r.requestorStrategy = j.at("requestor").get<std::string>();
                r.nodeStrategy = j.at("node").get<std::string>();
                requestorAccount = j.at("requestorAccount").get<std::string>();
                for (const auto& a : j.at("nodeAccounts")) nodeAccounts.push_back(a.get<std::string>());
                V = moneyFrom(j.at("V"));
            } else if (type == "step") {
                if (!header) throw Error(ErrorCode::ParseError, "step before scenario header");
                stepLines += line + "\n";
                ++r.steps;
                const auto& sup = j.at("supply");
                if (moneyFrom(sup.at("circulating")) + moneyFrom(sup.at("burned")) != moneyFrom(sup.at("totalSupply")))
                    r.conservedEveryStep = false;
                const std::string action = j.at("action").get<std::string>();
                if (action == "acceptResult" && j.at("actor") == "requestor") accepted = true;
                if (action == "execute" || action == "executeFailed") {
                    const auto& d = j.at("detail");
                    const auto node = std::stoul(d.at("node").get<std::string>());
                    if (node >= nodeAccounts.size()) throw Error(ErrorCode::ParseError, "execute by unknown node");
                    cost[nodeAccounts[node]] += signedUnits(moneyFrom(d.at("resourceCost")));
                }
                if (j.contains("receipt")) {
                    const auto& rc = j.at("receipt");
                    gas[rc.at("sender").get<std::string>()] += signedUnits(moneyFrom(rc.at("gasCharged")));
                    for (const auto& t : rc.at("transfers")) {
                        const int128 amount = signedUnits(moneyFrom(t.at("amount")));
                        net[t.at("from").get<std::string>()] -= amount;
                        net[t.at("to").get<std::string>()] += amount;
                    }
                }
            } else if (type == "outcome") {
                outcome = j;
            } else if (type != "contract") {
                throw Error(ErrorCode::ParseError, "unknown line type '" + type + "'");
            }
        }
        if (!header || !outcome) throw Error(ErrorCode::ParseError, "trace lacks a scenario header or outcome line");
        if (nodeAccounts.empty()) throw Error(ErrorCode::ParseError, "trace names no execution node");

        r.requestorPayoff = net[requestorAccount] + (accepted ? signedUnits(V) : 0);
        r.requestorPayoffWithGas = r.requestorPayoff - gas[requestorAccount];
        r.nodePayoff = net[nodeAccounts[0]] - cost[nodeAccounts[0]];
        r.nodePayoffWithGas = r.nodePayoff - gas[nodeAccounts[0]];

        r.recordedRequestorPayoff = parseSigned(outcome->at("requestorPayoff").get<std::string>());
        r.recordedNodePayoff = parseSigned(outcome->at("nodePayoff").get<std::string>());
        r.recordedRequestorPayoffWithGas = parseSigned(outcome->at("requestorPayoffWithGas").get<std::string>());
        r.recordedNodePayoffWithGas = parseSigned(outcome->at("nodePayoffWithGas").get<std::string>());
        r.traceId = outcome->at("traceId").get<std::string>();
        r.traceIdMatches = sha256(stepLines).hex().substr(0, 16) == r.traceId;
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::ParseError, "trace line " + std::to_string(lineNo) + ": " + ex.what());
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::ParseError, "trace line " + std::to_string(lineNo) + ": bad number");
    }
    return r;
}

std::string inspectJson(const InspectResult& r) {
    return json{{"requestor", r.requestorStrategy},
                {"node", r.nodeStrategy},
                {"steps", r.steps},
                {"conservedEveryStep", r.conservedEveryStep},
                {"requestorPayoff", signedJ(r.requestorPayoff)},
                {"nodePayoff", signedJ(r.nodePayoff)},
                {"requestorPayoffWithGas", signedJ(r.requestorPayoffWithGas)},
                {"nodePayoffWithGas", signedJ(r.nodePayoffWithGas)},
                {"traceId", r.traceId},
                {"traceIdMatches", r.traceIdMatches},
                {"consistent", r.consistent()}}
        .dump(2);
}

std::string outcomeTable(const ScenarioRun& run) {
    const ScenarioOutcome& o = run.outcome;
    Table t({"field", "value"});
    t.row({"requestor strategy", std::string(toString(run.config.requestorStrategy))});
    t.row({"node strategy", std::string(toString(run.config.nodeStrategy))});
    t.row({"requestor payoff", formatWhole(o.requestorPayoff)});
    t.row({"node payoff", formatWhole(o.nodePayoff)});
    t.row({"requestor payoff with gas", formatWhole(o.requestorPayoffWithGas)});
    t.row({"node payoff with gas", formatWhole(o.nodePayoffWithGas)});
    t.row({"locked in contract", formatWhole(signedUnits(o.lockedInContract))});
    t.row({"result received", o.resultReceived ? "yes" : "no"});
    t.row({"node executed", o.nodeExecuted ? "yes" : "no"});
    t.row({"final task state", o.finalState ? std::string(toString(*o.finalState)) : "-"});
    t.row({"on-chain latency (s)", o.onChainLatency ? std::to_string(*o.onChainLatency) : "-"});
    t.row({"trace id", o.traceId});
    return t.render();
}

std::string matrixTable(const std::vector<PayoffMatrix>& matrices) {
    std::string out;
    for (std::size_t i = 0; i < matrices.size(); ++i) {
        const auto& m = matrices[i];
        if (i > 0) out += "\n";
        out += "V=" + formatWhole(signedUnits(m.params.V)) + " P=" + formatWhole(signedUnits(m.params.P)) +
               " C=" + formatWhole(signedUnits(m.params.C)) + " D_R=" + formatWhole(signedUnits(m.params.D_R)) +
               " D_E=" + formatWhole(signedUnits(m.params.D_E)) + "\n";
        Table t({"requestor", "node", "row", "R payoff", "EN payoff", "R expected", "EN expected", "match"});
        for (const auto& c : m.cells)
            t.row({std::string(toString(c.requestor)), std::string(toString(c.node)), c.tableRow.value_or("-"),
                   formatWhole(c.outcome.requestorPayoff), formatWhole(c.outcome.nodePayoff), optText(c.expected, true),
                   optText(c.expected, false), c.expected ? (c.matches ? "yes" : "NO") : "-"});
        out += t.render();
    }
    return out;
}

std::string gasTable(const GasReport& r) {
    Table t({"Function", "Gas", "Cost (ether)", "USD"});
    auto add = [&](const std::string& name, std::uint64_t gasUsed, Money c, double dollars) {
        t.row({name, std::to_string(gasUsed), formatWhole(signedUnits(c)), usd(dollars)});
    };
    add("Deploy", r.deploy.gas, r.deploy.cost, r.deploy.usd);
    for (const auto& l : r.perFunction) add(l.function, l.gas, l.cost, l.usd);
    add("Total per task", r.totalPerTaskGas, r.totalPerTaskCost, r.totalUsd);
    return "tier " + std::string(toString(r.tier)) + ", " + toDecimal(r.pricePerGas) + " units per gas\n" + t.render();
}

std::string latencyTable(const LatencyReport& r) {
    Table t({"tier", "confirmation delay (s)", "confirmations", "execution delay (s)", "latency (s)"});
    t.row({std::string(toString(r.tier)), std::to_string(r.confirmationDelay), std::to_string(r.sequentialConfirmations),
           std::to_string(r.executionDelay), std::to_string(r.latency)});
    return t.render();
}

std::string inspectTable(const InspectResult& r) {
    Table t({"field", "recomputed", "recorded"});
    t.row({"requestor payoff", formatWhole(r.requestorPayoff), formatWhole(r.recordedRequestorPayoff)});
    t.row({"node payoff", formatWhole(r.nodePayoff), formatWhole(r.recordedNodePayoff)});
    t.row({"requestor payoff with gas", formatWhole(r.requestorPayoffWithGas),
           formatWhole(r.recordedRequestorPayoffWithGas)});
    t.row({"node payoff with gas", formatWhole(r.nodePayoffWithGas), formatWhole(r.recordedNodePayoffWithGas)});
    t.row({"steps", std::to_string(r.steps), "-"});
    t.row({"conserved every step", r.conservedEveryStep ? "yes" : "no", "-"});
    t.row({"trace id", r.traceIdMatches ? "matches" : "MISMATCH", r.traceId});
    return t.render();
}

} // namespace spoc
