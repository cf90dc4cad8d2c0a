#include "spoc/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "spoc/config.hpp"
#include "spoc/serialize.hpp"

namespace spoc {

namespace {

struct Options {
    std::string configPath;
    std::string format = "table";
    std::optional<std::uint64_t> seed;
    std::string requestor;
    std::string node;
    std::string tier;
    std::string tracePath;
    std::string eventsPath;
    std::string contractPath;
    std::string gridPath;
    std::size_t draws = 0;
};

const std::vector<std::string> kStrategiesR = {"honest", "no-confirm", "withhold-input"};
const std::vector<std::string> kStrategiesN = {"honest", "claim-only", "compute-no-deliver"};
const std::vector<std::string> kTiers = {"slow", "standard", "fast"};

void writeFile(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::ConfigInvalid, "cannot write " + path);
    f << text;
}

ScenarioConfig baseConfig(const Options& o) {
    ScenarioConfig cfg = o.configPath.empty() ? ScenarioConfig{} : loadConfigFile(o.configPath);
    if (o.seed) cfg.rngSeed = *o.seed;
    if (!o.tier.empty()) cfg.tier = parseTier(o.tier);
    return cfg;
}

void addCommon(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.configPath, "key = value scenario config file")->check(CLI::ExistingFile);
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "table"}));
}

int scenario(const Options& o, std::ostream& out, std::ostream& err) {
    ScenarioConfig cfg = baseConfig(o);
    if (!o.requestor.empty()) cfg.requestorStrategy = parseRequestorStrategy(o.requestor);
    if (!o.node.empty()) cfg.nodeStrategy = parseNodeStrategy(o.node);
    const ScenarioRun run = runScenario(cfg);
    if (!o.tracePath.empty()) writeFile(o.tracePath, traceJsonLines(run));
    if (!o.eventsPath.empty()) writeFile(o.eventsPath, eventsJsonLines(run.ledger.events()));
    if (!o.contractPath.empty()) writeFile(o.contractPath, contractDumpJson(run.ledger.contract()) + "\n");
    out << (o.format == "json" ? outcomeJson(run) + "\n" : outcomeTable(run));
    const auto violations = invariantViolations(run);
    for (const auto& v : violations) err << "assertion failed: " << v << '\n';
    return violations.empty() ? kExitOk : kExitAssertion;
}

int payoffs(const Options& o, std::ostream& out, std::ostream& err) {
    const ScenarioConfig cfg = baseConfig(o);
    std::vector<ParamDraw> grid;
    if (!o.gridPath.empty())
        grid = loadGridFile(o.gridPath);
    else if (o.draws > 0)
        grid = randomRationalGrid(o.draws, cfg.rngSeed);
    else
        grid = {{cfg.V, cfg.P, cfg.C, cfg.D_R, cfg.D_E}};
    const auto matrices = payoffMatrix(grid, cfg);
    out << (o.format == "json" ? matrixJson(matrices) + "\n" : matrixTable(matrices));
    std::size_t bad = 0;
    for (const auto& m : matrices) bad += m.tableRowsMatch() ? 0 : 1;
    if (bad > 0) err << "assertion failed: " << bad << " draw(s) differ from the outcome table\n";
    return bad == 0 ? kExitOk : kExitAssertion;
}

int gas(const Options& o, std::ostream& out) {
    const ScenarioConfig cfg = baseConfig(o);
    const GasReport r = gasReport(cfg.tier, cfg);
    out << (o.format == "json" ? gasReportJson(r) + "\n" : gasTable(r));
    return kExitOk;
}

int latency(const Options& o, std::ostream& out) {
    const ScenarioConfig cfg = baseConfig(o);
    const LatencyReport r = latencyReport(cfg.tier, cfg);
    out << (o.format == "json" ? latencyReportJson(r) + "\n" : latencyTable(r));
    return kExitOk;
}

int inspect(const Options& o, std::ostream& out, std::ostream& err) {
    const InspectResult r = inspectTrace(readTextFile(o.tracePath));
    out << (o.format == "json" ? inspectJson(r) + "\n" : inspectTable(r));
    if (!r.consistent()) err << "assertion failed: trace does not reproduce its recorded outcome\n";
    return r.consistent() ? kExitOk : kExitAssertion;
}

} // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deterministic simulator of a blockchain escrow protocol for outsourced enclave computation", "spoc"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    Options o;

    auto* sc = app.add_subcommand("scenario", "run one requestor/node strategy pair");
    addCommon(sc, o);
    sc->add_option("--requestor", o.requestor, "requestor strategy")->check(CLI::IsMember(kStrategiesR));
    sc->add_option("--node", o.node, "execution node strategy")->check(CLI::IsMember(kStrategiesN));
    sc->add_option("--seed", o.seed, "RNG seed (overrides the config)");
    sc->add_option("--tier", o.tier, "gas price tier")->check(CLI::IsMember(kTiers));
    sc->add_option("--trace", o.tracePath, "write the JSON-lines trace here");
    sc->add_option("--events", o.eventsPath, "write the JSON-lines event log here");
    sc->add_option("--contract", o.contractPath, "write the final contract state dump here");

    auto* pc = app.add_subcommand("payoffs", "payoff matrix over all strategy pairs");
    addCommon(pc, o);
    pc->add_option("--grid", o.gridPath, "parameter grid file, one 'V P C D_R D_E' per line")
        ->check(CLI::ExistingFile);
    pc->add_option("--draws", o.draws, "random rational draws instead of the config values");
    pc->add_option("--seed", o.seed, "seed for --draws");

    auto* gc = app.add_subcommand("gas", "per-function gas and cost report");
    addCommon(gc, o);
    gc->add_option("--tier", o.tier, "gas price tier")->check(CLI::IsMember(kTiers));

    auto* lc = app.add_subcommand("latency", "honest end-to-end on-chain latency");
    addCommon(lc, o);
    lc->add_option("--tier", o.tier, "gas price tier")->check(CLI::IsMember(kTiers));

    auto* ic = app.add_subcommand("inspect", "recompute an exported trace's outcome");
    ic->add_option("--trace", o.tracePath, "trace file written by scenario --trace")
        ->required()
        ->check(CLI::ExistingFile);
    ic->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "table"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sc->parsed()) return scenario(o, out, err);
        if (pc->parsed()) return payoffs(o, out, err);
        if (gc->parsed()) return gas(o, out);
        if (lc->parsed()) return latency(o, out);
        return inspect(o, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        const bool usage = e.code() == ErrorCode::ConfigInvalid || e.code() == ErrorCode::ParseError ||
                           e.code() == ErrorCode::UnknownFunction;
        return usage ? kExitUsage : kExitAssertion;
    }
}

} // namespace spoc
