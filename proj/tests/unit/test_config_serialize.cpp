#include <catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include "spoc/config.hpp"
#include "spoc/serialize.hpp"

using namespace spoc;
using nlohmann::json;

TEST_CASE("config keys") {
    const auto c = parseConfig(R"(
# comment line
requestor = no-confirm
node = claim-only   # trailing comment
V = 20 ether
P = 4ether
C = 1500000000000000000
threshold = 0.25ether
D_E = 1 ether
expires = 900
tier = fast
seed = 12
chargeGas = yes
function = reverse
inputs = abc
destination = third-party
extraNodes = 2
gas.claimTask = 150000
price.fast = 7
delay.fast = 60
)");
    CHECK(c.requestorStrategy == RequestorStrategy::NoConfirm);
    CHECK(c.nodeStrategy == NodeStrategy::ClaimOnly);
    CHECK(c.V == Money::whole(20));
    CHECK(c.P == Money::whole(4));
    CHECK(c.C == Money(1'500'000'000'000'000'000ULL));
    CHECK(c.threshold == Money(250'000'000'000'000'000ULL));
    CHECK(c.D_R == c.threshold);
    CHECK(c.expires == 900);
    CHECK(c.tier == Tier::Fast);
    CHECK(c.rngSeed == 12);
    CHECK(c.chargeGas);
    CHECK(c.functionName == "reverse");
    CHECK(c.inputs == Bytes{'a', 'b', 'c'});
    CHECK(c.destination == Destination::ThirdParty);
    CHECK(c.extraHonestNodes == 2);
    CHECK(c.gas.perFunction.at("claimTask") == 150000);
    CHECK(c.gas.pricePerGas.at(Tier::Fast) == Money(7));
    CHECK(c.gas.confirmationDelay.at(Tier::Fast) == 60);
}

TEST_CASE("config errors") {
    CHECK_THROWS_WITH(parseConfig("V = 1\nbogus = 2\n"), Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_AS(parseConfig("V\n"), Error);
    CHECK_THROWS_AS(parseConfig("V =\n"), Error);
    CHECK_THROWS_AS(parseConfig("threshold = 1\nD_R = 2\n"), Error);
    CHECK_THROWS_AS(parseConfig("chargeGas = maybe\n"), Error);
    CHECK_THROWS_AS(parseConfig("tier = turbo\n"), Error);
    // D_E below the claim threshold cannot be valid
    CHECK_THROWS_AS(parseConfig("D_E = 0.1ether\n"), Error);
    try {
        parseConfig("expires = soon\n");
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigInvalid);
    }
    CHECK(parseConfig("D_R = 0.75 ether\nD_E = 1 ether\n").threshold == Money(750'000'000'000'000'000ULL));
}

TEST_CASE("grid files") {
    const auto grid = parseGrid("# V P C D_R D_E\n100 10 3 1 2\n\n5ether 2ether 1ether 0.5ether 0.5ether\n");
    REQUIRE(grid.size() == 2);
    CHECK(grid[0].V == Money(100));
    CHECK(grid[1].D_E == Money(500'000'000'000'000'000ULL));
    CHECK_THROWS_AS(parseGrid("1 2 3 4\n"), Error);
    CHECK_THROWS_AS(parseGrid("10 5 1 2 1\n"), Error);
    CHECK_THROWS_AS(parseGrid("10 5 1 0 1\n"), Error);
    CHECK(loadGridFile(SPOC_SOURCE_DIR "/configs/grid.txt").size() == 3);
}

TEST_CASE("shipped config files load") {
    const auto def = loadConfigFile(SPOC_SOURCE_DIR "/configs/default.conf");
    CHECK(def.V == ScenarioConfig{}.V);
    const auto adv = loadConfigFile(SPOC_SOURCE_DIR "/configs/adversarial.conf");
    REQUIRE(adv.manifestPath);
    CHECK(runScenario(adv).outcome.resultReceived);
}

TEST_CASE("event lines have exactly four fields and round trip") {
    const auto run = runScenario({});
    const auto& events = run.ledger.events();
    REQUIRE(events.size() == 3); // submitted, claimed, finished
    for (const auto& e : events) {
        const std::string line = eventJson(e);
        const json j = json::parse(line);
        CHECK(j.size() == 4);
        for (const char* k : {"kind", "taskId", "blockHeight", "payload"}) CHECK(j.contains(k));
        LedgerEvent expected = e;
        expected.index = 0;
        LedgerEvent back = parseEventJson(line);
        back.index = 0;
        CHECK(back == expected);
    }
    CHECK_THROWS_AS(parseEventJson(R"({"kind":"TaskSubmitted","taskId":1,"blockHeight":2})"), Error);
    CHECK_THROWS_AS(parseEventJson("not json"), Error);
}

TEST_CASE("contract dump and outcome json") {
    const auto run = runScenario({});
    const json dump = json::parse(contractDumpJson(run.ledger.contract()));
    CHECK(dump.at("numTasks") == 1);
    CHECK(dump.at("tasks").empty()); // closed tasks are deleted
    CHECK(dump.at("totalHeld") == "0");
    const json out = json::parse(outcomeJson(run));
    CHECK(out.at("requestorPayoff") == "90000000000000000000");
    CHECK(out.at("nodePayoff") == "7000000000000000000");
    CHECK(out.at("traceId").get<std::string>().size() == 16);
}

TEST_CASE("inspect reproduces recorded payoffs") {
    for (auto n : {NodeStrategy::Honest, NodeStrategy::ClaimOnly, NodeStrategy::ComputeNoDeliver}) {
        ScenarioConfig c;
        c.nodeStrategy = n;
        c.chargeGas = true;
        const auto run = runScenario(c);
        const auto r = inspectTrace(traceJsonLines(run));
        CHECK(r.consistent());
        CHECK(r.requestorPayoff == run.outcome.requestorPayoff);
        CHECK(r.nodePayoffWithGas == run.outcome.nodePayoffWithGas);
    }
}

TEST_CASE("inspect catches edited traces") {
    const std::string trace = traceJsonLines(runScenario({}));
    std::string forged = trace;
    const std::string needle = "\"requestorPayoff\":\"90000000000000000000\"";
    const auto at = forged.find(needle);
    REQUIRE(at != std::string::npos);
    forged.replace(at, needle.size(), "\"requestorPayoff\":\"95000000000000000000\"");
    CHECK_FALSE(inspectTrace(forged).consistent());

    std::string reordered = trace;
    const auto first = reordered.find("\"type\":\"step\"");
    const auto pos = reordered.find("\"action\":\"deploy\"");
    REQUIRE(first != std::string::npos);
    REQUIRE(pos != std::string::npos);
    reordered.replace(pos, 17, "\"action\":\"deplox\"");
    CHECK_FALSE(inspectTrace(reordered).traceIdMatches);

    CHECK_THROWS_AS(inspectTrace("{\"type\":\"mystery\"}\n"), Error);
    CHECK_THROWS_AS(inspectTrace("garbage\n"), Error);
}

TEST_CASE("tables") {
    const auto run = runScenario({});
    CHECK_THAT(outcomeTable(run), Catch::Matchers::ContainsSubstring("90"));
    CHECK_THAT(gasTable(gasReport(Tier::Standard)), Catch::Matchers::ContainsSubstring("Total per task"));
    const auto m = payoffMatrix({{Money::whole(100), Money::whole(10), Money::whole(3), Money::whole(1), Money::whole(1)}});
    CHECK_THAT(matrixTable(m), Catch::Matchers::ContainsSubstring("compute-no-deliver"));
}
