#pragma once

// JSON and text renderings. Money is written as a decimal string of base
// units, digests and secrets as lowercase hex. JSON output uses sorted keys
// so two identical runs always serialize to identical bytes.

#include <string>
#include <string_view>
#include <vector>

#include "spoc/harness.hpp"

namespace spoc {

// One event per line with exactly kind, taskId, blockHeight, payload.
std::string eventJson(const LedgerEvent& event);
std::string eventsJsonLines(const std::vector<LedgerEvent>& events);
LedgerEvent parseEventJson(std::string_view line);

std::string receiptJson(const Receipt& receipt);
// Tasks keyed by decimal id with every field plus the derived state.
std::string contractDumpJson(const Contract& contract);

std::string outcomeJson(const ScenarioRun& run);
std::string matrixJson(const std::vector<PayoffMatrix>& matrices);
std::string gasReportJson(const GasReport& report);
std::string latencyReportJson(const LatencyReport& report);

// Lines: a "scenario" header, one "step" per trace step, then "outcome" and
// "contract". traceStepsJsonLines is the step block alone.
std::string traceJsonLines(const ScenarioRun& run);
std::string traceStepsJsonLines(const std::vector<TraceStep>& steps);

struct InspectResult {
    std::string requestorStrategy;
    std::string nodeStrategy;
    std::size_t steps = 0;
    bool conservedEveryStep = true;
    // recomputed from transfers, gas, acceptance and execution steps
    int128 requestorPayoff = 0;
    int128 nodePayoff = 0;
    int128 requestorPayoffWithGas = 0;
    int128 nodePayoffWithGas = 0;
    // as written in the outcome line
    int128 recordedRequestorPayoff = 0;
    int128 recordedNodePayoff = 0;
    int128 recordedRequestorPayoffWithGas = 0;
    int128 recordedNodePayoffWithGas = 0;
    std::string traceId;
    bool traceIdMatches = false;

    bool consistent() const {
        return traceIdMatches && conservedEveryStep && requestorPayoff == recordedRequestorPayoff &&
               nodePayoff == recordedNodePayoff && requestorPayoffWithGas == recordedRequestorPayoffWithGas &&
               nodePayoffWithGas == recordedNodePayoffWithGas;
    }
};

// Throws ParseError on malformed input.
InspectResult inspectTrace(std::string_view traceText);
std::string inspectJson(const InspectResult& result);

// Aligned plain-text tables for --format table.
std::string outcomeTable(const ScenarioRun& run);
std::string matrixTable(const std::vector<PayoffMatrix>& matrices);
std::string gasTable(const GasReport& report);
std::string latencyTable(const LatencyReport& report);
std::string inspectTable(const InspectResult& result);

} // namespace spoc
