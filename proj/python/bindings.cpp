#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spoc/config.hpp"
#include "spoc/crypto.hpp"
#include "spoc/serialize.hpp"

namespace py = pybind11;
using namespace spoc;

namespace {

ScenarioConfig configFrom(const std::string& text) { return parseConfig(text); }

py::bytes toPy(std::span<const std::uint8_t> b) {
    return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

std::vector<ParamDraw> gridFrom(const std::optional<std::string>& gridText, std::size_t draws,
                                const ScenarioConfig& cfg) {
    if (gridText) return parseGrid(*gridText);
    if (draws > 0) return randomRationalGrid(draws, cfg.rngSeed);
    return {{cfg.V, cfg.P, cfg.C, cfg.D_R, cfg.D_E}};
}

} // namespace

PYBIND11_MODULE(_spoc, m) {
    m.doc() = "Escrow protocol simulator core; every call returns JSON text";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def(
        "run_scenario",
        [](const std::string& config) {
            const ScenarioRun run = runScenario(configFrom(config));
            return py::make_tuple(outcomeJson(run), traceJsonLines(run), invariantViolations(run));
        },
        py::arg("config") = "");
    m.def(
        "payoff_matrix",
        [](const std::string& config, std::optional<std::string> grid, std::size_t draws) {
            const ScenarioConfig cfg = configFrom(config);
            return matrixJson(payoffMatrix(gridFrom(grid, draws, cfg), cfg));
        },
        py::arg("config") = "", py::arg("grid") = py::none(), py::arg("draws") = 0);
    m.def(
        "gas_report",
        [](const std::string& config) {
            const ScenarioConfig cfg = configFrom(config);
            return gasReportJson(gasReport(cfg.tier, cfg));
        },
        py::arg("config") = "");
    m.def(
        "latency_report",
        [](const std::string& config) {
            const ScenarioConfig cfg = configFrom(config);
            return latencyReportJson(latencyReport(cfg.tier, cfg));
        },
        py::arg("config") = "");
    m.def("inspect_trace", [](const std::string& trace) {
        const InspectResult r = inspectTrace(trace);
        return py::make_tuple(inspectJson(r), r.consistent());
    });
    m.def("hash_secret", [](const py::bytes& secret) {
        const std::string s = secret;
        return toPy(hashSecret(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size())).bytes);
    });
    m.def("generate_secret", [](std::uint64_t seed) { return toPy(generateSecret(seed).bytes); });
    m.def("parse_money", [](const std::string& text) { return toDecimal(parseMoney(text)); });
}
