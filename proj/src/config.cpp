#include "spoc/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace spoc {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::uint64_t parseUnsigned(std::string_view v) {
    std::uint64_t out = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || end != v.data() + v.size() || v.empty())
        throw Error(ErrorCode::ParseError, "expected a non-negative integer, got '" + std::string(v) + "'");
    return out;
}

bool parseBool(std::string_view v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw Error(ErrorCode::ParseError, "expected true or false, got '" + std::string(v) + "'");
}

using Setter = std::function<void(ScenarioConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"requestor", [](auto& c, auto v) { c.requestorStrategy = parseRequestorStrategy(v); }},
        {"node", [](auto& c, auto v) { c.nodeStrategy = parseNodeStrategy(v); }},
        {"V", [](auto& c, auto v) { c.V = parseMoney(v); }},
        {"P", [](auto& c, auto v) { c.P = parseMoney(v); }},
        {"C", [](auto& c, auto v) { c.C = parseMoney(v); }},
        {"D_E", [](auto& c, auto v) { c.D_E = parseMoney(v); }},
        {"expires", [](auto& c, auto v) { c.expires = parseUnsigned(v); }},
        {"tier", [](auto& c, auto v) { c.tier = parseTier(v); }},
        {"seed", [](auto& c, auto v) { c.rngSeed = parseUnsigned(v); }},
        {"executionDelay", [](auto& c, auto v) { c.executionDelay = parseUnsigned(v); }},
        {"chargeGas", [](auto& c, auto v) { c.chargeGas = parseBool(v); }},
        {"function", [](auto& c, auto v) { c.functionName = std::string(v); }},
        {"inputs", [](auto& c, auto v) { c.inputs = Bytes(v.begin(), v.end()); }},
        {"inputsHex", [](auto& c, auto v) { c.inputs = fromHex(v); }},
        {"destination", [](auto& c, auto v) { c.destination = parseDestination(v); }},
        {"tamperDelivery", [](auto& c, auto v) { c.tamperDelivery = parseBool(v); }},
        {"tamperedImage", [](auto& c, auto v) { c.tamperedImage = parseBool(v); }},
        {"extraNodes", [](auto& c, auto v) { c.extraHonestNodes = std::uint32_t(parseUnsigned(v)); }},
        {"resubmits", [](auto& c, auto v) { c.resubmits = unsigned(parseUnsigned(v)); }},
        {"manifest", [](auto& c, auto v) { c.manifestPath = std::string(v); }},
        {"usdPerEther",
         [](auto& c, auto v) {
             try {
                 std::size_t used = 0;
                 c.usdPerEther = std::stod(std::string(v), &used);
                 if (used != v.size()) throw std::invalid_argument("trailing");
             } catch (const std::exception&) {
                 throw Error(ErrorCode::ParseError, "expected a number, got '" + std::string(v) + "'");
             }
         }},
        {"balance.requestor", [](auto& c, auto v) { c.requestorBalance = parseMoney(v); }},
        {"balance.node", [](auto& c, auto v) { c.nodeBalance = parseMoney(v); }},
    };
    return table;
}

} // namespace

ScenarioConfig parseConfig(std::string_view text, ScenarioConfig base) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineNo = 0;
    std::optional<Money> threshold, dr;
    while (std::getline(in, raw)) {
        ++lineNo;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        auto fail = [&](const std::string& why) {
            throw Error(ErrorCode::ConfigInvalid, "line " + std::to_string(lineNo) + ": " + why);
        };
        if (eq == std::string_view::npos) fail("expected key = value");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (value.empty()) fail("empty value for '" + std::string(key) + "'");
        try {
            if (key == "threshold") {
                threshold = parseMoney(value);
            } else if (key == "D_R") {
                dr = parseMoney(value);
            } else if (key.starts_with("gas.")) {
                base.gas.perFunction[std::string(key.substr(4))] = parseUnsigned(value);
            } else if (key.starts_with("price.")) {
                base.gas.pricePerGas[parseTier(key.substr(6))] = parseMoney(value);
            } else if (key.starts_with("delay.")) {
                base.gas.confirmationDelay[parseTier(key.substr(6))] = parseUnsigned(value);
            } else if (auto it = setters().find(key); it != setters().end()) {
                it->second(base, value);
            } else {
                fail("unknown key '" + std::string(key) + "'");
            }
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ConfigInvalid) throw;
            fail(e.what());
        }
    }
    // The requestor deposit is THRESHOLD, so setting either one sets both.
    if (threshold && dr && *threshold != *dr) throw Error(ErrorCode::ConfigInvalid, "threshold and D_R disagree");
    if (threshold || dr) base.threshold = base.D_R = threshold ? *threshold : *dr;
    base.validate();
    return base;
}

std::string readTextFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ScenarioConfig loadConfigFile(const std::string& path, ScenarioConfig base) {
    const auto before = base.manifestPath;
    ScenarioConfig cfg = parseConfig(readTextFile(path), std::move(base));
    // a manifest named in the file is relative to the file
    if (cfg.manifestPath && cfg.manifestPath != before) {
        const std::filesystem::path manifest(*cfg.manifestPath);
        if (manifest.is_relative())
            cfg.manifestPath = (std::filesystem::path(path).parent_path() / manifest).lexically_normal().string();
    }
    return cfg;
}

std::vector<ParamDraw> parseGrid(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineNo = 0;
    std::vector<ParamDraw> grid;
    while (std::getline(in, raw)) {
        ++lineNo;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        std::istringstream fields{std::string(line)};
        std::vector<std::string> parts;
        for (std::string f; fields >> f;) parts.push_back(f);
        if (parts.size() != 5)
            throw Error(ErrorCode::ConfigInvalid, "grid line " + std::to_string(lineNo) + ": expected V P C D_R D_E");
        try {
            grid.push_back({parseMoney(parts[0]), parseMoney(parts[1]), parseMoney(parts[2]), parseMoney(parts[3]),
                            parseMoney(parts[4])});
        } catch (const Error& e) {
            throw Error(ErrorCode::ConfigInvalid, "grid line " + std::to_string(lineNo) + ": " + e.what());
        }
        const auto& d = grid.back();
        if (d.D_R.isZero() || d.D_E < d.D_R)
            throw Error(ErrorCode::ConfigInvalid,
                        "grid line " + std::to_string(lineNo) + ": need D_R > 0 and D_E >= D_R");
    }
    return grid;
}

std::vector<ParamDraw> loadGridFile(const std::string& path) { return parseGrid(readTextFile(path)); }

} // namespace spoc
