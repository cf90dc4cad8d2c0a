#include "spoc/money.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace spoc {

std::string_view toString(ErrorCode code) {
    switch (code) {
    case ErrorCode::InsufficientBalance: return "InsufficientBalance";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::UnknownAccount: return "UnknownAccount";
    case ErrorCode::NullSender: return "NullSender";
    case ErrorCode::NonPayable: return "NonPayable";
    case ErrorCode::ContractNotDeployed: return "ContractNotDeployed";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::WrongLength: return "WrongLength";
    case ErrorCode::TamperDetected: return "TamperDetected";
    case ErrorCode::WrongKey: return "WrongKey";
    case ErrorCode::IdentityMismatch: return "IdentityMismatch";
    case ErrorCode::BadHex: return "BadHex";
    case ErrorCode::MeasurementMismatch: return "MeasurementMismatch";
    case ErrorCode::StaleNonce: return "StaleNonce";
    case ErrorCode::NotAttested: return "NotAttested";
    case ErrorCode::NotProvisioned: return "NotProvisioned";
    case ErrorCode::WrongPrincipal: return "WrongPrincipal";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::ExecutionFault: return "ExecutionFault";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Money checkedMul(Money amount, std::uint64_t factor) {
    const uint128 a = amount.units();
    if (factor != 0 && a > std::numeric_limits<uint128>::max() / factor)
        throw Error(ErrorCode::Overflow, "money multiplication");
    return Money(a * factor);
}

int128 signedUnits(Money m) {
    if (m.units() > uint128(std::numeric_limits<int128>::max()))
        throw Error(ErrorCode::Overflow, "amount does not fit a signed value");
    return int128(m.units());
}

std::string toDecimal(uint128 v) {
    if (v == 0) return "0";
    std::string out;
    while (v != 0) {
        out.push_back(char('0' + int(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string toDecimal(int128 v) {
    if (v >= 0) return toDecimal(uint128(v));
    // negate through the unsigned type so INT128_MIN is handled
    return "-" + toDecimal(uint128(0) - uint128(v));
}

namespace {

uint128 parseDigits(std::string_view s) {
    if (s.empty()) throw Error(ErrorCode::ParseError, "empty number");
    uint128 v = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw Error(ErrorCode::ParseError, "not a number: " + std::string(s));
        const uint128 next = v * 10 + uint128(c - '0');
        if (next / 10 != v) throw Error(ErrorCode::Overflow, "number too large: " + std::string(s));
        v = next;
    }
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

Money parseMoney(std::string_view text) {
    std::string_view s = trim(text);
    constexpr std::string_view suffix = "ether";
    if (s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix) {
        s = trim(s.substr(0, s.size() - suffix.size()));
        const auto dot = s.find('.');
        const uint128 whole = parseDigits(dot == std::string_view::npos ? s : s.substr(0, dot));
        uint128 frac = 0;
        if (dot != std::string_view::npos) {
            std::string digits(s.substr(dot + 1));
            if (digits.size() > 18) throw Error(ErrorCode::ParseError, "more than 18 decimals: " + std::string(text));
            digits.resize(18, '0');
            frac = parseDigits(digits);
        }
        return checkedMul(Money(whole), 1'000'000'000'000'000'000ULL) + Money(frac);
    }
    return Money(parseDigits(s));
}

int128 parseSigned(std::string_view text) {
    std::string_view s = trim(text);
    bool negative = false;
    if (!s.empty() && s.front() == '-') {
        negative = true;
        s.remove_prefix(1);
    }
    const int128 magnitude = signedUnits(parseMoney(s));
    return negative ? -magnitude : magnitude;
}

std::string formatWhole(int128 units) {
    const bool negative = units < 0;
    const uint128 mag = negative ? uint128(0) - uint128(units) : uint128(units);
    std::string out = toDecimal(mag / kUnitsPerWhole);
    std::string frac = toDecimal(mag % kUnitsPerWhole);
    if (frac != "0") {
        frac.insert(0, 18 - frac.size(), '0');
        while (frac.back() == '0') frac.pop_back();
        out += "." + frac;
    }
    return negative ? "-" + out : out;
}

} // namespace spoc
