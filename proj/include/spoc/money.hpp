#pragma once

// Integer currency amounts in the smallest unit (10^18 units = 1 whole unit).

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "spoc/error.hpp"

namespace spoc {

__extension__ using uint128 = unsigned __int128;
__extension__ using int128 = __int128;

inline constexpr uint128 kUnitsPerWhole = 1'000'000'000'000'000'000ULL;

class Money {
public:
    constexpr Money() = default;
    constexpr explicit Money(uint128 units) : units_(units) {}

    static constexpr Money whole(std::uint64_t n) { return Money(uint128(n) * kUnitsPerWhole); }

    constexpr uint128 units() const { return units_; }
    constexpr bool isZero() const { return units_ == 0; }

    Money& operator+=(Money rhs) {
        if (units_ + rhs.units_ < units_) throw Error(ErrorCode::Overflow, "money addition");
        units_ += rhs.units_;
        return *this;
    }
    Money& operator-=(Money rhs) {
        if (rhs.units_ > units_) throw Error(ErrorCode::Overflow, "money subtraction below zero");
        units_ -= rhs.units_;
        return *this;
    }
    friend Money operator+(Money a, Money b) { return a += b; }
    friend Money operator-(Money a, Money b) { return a -= b; }

    friend constexpr auto operator<=>(Money, Money) = default;
    friend constexpr bool operator==(Money, Money) = default;

private:
    uint128 units_ = 0;
};

Money checkedMul(Money amount, std::uint64_t factor);

// Signed difference, used for payoffs.
int128 signedUnits(Money m);

std::string toDecimal(uint128 v);
std::string toDecimal(int128 v);
inline std::string toDecimal(Money m) { return toDecimal(m.units()); }

// "123" (units), "1.5ether" / "2 ether" (whole units). Throws ParseError.
Money parseMoney(std::string_view text);
int128 parseSigned(std::string_view text);

// Renders an amount in whole units with trailing zeros trimmed, e.g. "0.5".
std::string formatWhole(int128 units);

} // namespace spoc
