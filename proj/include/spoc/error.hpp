#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spoc {

enum class ErrorCode {
    // ledger
    InsufficientBalance,
    UnknownFunction,
    UnknownAccount,
    NullSender,
    NonPayable,
    ContractNotDeployed,
    Overflow,
    // crypto
    WrongLength,
    TamperDetected,
    WrongKey,
    IdentityMismatch,
    BadHex,
    // enclave
    MeasurementMismatch,
    StaleNonce,
    NotAttested,
    NotProvisioned,
    WrongPrincipal,
    InvalidState,
    ExecutionFault,
    // harness / config
    ConfigInvalid,
    ParseError,
};

std::string_view toString(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(toString(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace spoc
