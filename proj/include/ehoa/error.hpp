#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ehoa {

// Every failure surfaces as one of these codes. The CLI prints them as
// "error[<name>]" so scripts can dispatch on the code alone.
enum class ErrorCode {
    Lex,
    Syntax,
    OutOfRangeSet,
    UnsupportedNegatedSet,
    BadHeader,
    NotDeterministic,
    NotComplete,
    NotColored,
    UnsupportedAcceptance,
    TooManyAps,
    TooManyColors,
    TooManyValuations,
    EmptyInf,
    WidthMismatch,
    RecursionDepth,
    Unrealizable,
    InterfaceMismatch,
    ProductTooLarge,
    VerifyFailed,
    Io,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, int line = 0, int col = 0)
        : std::runtime_error(std::move(message)), code_(code), line_(line), col_(col) {}

    ErrorCode code() const { return code_; }
    int line() const { return line_; }
    int col() const { return col_; }

    // Validator diagnostics: offending state and witness valuation, when known.
    int state = -1;
    uint32_t witness_bits = 0;
    int witness_width = -1;

private:
    ErrorCode code_;
    int line_;
    int col_;
};

} // namespace ehoa
