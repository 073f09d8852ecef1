#pragma once

#include <stdexcept>
#include <string>

namespace iwasawa {

enum class Errc {
    NotAUnit,
    DenominatorNotCleared,
    HypothesisFailed,
    PrecisionExhausted,
    Indeterminate,
    IntegralityViolation,
    InconsistentFlags,
    NotOrdinary,
    DaggerVanishes,
    NotDivisibleBy12,
    SearchExhausted,
    CharTooSmall,
    InvalidDegree,
    InvalidArgument,
};

const char* errc_name(Errc c);

/// Domain error raised by the library. The code names the failure class;
/// the message carries detail for humans.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail);
    Errc code() const noexcept { return code_; }
    const char* name() const noexcept { return errc_name(code_); }

private:
    Errc code_;
};

}  // namespace iwasawa
