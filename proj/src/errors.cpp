#include "iwasawa/errors.hpp"

namespace iwasawa {

const char* errc_name(Errc c)
{
    switch (c) {
    case Errc::NotAUnit: return "NotAUnit";
    case Errc::DenominatorNotCleared: return "DenominatorNotCleared";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::Indeterminate: return "Indeterminate";
    case Errc::IntegralityViolation: return "IntegralityViolation";
    case Errc::InconsistentFlags: return "InconsistentFlags";
    case Errc::NotOrdinary: return "NotOrdinary";
    case Errc::DaggerVanishes: return "DaggerVanishes";
    case Errc::NotDivisibleBy12: return "NotDivisibleBy12";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::CharTooSmall: return "CharTooSmall";
    case Errc::InvalidDegree: return "InvalidDegree";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code)
{
}

}  // namespace iwasawa
