#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tcmerton {

enum class ErrorKind {
    NonPositiveRate,
    WeightOutOfRange,
    NegativeTime,
    ZeroDiscountWeight,
    Divergent,
    InvalidPreferences,
    InvalidMarket,
    NonPositiveWealth,
    NonPositiveMarginal,
    InvalidHorizon,
    InvalidWindow,
    BlowUp,
    OutOfRange,
    WrongDiscountKind,
    InvalidSimConfig,
    TailTooLarge,
    ParseError,
    ValidationError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NonPositiveRate: return "NonPositiveRate";
        case ErrorKind::WeightOutOfRange: return "WeightOutOfRange";
        case ErrorKind::NegativeTime: return "NegativeTime";
        case ErrorKind::ZeroDiscountWeight: return "ZeroDiscountWeight";
        case ErrorKind::Divergent: return "Divergent";
        case ErrorKind::InvalidPreferences: return "InvalidPreferences";
        case ErrorKind::InvalidMarket: return "InvalidMarket";
        case ErrorKind::NonPositiveWealth: return "NonPositiveWealth";
        case ErrorKind::NonPositiveMarginal: return "NonPositiveMarginal";
        case ErrorKind::InvalidHorizon: return "InvalidHorizon";
        case ErrorKind::InvalidWindow: return "InvalidWindow";
        case ErrorKind::BlowUp: return "BlowUp";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::WrongDiscountKind: return "WrongDiscountKind";
        case ErrorKind::InvalidSimConfig: return "InvalidSimConfig";
        case ErrorKind::TailTooLarge: return "TailTooLarge";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace tcmerton
