#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kb {

enum class ErrorKind {
    DomainViolation,
    DimensionMismatch,
    ShapeMismatch,
    NotHermitian,
    NotPsd,
    BaseMismatch,
    UnknownLabel,
    LabelMismatch,
    NotAFactorization,
    SingularCovariance,
    IndexOutOfRange,
    CauchyZero,
    BAtOne,
    ZeroExpectation,
    InvalidMeasure,
    ConfigError,
    IoError,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DomainViolation: return "DomainViolation";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotPsd: return "NotPsd";
        case ErrorKind::BaseMismatch: return "BaseMismatch";
        case ErrorKind::UnknownLabel: return "UnknownLabel";
        case ErrorKind::LabelMismatch: return "LabelMismatch";
        case ErrorKind::NotAFactorization: return "NotAFactorization";
        case ErrorKind::SingularCovariance: return "SingularCovariance";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::CauchyZero: return "CauchyZero";
        case ErrorKind::BAtOne: return "BAtOne";
        case ErrorKind::ZeroExpectation: return "ZeroExpectation";
        case ErrorKind::InvalidMeasure: return "InvalidMeasure";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

}  // namespace kb
