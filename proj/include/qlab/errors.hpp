#pragma once

#include <stdexcept>
#include <string>

namespace qlab {

enum class ErrorKind {
    UnsupportedType,
    CapExceeded,
    NotFactorable,
    ShapeMismatch,
    NonGenericTheta,
    FieldNotFinite,
    NotSurjective,
    RelationViolated,
    DimensionMismatch,
    ParseError,
    CacheIntegrity,
    AlgorithmFailure,
    InvalidArgument,
};

inline const char* to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::UnsupportedType: return "UnsupportedType";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NotFactorable: return "NotFactorable";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NonGenericTheta: return "NonGenericTheta";
    case ErrorKind::FieldNotFinite: return "FieldNotFinite";
    case ErrorKind::NotSurjective: return "NotSurjective";
    case ErrorKind::RelationViolated: return "RelationViolated";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::CacheIntegrity: return "CacheIntegrity";
    case ErrorKind::AlgorithmFailure: return "AlgorithmFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Library exception; carries an ErrorKind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace qlab
