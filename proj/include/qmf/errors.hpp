#ifndef QMF_ERRORS_HPP
#define QMF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qmf {

enum class ErrorKind {
    Internal,
    DivisionByZero,
    NonTerminating,
    InsufficientTruncation,
    OutsideDomain,
    DenominatorVanishes,
    PrecisionUnreachable,
    ToleranceNotMet,
    NonConvergent,
    NotMeanValueZero,
    FitUnstable,
    PathTooCloseToSingularity,
    IdentityFails,
    UndefinedComponent,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg)
{
    throw Error(kind, msg);
}

inline const char* error_kind_name(ErrorKind k)
{
    switch (k) {
        case ErrorKind::Internal: return "Internal";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::NonTerminating: return "NonTerminating";
        case ErrorKind::InsufficientTruncation: return "InsufficientTruncation";
        case ErrorKind::OutsideDomain: return "OutsideDomain";
        case ErrorKind::DenominatorVanishes: return "DenominatorVanishes";
        case ErrorKind::PrecisionUnreachable: return "PrecisionUnreachable";
        case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
        case ErrorKind::NonConvergent: return "NonConvergent";
        case ErrorKind::NotMeanValueZero: return "NotMeanValueZero";
        case ErrorKind::FitUnstable: return "FitUnstable";
        case ErrorKind::PathTooCloseToSingularity: return "PathTooCloseToSingularity";
        case ErrorKind::IdentityFails: return "IdentityFails";
        case ErrorKind::UndefinedComponent: return "UndefinedComponent";
    }
    return "Unknown";
}

} // namespace qmf

#endif
