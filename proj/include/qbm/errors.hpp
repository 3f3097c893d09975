// errors.hpp: exception hierarchy shared by all qbm modules.
//
// Every error carries a category so the command-line front end can map it
// onto a process exit code (2 validation, 3 numerical, 4 I/O).

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qbm {

enum class ErrorKind { validation, numerical, io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define QBM_DEFINE_ERROR(Name, Kind)                                                  \
    class Name : public Error {                                                       \
    public:                                                                           \
        explicit Name(const std::string& what) : Error(ErrorKind::Kind, #Name ": " + what) {} \
    }

// gaussian_core
QBM_DEFINE_ERROR(PairingFailure, numerical);
QBM_DEFINE_ERROR(DomainError, validation);
QBM_DEFINE_ERROR(IndexError, validation);
QBM_DEFINE_ERROR(SubsetError, validation);
QBM_DEFINE_ERROR(OverlapError, validation);

// qbm_model
QBM_DEFINE_ERROR(NegativeEigenvalue, numerical);
QBM_DEFINE_ERROR(EigensolveFailure, numerical);
QBM_DEFINE_ERROR(DimensionMismatch, numerical);

// correlations
QBM_DEFINE_ERROR(BadBandCount, validation);
QBM_DEFINE_ERROR(EmptyFraction, validation);

// redundancy
QBM_DEFINE_ERROR(NotReached, numerical);
QBM_DEFINE_ERROR(FlatCurve, numerical);
QBM_DEFINE_ERROR(InsufficientGrid, numerical);

// cli_runner
QBM_DEFINE_ERROR(IoError, io);

#undef QBM_DEFINE_ERROR

/// Configuration error that lists every offending field at once.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> problems)
        : Error(ErrorKind::validation, join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out = "ValidationError:";
        for (const auto& s : items) out += "\n  - " + s;
        return out;
    }

    std::vector<std::string> problems_;
};

inline int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::validation: return 2;
        case ErrorKind::numerical: return 3;
        case ErrorKind::io: return 4;
    }
    return 1;
}

}  // namespace qbm
