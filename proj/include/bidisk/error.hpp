// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <utility>
#include <string>

namespace bidisk {

/// Broad failure class; the CLI maps these onto exit codes 2 and 3.
enum class ErrorKind { input, numerical };

/// Base of every library error. `name()` is the structured identifier
/// printed by the CLI (e.g. "SingularReciprocalError").
class Error : public std::runtime_error {
public:
    Error(std::string name, ErrorKind kind, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)), kind_(kind) {}

    const std::string& name() const noexcept { return name_; }
    ErrorKind kind() const noexcept { return kind_; }

private:
    std::string name_;
    ErrorKind kind_;
};

#define BIDISK_DEFINE_ERROR(Type, Kind)                                        \
    class Type : public Error {                                                \
    public:                                                                    \
        explicit Type(const std::string& what) : Error(#Type, Kind, what) {}   \
    };

BIDISK_DEFINE_ERROR(InputError, ErrorKind::input)
BIDISK_DEFINE_ERROR(NonFiniteError, ErrorKind::input)
BIDISK_DEFINE_ERROR(SizeLimitError, ErrorKind::input)
BIDISK_DEFINE_ERROR(DomainError, ErrorKind::input)
BIDISK_DEFINE_ERROR(PatternViolationError, ErrorKind::input)
BIDISK_DEFINE_ERROR(UnsupportedRateError, ErrorKind::input)
BIDISK_DEFINE_ERROR(DivergentKernelError, ErrorKind::input)
BIDISK_DEFINE_ERROR(RangeError, ErrorKind::input)
BIDISK_DEFINE_ERROR(SingularReciprocalError, ErrorKind::numerical)
BIDISK_DEFINE_ERROR(DegenerateFitError, ErrorKind::numerical)
BIDISK_DEFINE_ERROR(MonotonicityError, ErrorKind::numerical)
BIDISK_DEFINE_ERROR(InternalError, ErrorKind::numerical)

#undef BIDISK_DEFINE_ERROR

/// Gram factorization failed even after ridge regularization.
class ConditioningError : public Error {
public:
    ConditioningError(const std::string& what, double cond_estimate)
        : Error("ConditioningError", ErrorKind::numerical, what),
          cond_estimate_(cond_estimate) {}

    double cond_estimate() const noexcept { return cond_estimate_; }

private:
    double cond_estimate_;
};

}  // namespace bidisk
