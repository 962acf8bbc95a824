#ifndef TAILRISK_ERRORS_HPP
#define TAILRISK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tailrisk {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The requested object exists but the operation is not defined for it
/// (e.g. extreme-value classification of a two-point law).
class Unsupported : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Numerical failure: no bracket, no convergence, failed consistency check.
class ComputationError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

} // namespace detail
} // namespace tailrisk

#endif // TAILRISK_ERRORS_HPP
