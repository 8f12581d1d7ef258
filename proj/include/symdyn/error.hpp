#ifndef SYMDYN_ERROR_HPP
#define SYMDYN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace symdyn {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad labels, bad parameters, unknown names.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A computation would exceed its enumeration budget.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// A method was called outside the hypotheses it needs (e.g. M^2 > 0).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A computation ran out of input before reaching a definite answer.
class PartialResult : public Error {
public:
    PartialResult(const std::string& what, std::size_t lower_bound)
        : Error(what), lower_bound_(lower_bound) {}
    std::size_t lower_bound() const noexcept { return lower_bound_; }

private:
    std::size_t lower_bound_;
};

}  // namespace symdyn

#endif
