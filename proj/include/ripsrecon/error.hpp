#pragma once

#include <stdexcept>
#include <string>

namespace ripsrecon {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition (parameter range, theorem hypothesis, input shape)
/// does not hold. The CLI maps these to exit code 2.
class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// Malformed or unsupported input files and configurations.
class InputError : public Error
{
public:
    using Error::Error;
};

/// Operation requested on a model that does not provide the needed evaluator.
class UnsupportedError : public Error
{
public:
    using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if (!condition)
        throw PreconditionError(message);
}

} // namespace detail
} // namespace ripsrecon
