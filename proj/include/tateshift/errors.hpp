#pragma once

#include <stdexcept>
#include <string>

namespace tss {

// Bad user input: composite prime, out-of-range index, unknown format.
class InvalidArgument : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A computation would exceed the configured module-dimension cap.
class ResourceLimit : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// The engine found its own data inconsistent (bidegree law, d∘d, ...).
class InconsistencyError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

// A mathematical check returned a negative answer.
class VerificationFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tss
