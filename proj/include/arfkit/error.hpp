#pragma once

#include <stdexcept>
#include <string>

namespace arfkit
{

// Base for every error raised by the library. The CLI maps the three leaf
// kinds onto exit codes 1, 2 and 3.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-domain input.
class InputError : public Error
{
public:
    using Error::Error;
};

// The requested quantity cannot be certified at the current truncation.
class PrecisionError : public Error
{
public:
    using Error::Error;
};

// Two routes that must agree did not, or a state the mathematics rules out
// was reached.
class InconsistencyError : public Error
{
public:
    using Error::Error;
};

} // namespace arfkit
