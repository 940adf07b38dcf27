#pragma once

#include <stdexcept>
#include <string>

namespace curvemark {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Bad caller input: wrong sizes, out-of-range keys, malformed strings.
class ArgumentError : public Error
{
public:
    using Error::Error;
};

// File system and codec failures.
class IoError : public Error
{
public:
    using Error::Error;
};

// An optional external tool (e.g. a JPEG 2000 codec) is not installed.
class UnavailableError : public Error
{
public:
    using Error::Error;
};

} // namespace curvemark
