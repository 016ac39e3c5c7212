#pragma once

#include <stdexcept>
#include <string>

namespace cantor {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Neither string decides the distance: one is a prefix of the other.
class AmbiguousPrefix : public Error {
public:
    using Error::Error;
};

/// No level up to the search bound has all cylinders below the threshold.
class NotContinuousWithin : public Error {
public:
    explicit NotContinuousWithin(unsigned max_depth)
        : Error("measure not continuous within depth " + std::to_string(max_depth)),
          max_depth_(max_depth) {}

    unsigned max_depth() const noexcept { return max_depth_; }

private:
    unsigned max_depth_;
};

/// An approximate comparison could not be certified either way.
class Indecisive : public Error {
public:
    using Error::Error;
};

/// A string that is not a valid bit string, rational, descriptor, etc.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Input file rejected; carries the 1-based line number (0 if not line-specific).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace cantor
