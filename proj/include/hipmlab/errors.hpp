#pragma once

#include <stdexcept>
#include <string>

namespace hipmlab {

// Input file or config could not be parsed. CLI maps this to exit code 2.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Dimension / member-count mismatch between otherwise valid inputs. Exit code 3.
class ShapeError : public std::runtime_error {
public:
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values or a diverging iteration. Exit code 4.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hipmlab
