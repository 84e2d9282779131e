#pragma once

#include <stdexcept>
#include <string>

namespace g2kit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotPositiveError : public Error {
public:
    NotPositiveError() : Error("form not positive") {}
};

class DegenerateMetricError : public Error {
public:
    DegenerateMetricError() : Error("degenerate metric") {}
};

class FrameError : public Error {
public:
    using Error::Error;
};

class NotAssociativeError : public Error {
public:
    NotAssociativeError() : Error("plane not associative") {}
};

class NoConvergenceError : public Error {
public:
    explicit NoConvergenceError(const std::string& what) : Error(what) {}
};

class GridMismatchError : public Error {
public:
    GridMismatchError() : Error("grid mismatch") {}
};

class ConstraintError : public Error {
public:
    using Error::Error;
};

}  // namespace g2kit
