#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace peri_richards {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument to a library call (degree, horizon, projection order, grid mismatch).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A nodal water content fell outside the admissible range by more than the clamp tolerance.
class WaterContentRangeError : public Error {
public:
    WaterContentRangeError(std::size_t node, double value, const std::string& what)
        : Error(what), node_(node), value_(value) {}

    std::size_t node() const noexcept { return node_; }
    double value() const noexcept { return value_; }

private:
    std::size_t node_;
    double value_;
};

/// Non-finite state produced by a time step.
class InstabilityError : public Error {
public:
    InstabilityError(long step, const std::string& what) : Error(what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

class ConfigError : public Error {
public:
    ConfigError(std::string key, int line, std::string reason)
        : Error(format(key, line, reason)),
          key_(std::move(key)), line_(line), reason_(std::move(reason)) {}

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    static std::string format(const std::string& key, int line, const std::string& reason) {
        std::string out = "config error";
        if (line > 0) out += " at line " + std::to_string(line);
        if (!key.empty()) out += " [" + key + "]";
        return out + ": " + reason;
    }

    std::string key_;
    int line_;
    std::string reason_;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// A convergence study could not be assembled (bad level list, unstable member run).
class StudyError : public Error {
public:
    using Error::Error;
};

}  // namespace peri_richards
