#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace wealthnet {

/// A model function was evaluated outside its mathematical domain
/// (fractional power of a non-positive stake, attitude outside [0.5, 1], ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The market has no wealth left to renormalize against.
class DegenerateMarketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An observable is undefined for the given input (e.g. Gini of one agent).
class MetricError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Configuration parse or validation failure. `key()` names the offending
/// setting, or is empty when the failure is not tied to a single key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& message)
        : std::invalid_argument(key.empty() ? message : key + ": " + message),
          key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Reading or writing an output bundle failed.
class IoError : public std::runtime_error {
public:
    IoError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace wealthnet
