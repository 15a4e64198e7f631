#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rulebench {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Predicate redeclared with another arity, nullary predicate, unknown id.
class SignatureError : public Error {
public:
    using Error::Error;
};

// Empty body or a head variable that does not occur in the body.
class RuleError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column, const std::string& file = {})
        : Error((file.empty() ? "" : file + ":") + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          message_(message), file_(file), line_(line), column_(column) {}

    const std::string& message() const noexcept { return message_; }
    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string message_;
    std::string file_;
    std::size_t line_;
    std::size_t column_;
};

// Invalid or out-of-range configuration value. key() names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& message)
        : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// The symbol, rule, or fact budget cannot produce what was requested.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// Missing or unreadable bundle file.
class IoError : public Error {
public:
    using Error::Error;
};

// A dataset bundle whose fact sets disagree with each other or with the rules.
class BundleError : public Error {
public:
    using Error::Error;
};

class TimeoutError : public Error {
public:
    using Error::Error;
};

} // namespace rulebench
