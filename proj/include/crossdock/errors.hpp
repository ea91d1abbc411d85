#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crossdock {

/// Invalid model or problem configuration. Carries every violated field.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

    explicit ConfigError(const std::string& violation)
        : ConfigError(std::vector<std::string>{violation}) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out = "invalid configuration: ";
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) out += "; ";
            out += items[i];
        }
        return out;
    }

    std::vector<std::string> violations_;
};

/// Broken simulation-kernel precondition (scheduling into the past, releasing an idle pool).
class KernelError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Too few observations to form a statistic.
class InsufficientDataError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller misuse that is not a configuration error, e.g. a confounded comparison.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace crossdock
