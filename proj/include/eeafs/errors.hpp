#ifndef EEAFS_ERRORS_HPP
#define EEAFS_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace eeafs {

// Scenario or config file violates one or more invariants. Every violation
// is collected before throwing.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    explicit ConfigError(const std::string& problem)
        : ConfigError(std::vector<std::string>{problem}) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

// Requested workload exceeds full processor speed.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Plant state became non-finite.
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace eeafs

#endif
