#ifndef KPROC_ERRORS_HPP
#define KPROC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kproc {

/// Requested external time lies beyond the simulated extent of a path.
struct HorizonExceeded : std::runtime_error {
    explicit HorizonExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// A configured resource budget (node count, event count) was exhausted.
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// A node path is not stored in the environment.
struct PathNotFound : std::runtime_error {
    explicit PathNotFound(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kproc

#endif
