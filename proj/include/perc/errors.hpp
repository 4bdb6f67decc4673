#pragma once

#include <stdexcept>
#include <string>

namespace perc {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Ball/net/cluster enumeration touched more vertices than the caller allowed.
struct budget_error : error {
    explicit budget_error(const std::string& what) : error(what) {}
};

// An operation needed marks or members outside the sampled window.
struct window_error : error {
    explicit window_error(const std::string& what) : error(what) {}
};

// Malformed input: graph file, law string, model string, CLI value.
struct parse_error : error {
    explicit parse_error(const std::string& what) : error(what) {}
};

// Structurally valid input that violates a precondition (p out of [0,1], ...).
struct config_error : error {
    explicit config_error(const std::string& what) : error(what) {}
};

// Regression asked for with fewer than two distinct scales.
struct degenerate_fit_error : error {
    explicit degenerate_fit_error(const std::string& what) : error(what) {}
};

// A formula needed E[R^s] but the law's moment of that order is infinite.
struct infinite_moment_error : error {
    explicit infinite_moment_error(const std::string& what) : error(what) {}
};

// Distance query between vertices in different components of a loaded graph.
struct unreachable_error : error {
    explicit unreachable_error(const std::string& what) : error(what) {}
};

} // namespace perc
