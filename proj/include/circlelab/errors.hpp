#ifndef CIRCLELAB_ERRORS_HPP
#define CIRCLELAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace circlelab {

// Violated precondition or domain restriction. The CLI maps these to exit code 2.
struct precondition_error : std::invalid_argument {
    explicit precondition_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A configured memory or enumeration cap was exceeded.
struct budget_error : precondition_error {
    explicit budget_error(const std::string& msg) : precondition_error(msg) {}
};

// Resource limits for enumerations and tables.
struct Budget {
    std::size_t max_table_bytes = std::size_t(1) << 31;  // 2 GiB
    std::uint64_t max_solutions = 100'000'000;
};

}

#endif
