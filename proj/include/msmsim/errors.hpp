#ifndef MSMSIM_ERRORS_HPP
#define MSMSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace msmsim {

// Raised for anything wrong with a scenario/study specification: bad syntax,
// unresolved references, inadmissible parameters.  Maps to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised for failures while running an otherwise valid configuration
// (degenerate survival, non-finite likelihoods, I/O).  Maps to exit code 3.
class engine_error : public std::runtime_error {
public:
    explicit engine_error(const std::string& what) : std::runtime_error(what) {}
};

// Domain errors on kernel arguments (u outside (0,1) and the like).
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace msmsim

#endif
