#pragma once

#include <stdexcept>
#include <string>

namespace lhls {

/// Base class for every error raised by the library. The message always
/// starts with the module that raised it, followed by the violated condition.
class Error : public std::runtime_error {
public:
    Error(const std::string& module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(module) {}
    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// A value outside the domain of a map or functional.
class DomainError : public Error {
    using Error::Error;
};

/// Mismatched sequence lengths.
class DimensionError : public Error {
    using Error::Error;
};

/// A configuration parameter out of its admissible range.
class ParameterError : public Error {
    using Error::Error;
};

/// Input density or field is not normalized as required.
class NormalizationError : public Error {
    using Error::Error;
};

/// An iterative procedure did not reach its tolerance.
class ConvergenceError : public Error {
    using Error::Error;
};

/// A time integrator left its admissible regime (step size, conservation).
class EvolutionError : public Error {
    using Error::Error;
};

/// Malformed user input (input descriptors, config files).
class ParseError : public Error {
    using Error::Error;
};

}  // namespace lhls
