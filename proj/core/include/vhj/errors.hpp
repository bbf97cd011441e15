#pragma once

#include <stdexcept>
#include <string>

namespace vhj {

// Error taxonomy used across the library. Non-convergence of an iteration is
// not an error (it is reported through SolveStats); these are for conditions
// that make the requested computation meaningless.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct GeometryError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// A structural hypothesis on the coefficients fails; message names the
// violated inequality.
struct HypothesisViolation : Error {
    using Error::Error;
};

struct CertificateError : Error {
    using Error::Error;
};

// NaN/Inf appeared during a sweep; message names the node.
struct InstabilityError : Error {
    using Error::Error;
};

struct AccuracyError : Error {
    using Error::Error;
};

struct InputError : Error {
    using Error::Error;
};

struct SamplingError : Error {
    using Error::Error;
};

}  // namespace vhj
