#ifndef STA_ERRORS_HPP
#define STA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sta {

// Base class for all recoverable simulation errors.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A requested state or operator would put significant probability weight
// near the Fock-space truncation edge.
struct TruncationRisk : SimError {
    using SimError::SimError;
};

// Odd cat state requested at |eta| ~ 0, where it is undefined.
struct DegenerateCat : SimError {
    using SimError::SimError;
};

struct DimensionMismatch : SimError {
    using SimError::SimError;
};

// arctanh argument outside (-1, 1).
struct ArctanhDomain : SimError {
    using SimError::SimError;
};

// cd_coupling_lambda requires a purely imaginary eta_dot.
struct NonRealCoupling : SimError {
    using SimError::SimError;
};

// |M|^2 > N(N+1) beyond tolerance.
struct UnphysicalBath : SimError {
    using SimError::SimError;
};

// Adaptive integrator hit the minimum step size without meeting tolerance.
struct StepFailure : SimError {
    using SimError::SimError;
};

// Conditional state requested on a zero-probability measurement branch.
struct ZeroProbability : SimError {
    using SimError::SimError;
};

// An observable came out far enough outside its physical range to indicate
// corrupted input data rather than roundoff.
struct DataQualityError : SimError {
    using SimError::SimError;
};

// Scenario configuration problems, with file/line context when available.
struct ConfigError : SimError {
    ConfigError(const std::string& msg) : SimError(msg) {}
    ConfigError(const std::string& file, int line, const std::string& msg)
        : SimError(file + ":" + std::to_string(line) + ": " + msg) {}
};

} // namespace sta

#endif
