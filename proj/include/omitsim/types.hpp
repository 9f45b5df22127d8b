#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace omitsim {

using cplx = std::complex<double>;

/// Probe response at one detuning: eps_T and its quadratures.
struct OutputField {
    cplx eps_t{};

    double chi_p() const { return eps_t.real(); }        // in-phase (absorption)
    double chi_tilde_p() const { return eps_t.imag(); }  // out-of-phase (dispersion)
};

// ---------------------------------------------------------------------------
// Error hierarchy. ConfigError collects every violated invariant at once;
// the numerical errors map to CLI exit code 2.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct Violation {
    std::string field;
    std::string reason;
};

class ConfigError : public Error {
  public:
    explicit ConfigError(std::vector<Violation> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    ConfigError(std::string field, std::string reason)
        : ConfigError(std::vector<Violation>{{std::move(field), std::move(reason)}}) {}

    const std::vector<Violation>& violations() const { return violations_; }

  private:
    static std::string join(const std::vector<Violation>& vs) {
        std::string msg = "invalid configuration:";
        for (const auto& v : vs) msg += "\n  " + v.field + ": " + v.reason;
        return msg;
    }

    std::vector<Violation> violations_;
};

class UnknownPreset : public Error {
  public:
    explicit UnknownPreset(const std::string& name)
        : Error("unknown preset: " + name) {}
};

class NumericalError : public Error {
  public:
    using Error::Error;
};

class SingularSystem : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
  public:
    NonConvergence(int iterations, double last_residual)
        : NumericalError("fixed-point iteration did not converge after " +
                         std::to_string(iterations) +
                         " iterations (last residual " +
                         std::to_string(last_residual) + ")"),
          iterations(iterations),
          last_residual(last_residual) {}

    int iterations;
    double last_residual;
};

class DegenerateDenominator : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class PreconditionViolated : public Error {
  public:
    using Error::Error;
};

class FitNonConvergence : public NumericalError {
  public:
    FitNonConvergence(int iterations, double residual)
        : NumericalError("fit did not converge after " +
                         std::to_string(iterations) + " iterations (rms " +
                         std::to_string(residual) + ")"),
          iterations(iterations),
          residual(residual) {}

    int iterations;
    double residual;
};

class DegenerateSlice : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

}  // namespace omitsim
