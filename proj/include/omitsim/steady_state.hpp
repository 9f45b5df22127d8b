#pragma once

#include <span>
#include <vector>

#include "omitsim/model.hpp"

namespace omitsim {

/// Control-field steady state of the chain: cavity amplitudes, mechanical
/// displacements and the displacement-shifted detunings.
struct SteadyState {
    std::vector<cplx> c_bar;
    std::vector<double> lambda_bar;   // b_bar + conj(b_bar), real and >= 0
    std::vector<double> delta_tilde;  // Delta_j - g_m * lambda_bar_j
    double residual = 0.0;            // max-norm of the steady equations
    int iterations = 0;
};

struct SteadySettings {
    double damping = 0.5;
    double tolerance = 1e-12;  // successive lambda change
    int max_iterations = 10000;
};

/// Steady mechanical displacement, 2*omega_m*g_m*|c|^2 / (gamma_m^2 + omega_m^2).
double lambda_bar(double c_bar_sq, const CavityParams& cavity);

/// Damped fixed-point solve of the time-independent mean-field equations.
/// delta_cavity holds Delta_j per cavity. Fails loudly (NonConvergence)
/// rather than returning a questionable iterate.
SteadyState solve_steady(const ChainModel& model,
                         std::span<const double> delta_cavity,
                         const SteadySettings& settings = {});

/// Self-consistent coupling mode: returns the model with G_m = g_m*|c_bar_j|
/// (and G_e = g*|c_bar_i| when an atom is present) taken from a steady state.
ChainModel effective_coupling_model(const ChainModel& model,
                                    const SteadyState& steady);

}  // namespace omitsim
