#include "omitsim/steady_state.hpp"

#include <algorithm>
#include <cmath>

#include "omitsim/sideband_direct.hpp"

namespace omitsim {

namespace {
constexpr cplx I{0.0, 1.0};

/// Solves the linear steady cavity system for fixed lambda:
///   (kappa_j + i*(Delta_j - g_m*lambda_j)) c_j + i*(hopping) =
///   eps_c*[j=N] - i*g*coh_ge*[atom in j]
std::vector<cplx> steady_cavity_solve(const ChainModel& model,
                                      std::span<const double> delta_cavity,
                                      std::span<const double> lambda) {
    const int n = model.n_cavities();
    std::vector<cplx> m(static_cast<std::size_t>(n) * n, cplx{});
    std::vector<cplx> rhs(n, cplx{});
    for (int j = 0; j < n; ++j) {
        const auto& c = model.cavities[j];
        const double dt = delta_cavity[j] - c.g_m_bare * lambda[j];
        m[static_cast<std::size_t>(j) * n + j] = c.kappa + I * dt;
        if (j > 0) m[static_cast<std::size_t>(j) * n + j - 1] = I * model.hopping[j - 1];
        if (j < n - 1) m[static_cast<std::size_t>(j) * n + j + 1] = I * model.hopping[j];
    }
    rhs[n - 1] = model.eps_c;
    if (model.atom)
        rhs[model.atom->cavity_index - 1] -= I * model.atom->g * model.atom->coh_ge;
    return solve_dense(m, rhs, n);
}

double steady_residual(const ChainModel& model,
                       std::span<const double> delta_cavity,
                       const std::vector<cplx>& c,
                       std::span<const double> lambda) {
    const int n = model.n_cavities();
    double res = 0.0;
    for (int j = 0; j < n; ++j) {
        const auto& cav = model.cavities[j];
        const double dt = delta_cavity[j] - cav.g_m_bare * lambda[j];
        cplx eq = -(cav.kappa + I * dt) * c[j];
        if (j > 0) eq -= I * model.hopping[j - 1] * c[j - 1];
        if (j < n - 1) eq -= I * model.hopping[j] * c[j + 1];
        if (j == n - 1) eq += model.eps_c;
        if (model.atom && model.atom->cavity_index - 1 == j)
            eq -= I * model.atom->g * model.atom->coh_ge;
        res = std::max(res, std::abs(eq));
        res = std::max(res, std::abs(lambda[j] - lambda_bar(std::norm(c[j]), cav)));
    }
    return res;
}

}  // namespace

double lambda_bar(double c_bar_sq, const CavityParams& cavity) {
    return 2.0 * cavity.omega_m * cavity.g_m_bare * c_bar_sq /
           (cavity.gamma_m * cavity.gamma_m + cavity.omega_m * cavity.omega_m);
}

SteadyState solve_steady(const ChainModel& model,
                         std::span<const double> delta_cavity,
                         const SteadySettings& settings) {
    const int n = model.n_cavities();
    if (static_cast<int>(delta_cavity.size()) != n)
        throw PreconditionViolated("delta_cavity must have one entry per cavity");

    std::vector<double> lambda(n, 0.0);
    std::vector<cplx> c;
    bool converged = false;
    int iter = 0;
    while (iter < settings.max_iterations) {
        ++iter;
        c = steady_cavity_solve(model, delta_cavity, lambda);
        double change = 0.0;
        for (int j = 0; j < n; ++j) {
            const double target = lambda_bar(std::norm(c[j]), model.cavities[j]);
            const double mixed =
                (1.0 - settings.damping) * lambda[j] + settings.damping * target;
            change = std::max(change, std::abs(mixed - lambda[j]));
            lambda[j] = mixed;
        }
        if (change < settings.tolerance) { converged = true; break; }
    }

    c = steady_cavity_solve(model, delta_cavity, lambda);
    const double residual = steady_residual(model, delta_cavity, c, lambda);
    if (!converged) throw NonConvergence(iter, residual);

    SteadyState s;
    s.c_bar = std::move(c);
    s.lambda_bar = std::move(lambda);
    s.delta_tilde.resize(n);
    for (int j = 0; j < n; ++j)
        s.delta_tilde[j] =
            delta_cavity[j] - model.cavities[j].g_m_bare * s.lambda_bar[j];
    s.residual = residual;
    s.iterations = iter;
    return s;
}

ChainModel effective_coupling_model(const ChainModel& model,
                                    const SteadyState& steady) {
    ChainModel out = model;
    for (int j = 0; j < model.n_cavities(); ++j)
        out.cavities[j].G_m =
            model.cavities[j].g_m_bare * std::abs(steady.c_bar[j]);
    if (out.atom)
        out.atom->G_e =
            out.atom->g * std::abs(steady.c_bar[out.atom->cavity_index - 1]);
    return out;
}

}  // namespace omitsim
