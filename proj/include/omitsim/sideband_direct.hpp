#pragma once

#include <span>
#include <vector>

#include "omitsim/model.hpp"

namespace omitsim {

/// Dense complex system for the first-order anti-Stokes sideband amplitudes.
/// Unknown order: c_j for every cavity, then b_j for every cavity with
/// G_m > 0, then sigma_ge, sigma_gr, sigma_er when an atom is present.
struct LinearSystem {
    int dim = 0;
    std::vector<cplx> matrix;  // row-major dim x dim
    std::vector<cplx> rhs;

    struct IndexMap {
        std::vector<int> cavity;      // row of c_j
        std::vector<int> oscillator;  // row of b_j, -1 when decoupled
        int sigma_ge = -1;
        int sigma_gr = -1;
        int sigma_er = -1;
    } index;

    cplx& at(int row, int col) { return matrix[static_cast<std::size_t>(row) * dim + col]; }
    cplx at(int row, int col) const { return matrix[static_cast<std::size_t>(row) * dim + col]; }
};

/// Builds the sideband system at probe-control detuning delta. Couplings are
/// the stored effective G_m / G_e (direct-G mode); for the self-consistent
/// mode pass the model through effective_coupling_model() first.
LinearSystem assemble(const ChainModel& model, double delta);

/// Gaussian elimination with row pivoting. Throws SingularSystem when a pivot
/// falls below 1e-14 of its row scale, and verifies the back-substituted
/// residual against 1e-10*(|M|_inf*|u|_inf + |r|_inf).
std::vector<cplx> solve_linear(const LinearSystem& system);

/// Raw dense solve used by both the sideband system and the steady solver.
std::vector<cplx> solve_dense(std::span<const cplx> matrix,
                              std::span<const cplx> rhs, int dim);

/// eps_T = 2*kappa_N*c_{N,-}/eps_p from the solved sideband system.
OutputField eps_t_direct(const ChainModel& model, double delta);

}  // namespace omitsim
