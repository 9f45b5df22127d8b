#include "omitsim/sideband_direct.hpp"

#include <algorithm>
#include <cmath>

namespace omitsim {

namespace {
constexpr cplx I{0.0, 1.0};
}

LinearSystem assemble(const ChainModel& model, double delta) {
    const int n = model.n_cavities();
    const DetuningSet det = detunings(model, delta);

    LinearSystem sys;
    sys.index.cavity.resize(n);
    sys.index.oscillator.assign(n, -1);

    int next = 0;
    for (int j = 0; j < n; ++j) sys.index.cavity[j] = next++;
    for (int j = 0; j < n; ++j)
        if (model.cavities[j].G_m > 0.0) sys.index.oscillator[j] = next++;
    if (model.atom) {
        sys.index.sigma_ge = next++;
        sys.index.sigma_gr = next++;
        sys.index.sigma_er = next++;
    }
    sys.dim = next;
    sys.matrix.assign(static_cast<std::size_t>(sys.dim) * sys.dim, cplx{});
    sys.rhs.assign(sys.dim, cplx{});

    for (int j = 0; j < n; ++j) {
        const auto& c = model.cavities[j];
        const int row = sys.index.cavity[j];
        sys.at(row, row) = c.kappa - I * det.x[j];
        if (j > 0) sys.at(row, sys.index.cavity[j - 1]) = I * model.hopping[j - 1];
        if (j < n - 1) sys.at(row, sys.index.cavity[j + 1]) = I * model.hopping[j];
        if (sys.index.oscillator[j] >= 0)
            sys.at(row, sys.index.oscillator[j]) = -I * c.G_m;
    }
    sys.rhs[sys.index.cavity[n - 1]] = model.eps_p;

    for (int j = 0; j < n; ++j) {
        const int row = sys.index.oscillator[j];
        if (row < 0) continue;
        const auto& c = model.cavities[j];
        sys.at(row, row) = c.gamma_m - I * det.x[j];
        sys.at(row, sys.index.cavity[j]) = -I * c.G_m;
    }

    if (model.atom) {
        const auto& a = *model.atom;
        const int ci = sys.index.cavity[a.cavity_index - 1];
        const double x_i = det.x_at(a.cavity_index);
        const int ge = sys.index.sigma_ge;
        const int gr = sys.index.sigma_gr;
        const int er = sys.index.sigma_er;

        sys.at(ci, ge) = I * a.g;

        sys.at(ge, ge) = a.gamma_ge - I * x_i;
        sys.at(ge, ci) = -I * a.g * (a.pop_ee - a.pop_gg);
        sys.at(ge, gr) = I * a.Omega;

        sys.at(gr, gr) = a.gamma_gr - I * det.x_gr;
        sys.at(gr, er) = -I * a.G_e;
        sys.at(gr, ci) = -I * a.g * a.coh_er;
        sys.at(gr, ge) = I * a.Omega;

        sys.at(er, er) = a.gamma_er - I * det.x_er;
        sys.at(er, gr) = -I * a.G_e;
        sys.at(er, ci) = -I * a.g * a.coh_gr;
        sys.rhs[er] = I * a.Omega * (a.pop_rr - a.pop_ee);
    }
    return sys;
}

std::vector<cplx> solve_dense(std::span<const cplx> matrix,
                              std::span<const cplx> rhs, int dim) {
    std::vector<cplx> m(matrix.begin(), matrix.end());
    std::vector<cplx> r(rhs.begin(), rhs.end());
    auto at = [&](int i, int j) -> cplx& {
        return m[static_cast<std::size_t>(i) * dim + j];
    };

    // Row scales from the input matrix anchor the pivot threshold.
    std::vector<double> scale(dim, 0.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            scale[i] = std::max(scale[i], std::abs(matrix[static_cast<std::size_t>(i) * dim + j]));

    std::vector<int> perm(dim);
    for (int i = 0; i < dim; ++i) perm[i] = i;

    for (int k = 0; k < dim; ++k) {
        int pivot_row = k;
        double best = std::abs(at(k, k));
        for (int i = k + 1; i < dim; ++i) {
            const double v = std::abs(at(i, k));
            if (v > best) { best = v; pivot_row = i; }
        }
        if (pivot_row != k) {
            for (int j = 0; j < dim; ++j) std::swap(at(k, j), at(pivot_row, j));
            std::swap(r[k], r[pivot_row]);
            std::swap(perm[k], perm[pivot_row]);
        }
        const double pivot_mag = std::abs(at(k, k));
        if (pivot_mag == 0.0 || pivot_mag < 1e-14 * scale[perm[k]])
            throw SingularSystem("sideband system is singular at pivot " +
                                 std::to_string(k));
        for (int i = k + 1; i < dim; ++i) {
            const cplx f = at(i, k) / at(k, k);
            if (f == cplx{}) continue;
            at(i, k) = cplx{};
            for (int j = k + 1; j < dim; ++j) at(i, j) -= f * at(k, j);
            r[i] -= f * r[k];
        }
    }

    std::vector<cplx> u(dim);
    for (int i = dim - 1; i >= 0; --i) {
        cplx acc = r[i];
        for (int j = i + 1; j < dim; ++j) acc -= at(i, j) * u[j];
        u[i] = acc / at(i, i);
    }

    // Residual check against the original system.
    double m_norm = 0.0, u_norm = 0.0, r_norm = 0.0, res = 0.0;
    for (int i = 0; i < dim; ++i) {
        double row_sum = 0.0;
        cplx acc = -rhs[i];
        for (int j = 0; j < dim; ++j) {
            const cplx mij = matrix[static_cast<std::size_t>(i) * dim + j];
            row_sum += std::abs(mij);
            acc += mij * u[j];
        }
        m_norm = std::max(m_norm, row_sum);
        u_norm = std::max(u_norm, std::abs(u[i]));
        r_norm = std::max(r_norm, std::abs(rhs[i]));
        res = std::max(res, std::abs(acc));
    }
    if (res > 1e-10 * (m_norm * u_norm + r_norm))
        throw NumericalError("linear solve residual check failed (residual " +
                             std::to_string(res) + ")");
    return u;
}

std::vector<cplx> solve_linear(const LinearSystem& system) {
    return solve_dense(system.matrix, system.rhs, system.dim);
}

OutputField eps_t_direct(const ChainModel& model, double delta) {
    const LinearSystem sys = assemble(model, delta);
    const std::vector<cplx> u = solve_linear(sys);
    const cplx c_n = u[sys.index.cavity[model.n_cavities() - 1]];
    return OutputField{2.0 * model.kappa_n() * c_n / model.eps_p};
}

}  // namespace omitsim
