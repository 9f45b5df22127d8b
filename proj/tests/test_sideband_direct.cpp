#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "omitsim/closed_form.hpp"
#include "omitsim/sideband_direct.hpp"
#include "omitsim/verify.hpp"

using namespace omitsim;

namespace {

ChainModel bare_cavity(double kappa) {
    ChainModel m;
    m.cavities = {{kappa, 20.0, 0.001, 1.0, 0.0}};
    m.eps_p = 1.0;
    return m;
}

}  // namespace

TEST_CASE("system dimension and rhs layout") {
    const ChainModel bare = bare_cavity(2.0);
    const LinearSystem sys1 = assemble(bare, 20.0);
    CHECK(sys1.dim == 1);
    CHECK(sys1.rhs[0] == cplx{1.0, 0.0});

    ChainModel full = preset("fig5", 0.0);
    for (auto& c : full.cavities) c.G_m = 1.0;  // 4 cavities + 4 oscillators + atom
    const LinearSystem sys2 = assemble(full, 20.0);
    CHECK(sys2.dim == 11);

    // default populations: probe drive only, in the c_N row
    int nonzero = 0;
    for (int i = 0; i < sys2.dim; ++i)
        if (sys2.rhs[i] != cplx{}) ++nonzero;
    CHECK(nonzero == 1);
    CHECK(sys2.rhs[sys2.index.cavity[3]] == cplx{full.eps_p, 0.0});

    // inverted populations put the Rabi drive on the sigma_er row
    ChainModel inverted = full;
    inverted.atom->pop_gg = 0.0;
    inverted.atom->pop_rr = 1.0;
    const LinearSystem sys3 = assemble(inverted, 20.0);
    CHECK(sys3.rhs[sys3.index.sigma_er] ==
          cplx{0.0, 1.0} * inverted.atom->Omega);
}

TEST_CASE("oscillators with G_m = 0 get no row") {
    const ChainModel m = preset("fig2b");  // oscillators on cavities 1,2 only
    const LinearSystem sys = assemble(m, 20.0);
    CHECK(sys.dim == 6);
    CHECK(sys.index.oscillator[0] >= 0);
    CHECK(sys.index.oscillator[1] >= 0);
    CHECK(sys.index.oscillator[2] == -1);
    CHECK(sys.index.oscillator[3] == -1);
}

TEST_CASE("solve_linear basics") {
    LinearSystem id;
    id.dim = 3;
    id.matrix = {cplx{1}, {}, {}, {}, cplx{1}, {}, {}, {}, cplx{1}};
    id.rhs = {cplx{1, 2}, cplx{3, 4}, cplx{5, 6}};
    const auto u = solve_linear(id);
    CHECK(u[0] == cplx{1, 2});
    CHECK(u[1] == cplx{3, 4});
    CHECK(u[2] == cplx{5, 6});

    LinearSystem zero;
    zero.dim = 2;
    zero.matrix.assign(4, cplx{});
    zero.rhs.assign(2, cplx{1.0, 0.0});
    CHECK_THROWS_AS(solve_linear(zero), SingularSystem);
}

TEST_CASE("solve_linear residual bound on random complex systems") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 25; ++t) {
        const int dim = 11;
        LinearSystem sys;
        sys.dim = dim;
        sys.matrix.resize(dim * dim);
        sys.rhs.resize(dim);
        for (auto& v : sys.matrix) v = cplx{u(rng), u(rng)};
        for (int i = 0; i < dim; ++i) sys.matrix[i * dim + i] += cplx{4.0, 0.0};
        for (auto& v : sys.rhs) v = cplx{u(rng), u(rng)};

        const auto sol = solve_linear(sys);
        double res = 0.0, m_norm = 0.0, u_norm = 0.0, r_norm = 0.0;
        for (int i = 0; i < dim; ++i) {
            cplx acc = -sys.rhs[i];
            double row = 0.0;
            for (int j = 0; j < dim; ++j) {
                acc += sys.matrix[i * dim + j] * sol[j];
                row += std::abs(sys.matrix[i * dim + j]);
            }
            res = std::max(res, std::abs(acc));
            m_norm = std::max(m_norm, row);
            u_norm = std::max(u_norm, std::abs(sol[i]));
            r_norm = std::max(r_norm, std::abs(sys.rhs[i]));
        }
        CHECK(res <= 1e-10 * (m_norm * u_norm + r_norm));
    }
}

TEST_CASE("analytic spot values") {
    // bare cavity on resonance: eps_T = 2*kappa/(kappa - i*0) = 2
    const OutputField bare = eps_t_direct(bare_cavity(2.0), 20.0);
    CHECK(bare.eps_t.real() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(bare.eps_t.imag() == doctest::Approx(0.0).epsilon(1e-14));

    // single-cavity OMIT: 2*kappa/(kappa + G^2/gamma_m) = 4/1002
    ChainModel omit = bare_cavity(2.0);
    omit.cavities[0].G_m = 1.0;
    const OutputField o = eps_t_direct(omit, 20.0);
    CHECK(o.eps_t.real() == doctest::Approx(4.0 / 1002.0).epsilon(1e-12));
    CHECK(std::abs(o.eps_t.imag()) < 1e-12);

    // two bare cavities: 2*kappa_2/(kappa_2 + g^2/kappa_1) = 4/2002
    ChainModel two;
    two.cavities = {{0.002, 20.0, 0.001, 1.0, 0.0}, {2.0, 20.0, 0.001, 1.0, 0.0}};
    two.hopping = {2.0};
    two.eps_p = 1.0;
    const OutputField t = eps_t_direct(two, 20.0);
    CHECK(t.eps_t.real() == doctest::Approx(4.0 / 2002.0).epsilon(1e-12));
}

TEST_CASE("oscillator elimination reproduces the B_j line") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int t = 0; t < 20; ++t) {
        ChainModel m = bare_cavity(u(rng));
        m.cavities[0].G_m = u(rng);
        m.cavities[0].gamma_m = 0.01 * u(rng);
        const double x = 4.0 * (u(rng) - 1.0);
        const OutputField direct = eps_t_direct(m, 20.0 + x);
        const cplx via_b = 2.0 * m.cavities[0].kappa / b_term(m.cavities[0], x);
        CHECK(std::abs(direct.eps_t - via_b) <= 1e-12 * std::abs(via_b));
    }
}

TEST_CASE("eps_T is invariant under probe rescaling") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> alpha(0.01, 100.0);
    ChainModel m = preset("fig5", 2.0);
    const OutputField ref = eps_t_direct(m, 20.0 + 0.37);
    for (int t = 0; t < 10; ++t) {
        ChainModel scaled = m;
        scaled.eps_p *= alpha(rng);
        const OutputField out = eps_t_direct(scaled, 20.0 + 0.37);
        CHECK(std::abs(out.eps_t - ref.eps_t) <= 1e-12 * std::abs(ref.eps_t));
    }
}

TEST_CASE("atom-free conjugate symmetry") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> x_dist(-8.0, 8.0);
    for (int t = 0; t < 40; ++t) {
        const ChainModel m = validate(random_chain_model(rng, true)).model;
        const double omega = m.omega_ref();
        for (int k = 0; k < 8; ++k) {
            const double x = x_dist(rng);
            const cplx plus = eps_t_direct(m, omega + x).eps_t;
            const cplx minus = eps_t_direct(m, omega - x).eps_t;
            CHECK(std::abs(minus - std::conj(plus)) <= 1e-12);
        }
    }
}

TEST_CASE("passivity of the atom-free response") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> x_dist(-8.0, 8.0);
    for (int t = 0; t < 60; ++t) {
        const ChainModel m = validate(random_chain_model(rng)).model;
        for (int k = 0; k < 16; ++k) {
            const cplx v = eps_t_direct(m, m.omega_ref() + x_dist(rng)).eps_t;
            CHECK(std::abs(v - 1.0) <= 1.0 + 1e-9);
        }
    }
}
