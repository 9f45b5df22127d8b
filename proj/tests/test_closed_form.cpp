#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "omitsim/closed_form.hpp"
#include "omitsim/sideband_direct.hpp"
#include "omitsim/verify.hpp"

using namespace omitsim;

namespace {

AtomParams paper_atom(double delta_r, double delta_e, double v) {
    AtomParams a;
    a.cavity_index = 1;
    a.g = 1.0;
    a.Omega = 1.0;
    a.Delta_e = delta_e;
    a.Delta_r = delta_r;
    a.V = v;
    a.gamma_ge = a.gamma_gr = a.gamma_er = 0.001;
    a.G_e = 1.0;
    return a;
}

DetuningSet det_for(const AtomParams& a, double x) {
    DetuningSet det;
    det.delta = x + 20.0;
    det.x = {x};
    det.has_atom = true;
    det.x_gr = det.delta - a.Delta_r - a.Delta_e - a.V;
    det.x_er = det.delta - a.Delta_r - a.V;
    return det;
}

// Wallis convergent recurrence: evaluates Eq.-13-style fractions from the
// top line downward, a different arithmetic route than the D_j accumulation.
cplx eps_t_cf_topdown(const ChainModel& m, double delta, AtomTermVariant variant) {
    const DetuningSet det = detunings(m, delta);
    const int n = m.n_cavities();
    cplx atom{};
    if (m.atom && variant != AtomTermVariant::None)
        atom = variant == AtomTermVariant::FullEq14
                   ? atom_term_full(*m.atom, det)
                   : atom_term_reduced(*m.atom, det);

    auto line = [&](int j) {  // 0-based cavity index
        cplx b = b_term(m.cavities[j], det.x[j]);
        if (m.atom && m.atom->cavity_index == j + 1 &&
            variant != AtomTermVariant::None)
            b += atom;
        return b;
    };

    cplx num_prev{1.0, 0.0}, num = line(n - 1);
    cplx den_prev{}, den{1.0, 0.0};
    for (int j = n - 2; j >= 0; --j) {
        const cplx a = m.hopping[j] * m.hopping[j];
        const cplx b = line(j);
        const cplx num_next = b * num + a * num_prev;
        const cplx den_next = b * den + a * den_prev;
        num_prev = num; num = num_next;
        den_prev = den; den = den_next;
    }
    return 2.0 * m.kappa_n() * den / num;
}

}  // namespace

TEST_CASE("b_term values and symmetry") {
    const CavityParams uncoupled{2.0, 20.0, 0.001, 1.0, 0.0};
    CHECK(b_term(uncoupled, 0.0) == cplx{2.0, 0.0});

    const CavityParams coupled{0.002, 20.0, 0.001, 1.0, 1.0};
    CHECK(b_term(coupled, 0.0).real() == doctest::Approx(1000.002).epsilon(1e-15));
    CHECK(b_term(coupled, 0.0).imag() == 0.0);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> x_dist(-5.0, 5.0);
    for (int t = 0; t < 30; ++t) {
        const double x = x_dist(rng);
        CHECK(std::abs(b_term(coupled, -x) - std::conj(b_term(coupled, x))) < 1e-15);
    }
}

TEST_CASE("atom term trivial limits") {
    AtomParams a = paper_atom(0.0, 20.0, 0.0);
    a.g = 0.0;
    const DetuningSet det = det_for(a, 0.3);
    CHECK(atom_term_full(a, det) == cplx{});
    CHECK(atom_term_reduced(a, det) == cplx{});
}

TEST_CASE("Omega = 0 truncates the chain to a two-level response") {
    AtomParams a = paper_atom(0.0, 20.0, 3.0);
    a.Omega = 0.0;
    for (double x : {-1.0, 0.0, 0.7, 2.5}) {
        const DetuningSet det = det_for(a, x);
        const cplx expected = 1.0 / (cplx{0.001, 0.0} - cplx{0.0, 1.0} * x);
        CHECK(std::abs(atom_term_reduced(a, det) - expected) <= 1e-15);
        CHECK(std::abs(atom_term_full(a, det) - expected) <= 1e-12 * std::abs(expected));
    }
}

TEST_CASE("frozen transcription values") {
    // Computed by an independent straight transcription of the closed-form
    // atom term in a separate script before this implementation existed.
    {
        const AtomParams a = paper_atom(20.0, 20.0, 0.0);
        const DetuningSet det = det_for(a, 0.0);
        const cplx full = atom_term_full(a, det);
        CHECK(full.real() == doctest::Approx(500.049497798988).epsilon(1e-12));
        CHECK(full.imag() == doctest::Approx(4.974512481025322).epsilon(1e-12));
        const cplx red = atom_term_reduced(a, det);
        CHECK(red.real() == doctest::Approx(500.0502449253875).epsilon(1e-12));
        CHECK(red.imag() == doctest::Approx(4.9994950509986).epsilon(1e-12));
    }
    {
        const AtomParams a = paper_atom(0.0, 20.0, 0.0);  // preset convention
        const DetuningSet det = det_for(a, 0.0);
        const cplx full = atom_term_full(a, det);
        CHECK(full.real() == doctest::Approx(2.4885646818567366).epsilon(1e-12));
        CHECK(full.imag() == doctest::Approx(0.04987552164100075).epsilon(1e-12));
        const cplx red = atom_term_reduced(a, det);
        CHECK(red.real() == doctest::Approx(0.0010049989874510224).epsilon(1e-12));
        CHECK(red.imag() == doctest::Approx(0.049999899500151504).epsilon(1e-12));
    }
    {
        const AtomParams a = paper_atom(0.0, 20.0, 4.0);
        const DetuningSet det = det_for(a, 1.3);
        const cplx full = atom_term_full(a, det);
        CHECK(full.real() == doctest::Approx(0.000409471120134647).epsilon(1e-12));
        CHECK(full.imag() == doctest::Approx(0.6012947788992067).epsilon(1e-12));
    }
}

TEST_CASE("reduced variant matches the atom contribution of the direct solve") {
    // Single cavity + atom: A implied by eps_T is 2*kappa/eps_T - (kappa - i x).
    ChainModel m;
    m.cavities = {{2.0, 20.0, 0.001, 1.0, 0.0}};
    m.eps_p = 1.0;
    for (double v : {0.0, 2.0, 6.0, 30.0}) {
        m.atom = paper_atom(0.0, 20.0, v);
        for (double x : {-2.0, -0.3, 0.0, 0.4, 1.1, 5.0}) {
            const cplx eps = eps_t_direct(m, 20.0 + x).eps_t;
            const cplx implied = 2.0 * 2.0 / eps - (cplx{2.0, 0.0} - cplx{0.0, 1.0} * x);
            const cplx red = atom_term_reduced(*m.atom, detunings(m, 20.0 + x));
            CHECK(std::abs(implied - red) <=
                  1e-9 * std::max(std::abs(red), 1e-30));
        }
    }
}

TEST_CASE("reduced variant rejects non-default populations") {
    AtomParams a = paper_atom(0.0, 20.0, 0.0);
    a.pop_gg = 0.9;
    a.pop_ee = 0.1;
    CHECK_THROWS_AS(atom_term_reduced(a, det_for(a, 0.0)), PreconditionViolated);
}

TEST_CASE("degenerate denominator is reported") {
    AtomParams a = paper_atom(0.0, 20.0, 0.0);
    a.gamma_er = 1e-310;  // forces |gamma_er - i*x_er| below the floor
    DetuningSet det = det_for(a, 0.0);
    det.x_er = 0.0;
    CHECK_THROWS_AS(atom_term_reduced(a, det), DegenerateDenominator);
}

TEST_CASE("continued fraction spot values") {
    ChainModel bare;
    bare.cavities = {{2.0, 20.0, 0.001, 1.0, 0.0}};
    bare.eps_p = 1.0;
    CHECK(eps_t_cf(bare, 20.0, AtomTermVariant::None).eps_t.real() ==
          doctest::Approx(2.0).epsilon(1e-14));

    ChainModel omit = bare;
    omit.cavities[0].G_m = 1.0;
    CHECK(eps_t_cf(omit, 20.0, AtomTermVariant::None).eps_t.real() ==
          doctest::Approx(4.0 / 1002.0).epsilon(1e-12));

    // frozen cross-implementation value, fig2d at x/kappa_N = 0.4
    const ChainModel fig2d = preset("fig2d");
    const cplx v = eps_t_cf(fig2d, 20.0 + 0.8, AtomTermVariant::None).eps_t;
    CHECK(v.real() == doctest::Approx(0.42458684820518044).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(0.8081992808976993).epsilon(1e-12));
}

TEST_CASE("normalization is eps_p independent") {
    ChainModel m = preset("fig2d");
    m.eps_p = 0.37;
    const cplx a = eps_t_cf(m, 20.5, AtomTermVariant::None).eps_t;
    const cplx b = eps_t_direct(m, 20.5).eps_t;
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(b));
}

TEST_CASE("oracle equivalence on randomized atom-free models") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> x_dist(-8.0, 8.0);
    for (int t = 0; t < 50; ++t) {
        const ChainModel m = validate(random_chain_model(rng)).model;
        for (int k = 0; k < 64; ++k) {
            const double delta = m.omega_ref() + x_dist(rng);
            const cplx direct = eps_t_direct(m, delta).eps_t;
            const cplx cf = eps_t_cf(m, delta, AtomTermVariant::None).eps_t;
            CHECK(std::abs(cf - direct) / std::max(std::abs(direct), 1e-30) < 1e-9);
        }
    }
}

TEST_CASE("oracle equivalence for the reduced atom variant") {
    for (const char* name : {"fig5", "fig6", "fig7", "fig8"}) {
        for (double v : {0.0, 4.0, 30.0}) {
            const ChainModel m = preset(name, v);
            for (double x : {-3.0, -0.9, 0.0, 0.31, 1.7, 6.0}) {
                const cplx direct = eps_t_direct(m, 20.0 + x).eps_t;
                const cplx cf =
                    eps_t_cf(m, 20.0 + x, AtomTermVariant::Reduced).eps_t;
                CHECK(std::abs(cf - direct) / std::max(std::abs(direct), 1e-30) <
                      1e-9);
            }
        }
    }
}

TEST_CASE("variant None equals FullEq14 with g = 0") {
    ChainModel with_atom = preset("fig5", 3.0);
    with_atom.atom->g = 0.0;
    ChainModel without = with_atom;
    without.atom.reset();
    for (double x : {-2.0, 0.0, 1.5}) {
        const cplx a = eps_t_cf(with_atom, 20.0 + x, AtomTermVariant::FullEq14).eps_t;
        const cplx b = eps_t_cf(without, 20.0 + x, AtomTermVariant::None).eps_t;
        CHECK(a == b);
    }
}

TEST_CASE("bottom-up agrees with the top-down convergent route") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> x_dist(-8.0, 8.0);
    for (int t = 0; t < 30; ++t) {
        const ChainModel m = validate(random_chain_model(rng)).model;
        for (int k = 0; k < 16; ++k) {
            const double delta = m.omega_ref() + x_dist(rng);
            const cplx up = eps_t_cf(m, delta, AtomTermVariant::None).eps_t;
            const cplx down = eps_t_cf_topdown(m, delta, AtomTermVariant::None);
            CHECK(std::abs(up - down) <= 1e-12 * std::max(std::abs(up), 1e-30));
        }
    }
    const ChainModel fig5 = preset("fig5", 4.0);
    for (double x : {-1.0, 0.2, 4.1}) {
        const cplx up = eps_t_cf(fig5, 20.0 + x, AtomTermVariant::Reduced).eps_t;
        const cplx down = eps_t_cf_topdown(fig5, 20.0 + x, AtomTermVariant::Reduced);
        CHECK(std::abs(up - down) <= 1e-12 * std::abs(up));
    }
}
