#include "omitsim/closed_form.hpp"

#include <cmath>

namespace omitsim {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kDegenerate = 1e-300;

cplx checked_div(cplx num, cplx den, const char* what) {
    if (std::abs(den) < kDegenerate)
        throw DegenerateDenominator(std::string("degenerate denominator in ") + what);
    return num / den;
}

}  // namespace

cplx b_term(const CavityParams& cavity, double x) {
    return cavity.kappa - I * x +
           checked_div(cavity.G_m * cavity.G_m, cavity.gamma_m - I * x, "B_j");
}

cplx atom_term_full(const AtomParams& a, const DetuningSet& det) {
    if (a.g == 0.0) return cplx{};
    const double x = det.x_at(a.cavity_index);
    const double s = a.V;

    const cplx q = (a.gamma_gr + I * a.Delta_r + I * s) * (a.gamma_ge + I * a.Delta_e) +
                   a.Omega * a.Omega;
    const cplx p = I * (a.Delta_r + s - a.Delta_e) + a.gamma_er +
                   checked_div(a.G_e * a.G_e * (a.gamma_ge + I * a.Delta_e), q, "Q");

    const cplx er_chain =
        checked_div(a.G_e * a.G_e, a.gamma_er - I * det.x_er, "gamma_er - i*x_er");
    const cplx chain = a.gamma_gr - I * det.x_gr + er_chain;

    const double bracket_a = a.pop_rr + 2.0 * a.pop_gg - 1.0;
    const double bracket_b = 2.0 * a.pop_rr + a.pop_gg - 1.0;
    const double g_om_ge = a.g * a.Omega * a.G_e;

    const cplx numerator =
        (a.g * a.g * chain + checked_div(g_om_ge * g_om_ge, p * q, "P*Q")) * bracket_a -
        checked_div(a.g * a.g * a.Omega * a.Omega, p, "P") * bracket_b;
    const cplx denominator = (a.gamma_ge - I * x) * chain + a.Omega * a.Omega;
    return checked_div(numerator, denominator, "A");
}

cplx atom_term_reduced(const AtomParams& a, const DetuningSet& det) {
    if (a.pop_gg != 1.0 || a.pop_ee != 0.0 || a.pop_rr != 0.0 ||
        a.coh_gr != cplx{} || a.coh_er != cplx{})
        throw PreconditionViolated(
            "reduced atom term requires pop_gg = 1 and zero steady coherences");
    if (a.g == 0.0) return cplx{};

    const double x = det.x_at(a.cavity_index);
    cplx den = a.gamma_ge - I * x;
    if (a.Omega != 0.0) {
        const cplx d_gr =
            a.gamma_gr - I * det.x_gr +
            checked_div(a.G_e * a.G_e, a.gamma_er - I * det.x_er, "gamma_er - i*x_er");
        den += checked_div(a.Omega * a.Omega, d_gr, "gr chain");
    }
    return checked_div(a.g * a.g, den, "A_red");
}

OutputField eps_t_cf(const ChainModel& model, double delta,
                     AtomTermVariant variant) {
    const DetuningSet det = detunings(model, delta);
    const int n = model.n_cavities();

    cplx atom_term{};
    int atom_cavity = 0;
    if (model.atom && variant != AtomTermVariant::None) {
        atom_cavity = model.atom->cavity_index;
        atom_term = variant == AtomTermVariant::FullEq14
                        ? atom_term_full(*model.atom, det)
                        : atom_term_reduced(*model.atom, det);
    }

    cplx d{};
    for (int j = 0; j < n; ++j) {
        cplx line = b_term(model.cavities[j], det.x[j]);
        if (atom_cavity == j + 1) line += atom_term;
        d = j == 0 ? line
                   : line + checked_div(model.hopping[j - 1] * model.hopping[j - 1],
                                        d, "D_j");
    }
    return OutputField{checked_div(2.0 * model.kappa_n(), d, "D_N")};
}

}  // namespace omitsim
