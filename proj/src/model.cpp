#include "omitsim/model.hpp"

#include <cmath>
#include <map>

namespace omitsim {

namespace {

bool finite(double v) { return std::isfinite(v); }

void check_cavity(const CavityParams& c, int idx, std::vector<Violation>& out) {
    const std::string base = "cavities[" + std::to_string(idx) + "].";
    if (!(finite(c.kappa) && c.kappa > 0.0))
        out.push_back({base + "kappa", "nonpositive"});
    if (!(finite(c.omega_m) && c.omega_m > 0.0))
        out.push_back({base + "omega_m", "nonpositive"});
    if (!(finite(c.gamma_m) && c.gamma_m > 0.0))
        out.push_back({base + "gamma_m", "nonpositive"});
    if (!(finite(c.g_m_bare) && c.g_m_bare >= 0.0))
        out.push_back({base + "g_m", "negative"});
    if (!(finite(c.G_m) && c.G_m >= 0.0))
        out.push_back({base + "G_m", "negative (complex couplings are rejected)"});
}

void check_atom(const AtomParams& a, int n, std::vector<Violation>& out) {
    if (a.cavity_index < 1 || a.cavity_index > n)
        out.push_back({"atom.cavity", "index out of range 1.." + std::to_string(n)});
    if (!(finite(a.gamma_ge) && a.gamma_ge > 0.0))
        out.push_back({"atom.gamma_ge", "nonpositive"});
    if (!(finite(a.gamma_gr) && a.gamma_gr > 0.0))
        out.push_back({"atom.gamma_gr", "nonpositive"});
    if (!(finite(a.gamma_er) && a.gamma_er > 0.0))
        out.push_back({"atom.gamma_er", "nonpositive"});
    if (!(finite(a.V) && a.V >= 0.0))
        out.push_back({"atom.V", "negative"});
    if (!(finite(a.G_e) && a.G_e >= 0.0))
        out.push_back({"atom.G_e", "negative"});
    for (auto [v, name] : {std::pair{a.pop_gg, "pop_gg"},
                           std::pair{a.pop_ee, "pop_ee"},
                           std::pair{a.pop_rr, "pop_rr"}}) {
        if (!(finite(v) && v >= 0.0 && v <= 1.0))
            out.push_back({std::string("atom.") + name, "outside [0,1]"});
    }
    if (a.pop_gg + a.pop_ee + a.pop_rr > 1.0 + 1e-12)
        out.push_back({"atom.populations", "sum exceeds 1"});
    if (!finite(a.g)) out.push_back({"atom.g", "not finite"});
    if (!finite(a.Omega)) out.push_back({"atom.Omega", "not finite"});
    if (!finite(a.Delta_e)) out.push_back({"atom.Delta_e", "not finite"});
    if (!finite(a.Delta_r)) out.push_back({"atom.Delta_r", "not finite"});
}

}  // namespace

Validated validate(const ChainModel& raw) {
    std::vector<Violation> violations;

    const int n = raw.n_cavities();
    if (n < 1) violations.push_back({"cavities", "empty (N >= 1 required)"});
    for (int j = 0; j < n; ++j) check_cavity(raw.cavities[j], j, violations);

    if (static_cast<int>(raw.hopping.size()) != std::max(n - 1, 0))
        violations.push_back({"hopping", "length must be N-1 = " +
                                             std::to_string(std::max(n - 1, 0))});
    for (std::size_t k = 0; k < raw.hopping.size(); ++k)
        if (!(finite(raw.hopping[k]) && raw.hopping[k] >= 0.0))
            violations.push_back({"hopping[" + std::to_string(k) + "]", "negative"});

    if (!(finite(raw.eps_c) && raw.eps_c >= 0.0))
        violations.push_back({"drive.eps_c", "negative"});
    if (!(finite(raw.eps_p) && raw.eps_p > 0.0))
        violations.push_back({"drive.eps_p", "nonpositive"});

    if (raw.atom && n >= 1) check_atom(*raw.atom, n, violations);

    if (!violations.empty()) throw ConfigError(std::move(violations));

    Validated result{raw, {}};

    for (int j = 0; j < n; ++j) {
        const auto& c = raw.cavities[j];
        if (c.kappa >= c.omega_m)
            result.warnings.push_back(
                "cavity " + std::to_string(j + 1) +
                " is outside the resolved-sideband regime (kappa >= omega_m); "
                "the single-sideband truncation may be inaccurate");
    }
    if (n > 1) {
        const double kn = raw.kappa_n();
        bool weak = true;
        for (double g : raw.hopping)
            if (g < kn) weak = false;
        for (int j = 0; j + 1 < n; ++j)
            if (raw.cavities[j].kappa > 0.1 * kn) weak = false;
        if (!weak)
            result.warnings.push_back(
                "parameters are outside the weak dissipative regime "
                "(g_n >= kappa_N >> kappa_j expected)");
    }
    return result;
}

DetuningSet detunings(const ChainModel& model, double delta) {
    DetuningSet det;
    det.delta = delta;
    det.x.reserve(model.cavities.size());
    for (const auto& c : model.cavities) det.x.push_back(delta - c.omega_m);
    if (model.atom) {
        const auto& a = *model.atom;
        det.has_atom = true;
        det.x_er = delta - a.Delta_r - a.V;
        det.x_gr = det.x_er - a.Delta_e;  // x_er - x_gr = Delta_e, exactly
    }
    return det;
}

namespace {

constexpr double kOmegaM = 20.0;
constexpr double kGammaM = 0.001;
constexpr double kKappaSmall = 0.002;
constexpr double kKappaN = 2.0;
constexpr double kHopping = 2.0;  // g_1 = g_2 = ... = kappa_N

ChainModel paper_chain(std::initializer_list<int> coupled_oscillators) {
    ChainModel m;
    m.cavities.assign(4, CavityParams{kKappaSmall, kOmegaM, kGammaM, 1.0, 0.0});
    m.cavities[3].kappa = kKappaN;
    for (int j : coupled_oscillators) m.cavities[j - 1].G_m = 1.0;
    m.hopping.assign(3, kHopping);
    m.eps_c = 1.0;
    m.eps_p = 1e-4;
    return m;
}

// The two-photon (g<->r) resonance must sit at x = S for the DDI to shift
// the doublet as in the source spectra; with the x_gr = Delta-Dr-De-S
// convention that means Delta_r = 0 and Delta_e = omega_m.
AtomParams paper_atom(int cavity, double v) {
    AtomParams a;
    a.cavity_index = cavity;
    a.g = 1.0;
    a.Omega = 1.0;
    a.Delta_e = kOmegaM;
    a.Delta_r = 0.0;
    a.V = v;
    a.gamma_ge = a.gamma_gr = a.gamma_er = 0.001;
    a.pop_gg = 1.0;
    a.pop_ee = a.pop_rr = 0.0;
    a.G_e = 1.0;
    return a;
}

}  // namespace

ChainModel preset(const std::string& name, double v) {
    ChainModel m;
    if (name == "fig2a") m = paper_chain({1});
    else if (name == "fig2b") m = paper_chain({1, 2});
    else if (name == "fig2c") m = paper_chain({1, 2, 3});
    else if (name == "fig2d") m = paper_chain({1, 2, 3, 4});
    else if (name == "fig4a") m = paper_chain({});
    else if (name == "fig4b") m = paper_chain({1, 3});
    else if (name == "fig4c") m = paper_chain({2});
    else if (name == "fig4d") m = paper_chain({2, 4});
    else if (name == "fig5") { m = paper_chain({1}); m.atom = paper_atom(1, v); }
    else if (name == "fig6") { m = paper_chain({2}); m.atom = paper_atom(2, v); }
    else if (name == "fig7") { m = paper_chain({}); m.atom = paper_atom(1, v); }
    else if (name == "fig8") { m = paper_chain({}); m.atom = paper_atom(2, v); }
    else throw UnknownPreset(name);
    return m;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "fig2a", "fig2b", "fig2c", "fig2d", "fig4a", "fig4b",
        "fig4c", "fig4d", "fig5",  "fig6",  "fig7",  "fig8"};
    return names;
}

bool structurally_equal(const ChainModel& a, const ChainModel& b) {
    if (a.cavities.size() != b.cavities.size()) return false;
    for (std::size_t j = 0; j < a.cavities.size(); ++j) {
        const auto& ca = a.cavities[j];
        const auto& cb = b.cavities[j];
        if (ca.kappa != cb.kappa || ca.omega_m != cb.omega_m ||
            ca.gamma_m != cb.gamma_m || ca.g_m_bare != cb.g_m_bare ||
            ca.G_m != cb.G_m)
            return false;
    }
    if (a.hopping != b.hopping || a.eps_c != b.eps_c || a.eps_p != b.eps_p)
        return false;
    if (a.atom.has_value() != b.atom.has_value()) return false;
    if (a.atom) {
        const auto& x = *a.atom;
        const auto& y = *b.atom;
        if (x.cavity_index != y.cavity_index || x.g != y.g ||
            x.Omega != y.Omega || x.Delta_e != y.Delta_e ||
            x.Delta_r != y.Delta_r || x.V != y.V ||
            x.gamma_ge != y.gamma_ge || x.gamma_gr != y.gamma_gr ||
            x.gamma_er != y.gamma_er || x.pop_gg != y.pop_gg ||
            x.pop_ee != y.pop_ee || x.pop_rr != y.pop_rr ||
            x.coh_gr != y.coh_gr || x.coh_er != y.coh_er ||
            x.coh_ge != y.coh_ge || x.G_e != y.G_e)
            return false;
    }
    return true;
}

}  // namespace omitsim
