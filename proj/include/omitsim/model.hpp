#pragma once

#include <optional>
#include <string>
#include <vector>

#include "omitsim/types.hpp"

namespace omitsim {

// All rates and frequencies are dimensionless, in units of the bare
// optomechanical coupling g_m (1 kHz in the source system). No SI anywhere.

struct CavityParams {
    double kappa = 0.0;     // cavity decay rate
    double omega_m = 0.0;   // mechanical frequency
    double gamma_m = 0.0;   // mechanical damping
    double g_m_bare = 1.0;  // bare optomechanical coupling (the unit)
    double G_m = 0.0;       // effective optomechanical coupling; 0 = no oscillator
};

/// The driven three-level ladder atom (|g>,|e>,|r>) plus the DDI shift S=V
/// contributed by its permanently excited partner.
struct AtomParams {
    int cavity_index = 1;  // 1-based cavity the pair sits in
    double g = 0.0;        // atom-cavity coupling
    double Omega = 0.0;    // control Rabi frequency on |e><->|r>
    double Delta_e = 0.0;
    double Delta_r = 0.0;
    double V = 0.0;        // DDI strength, S = V(R)
    double gamma_ge = 0.0;
    double gamma_gr = 0.0;
    double gamma_er = 0.0;
    double pop_gg = 1.0;   // steady populations
    double pop_ee = 0.0;
    double pop_rr = 0.0;
    cplx coh_gr{};         // steady coherences entering the sideband rows
    cplx coh_er{};
    cplx coh_ge{};         // constant ge coherence used by the steady solver
    double G_e = 0.0;      // effective atom-cavity coupling g*|c_bar_i|
};

struct ChainModel {
    std::vector<CavityParams> cavities;  // size N >= 1
    std::vector<double> hopping;         // size N-1
    double eps_c = 0.0;                  // control amplitude
    double eps_p = 1.0;                  // probe amplitude
    std::optional<AtomParams> atom;

    int n_cavities() const { return static_cast<int>(cavities.size()); }
    double kappa_n() const { return cavities.back().kappa; }
    /// Sideband center line: omega_m of the driven (Nth) cavity.
    double omega_ref() const { return cavities.back().omega_m; }
};

/// Per-cavity sideband detunings x_j = Delta - omega_mj plus the atomic
/// two-photon detunings for a given probe-control detuning Delta.
struct DetuningSet {
    double delta = 0.0;
    std::vector<double> x;  // x_j per cavity
    bool has_atom = false;
    double x_gr = 0.0;  // Delta - Delta_r - Delta_e - S
    double x_er = 0.0;  // Delta - Delta_r - S

    /// x at the atom's cavity (the unsubscripted x of the sigma_ge row).
    double x_at(int cavity_index_1based) const {
        return x.at(static_cast<std::size_t>(cavity_index_1based) - 1);
    }
};

struct Validated {
    ChainModel model;
    std::vector<std::string> warnings;  // advisory only, never rejecting
};

/// Checks every hard invariant and throws ConfigError listing all violations.
/// Advisory regime checks (resolved sideband, weak dissipation) come back as
/// warnings on the validated result.
Validated validate(const ChainModel& raw);

DetuningSet detunings(const ChainModel& model, double delta);

/// Compiled-in parameter sets for the reference spectra. Names:
/// fig2a..fig2d, fig4a..fig4d (no atom), fig5..fig8 (atom; V selectable).
ChainModel preset(const std::string& name, double v = 0.0);

const std::vector<std::string>& preset_names();

/// Structural equality (exact field comparison).
bool structurally_equal(const ChainModel& a, const ChainModel& b);

}  // namespace omitsim
