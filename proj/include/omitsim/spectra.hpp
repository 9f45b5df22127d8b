#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omitsim/closed_form.hpp"
#include "omitsim/model.hpp"

namespace omitsim {

enum class Method { Cf, Direct, Both };
enum class GridUnit { KappaN, GM };  // grid values in units of kappa_N or g_m

struct GridSpec {
    double x_min = -3.0;
    double x_max = 3.0;
    int n_points = 4001;
    GridUnit unit = GridUnit::KappaN;
};

struct Spectrum {
    std::vector<double> grid;  // strictly ascending
    GridUnit unit = GridUnit::KappaN;
    Method method = Method::Cf;
    AtomTermVariant variant = AtomTermVariant::Reduced;
    std::vector<cplx> cf;      // filled unless method == Direct
    std::vector<cplx> direct;  // filled unless method == Cf

    const std::vector<cplx>& values() const {
        return method == Method::Direct ? direct : cf;
    }
};

struct Dip {
    double x0 = 0.0;         // refined position, grid units
    double depth = 0.0;      // Re(eps_T) at the dip
    double prominence = 0.0; // lower adjacent maximum minus depth
    double width = 0.0;      // full width at half prominence
};

struct WindowReport {
    std::vector<Dip> dips;  // sorted by x0
};

/// Dip acceptance rule: depth <= depth_max AND prominence >= prominence_min.
struct DipRule {
    double depth_max = 0.5;
    double prominence_min = 0.05;
};

struct ExtraDip {
    double x0 = 0.0;
    bool right = false;  // relative to the central feature (x = 0)
};

struct TrackEntry {
    double v = 0.0;
    std::vector<Dip> dips;          // all detected dips at this V
    std::vector<ExtraDip> extras;   // dips unmatched to the baseline
    std::optional<double> left;     // extra position when exactly one per side
    std::optional<double> right;
};

struct ResonanceTrack {
    std::vector<Dip> baseline;
    std::vector<TrackEntry> entries;
};

struct MethodComparison {
    std::vector<double> grid;
    std::vector<double> rel_dev;       // cf(primary variant) vs direct
    double max_rel_dev = 0.0;
    AtomTermVariant primary = AtomTermVariant::None;
    std::vector<double> rel_dev_full;  // cf(FullEq14) vs direct; reported only
    double max_rel_dev_full = 0.0;
    bool has_full = false;
};

/// Re(eps_T) as a function of the grid coordinate, for dip refinement.
std::function<double(double)> re_evaluator(const ChainModel& model,
                                           Method method,
                                           AtomTermVariant variant,
                                           GridUnit unit);

/// Uniform-grid sweep of eps_T. Grid points are mapped to the probe-control
/// detuning via Delta = omega_ref + x*scale(unit). Numerical failures are
/// rethrown annotated with the offending grid value.
Spectrum sweep(const ChainModel& model, const GridSpec& grid, Method method,
               AtomTermVariant variant = AtomTermVariant::Reduced);

/// Interior local minima of Re(eps_T) passing the dip rule, refined by
/// golden-section minimization of re_eval to |dx| <= 1e-4 grid units.
WindowReport find_windows(const Spectrum& spectrum,
                          const std::function<double(double)>& re_eval,
                          const DipRule& rule = {});

/// Convenience overload wiring the refinement evaluator from the model.
WindowReport find_windows(const ChainModel& model, const Spectrum& spectrum,
                          const DipRule& rule = {});

/// DDI sweep: for each V, dips farther than 0.05*kappa_N from every baseline
/// dip are classified extra and labelled left/right of the central feature.
ResonanceTrack track_resonances(const ChainModel& model_with_atom,
                                std::span<const double> v_values,
                                const ChainModel& baseline,
                                const GridSpec& grid,
                                AtomTermVariant variant = AtomTermVariant::Reduced);

struct FanoFit {
    double x0 = 0.0;
    double gamma_w = 0.0;  // width; normalized positive
    double q = 0.0;        // asymmetry
    double amplitude = 0.0;
    double offset = 0.0;
    double rms_residual = 0.0;
    int iterations = 0;
};

/// A*(q*G/2 + (x-x0))^2 / ((G/2)^2 + (x-x0)^2) + B
double fano_profile(double x, const FanoFit& p);

/// Damped least-squares fit of the Fano form with numerically differenced
/// sensitivities. Steps that raise the residual are rejected with increased
/// damping. Converges on relative parameter change < 1e-10; throws
/// FitNonConvergence after 200 iterations of sustained movement.
FanoFit fano_fit(std::span<const double> xs, std::span<const double> ys,
                 const FanoFit& initial_guess);

/// Per-point relative deviation between the closed form and the direct solve.
MethodComparison compare_methods(const ChainModel& model, const GridSpec& grid);

}  // namespace omitsim
