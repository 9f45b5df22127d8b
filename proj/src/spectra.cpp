#include "omitsim/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "omitsim/sideband_direct.hpp"

namespace omitsim {

namespace {

double grid_scale(const ChainModel& model, GridUnit unit) {
    return unit == GridUnit::KappaN ? model.kappa_n() : 1.0;
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol) {
    static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Nearest local maximum walking away from index k; boundary counts as one.
double adjacent_max(const std::vector<double>& v, int k, int step) {
    const int n = static_cast<int>(v.size());
    double best = v[k];
    int j = k + step;
    while (j >= 0 && j < n) {
        best = std::max(best, v[j]);
        const bool interior = j > 0 && j < n - 1;
        if (interior && v[j] >= v[j - 1] && v[j] >= v[j + 1]) break;
        j += step;
    }
    return best;
}

// Linear-interpolated crossing of `level` scanning from the dip outward.
double half_level_crossing(const std::vector<double>& grid,
                           const std::vector<double>& re, int k, int step,
                           double level) {
    const int n = static_cast<int>(re.size());
    int j = k;
    while (j + step >= 0 && j + step < n) {
        const int next = j + step;
        if (re[next] >= level) {
            const double t = (level - re[j]) / (re[next] - re[j]);
            return grid[j] + t * (grid[next] - grid[j]);
        }
        j = next;
    }
    return grid[j];  // ran off the grid; clamp
}

}  // namespace

std::function<double(double)> re_evaluator(const ChainModel& model,
                                           Method method,
                                           AtomTermVariant variant,
                                           GridUnit unit) {
    const double scale = grid_scale(model, unit);
    const double omega_ref = model.omega_ref();
    if (method == Method::Direct)
        return [=](double u) {
            return eps_t_direct(model, omega_ref + u * scale).chi_p();
        };
    return [=](double u) {
        return eps_t_cf(model, omega_ref + u * scale, variant).chi_p();
    };
}

Spectrum sweep(const ChainModel& model, const GridSpec& grid, Method method,
               AtomTermVariant variant) {
    if (grid.n_points < 2)
        throw PreconditionViolated("sweep requires n_points >= 2");
    if (!(grid.x_min < grid.x_max))
        throw PreconditionViolated("sweep requires x_min < x_max");

    Spectrum s;
    s.unit = grid.unit;
    s.method = method;
    s.variant = variant;
    s.grid.resize(grid.n_points);
    const double dx = (grid.x_max - grid.x_min) / (grid.n_points - 1);
    for (int k = 0; k < grid.n_points; ++k) s.grid[k] = grid.x_min + k * dx;
    s.grid.back() = grid.x_max;
    if (grid.x_min == -grid.x_max) {
        // symmetric grids mirror exactly so eps_T(-x) pairs are grid-exact
        for (int k = 0; k < grid.n_points / 2; ++k)
            s.grid[grid.n_points - 1 - k] = -s.grid[k];
        if (grid.n_points % 2 == 1) s.grid[grid.n_points / 2] = 0.0;
    }

    const double scale = grid_scale(model, grid.unit);
    const double omega_ref = model.omega_ref();
    const bool want_cf = method != Method::Direct;
    const bool want_direct = method != Method::Cf;
    if (want_cf) s.cf.resize(s.grid.size());
    if (want_direct) s.direct.resize(s.grid.size());

    for (std::size_t k = 0; k < s.grid.size(); ++k) {
        const double delta = omega_ref + s.grid[k] * scale;
        try {
            if (want_cf) s.cf[k] = eps_t_cf(model, delta, variant).eps_t;
            if (want_direct) s.direct[k] = eps_t_direct(model, delta).eps_t;
        } catch (const NumericalError& e) {
            throw NumericalError("at grid x = " + std::to_string(s.grid[k]) +
                                 ": " + e.what());
        }
    }
    return s;
}

WindowReport find_windows(const Spectrum& spectrum,
                          const std::function<double(double)>& re_eval,
                          const DipRule& rule) {
    const auto& grid = spectrum.grid;
    const auto& vals = spectrum.values();
    if (grid.size() < 3) return {};

    std::vector<double> re(vals.size());
    for (std::size_t k = 0; k < vals.size(); ++k) re[k] = vals[k].real();

    WindowReport report;
    const int n = static_cast<int>(re.size());
    for (int k = 1; k + 1 < n; ++k) {
        if (!(re[k] < re[k - 1] && re[k] <= re[k + 1])) continue;
        const double left_max = adjacent_max(re, k, -1);
        const double right_max = adjacent_max(re, k, +1);
        const double prominence = std::min(left_max, right_max) - re[k];
        if (!(re[k] <= rule.depth_max && prominence >= rule.prominence_min))
            continue;

        Dip dip;
        dip.x0 = golden_min(re_eval, grid[k - 1], grid[k + 1], 1e-4);
        dip.depth = re_eval(dip.x0);
        dip.prominence = prominence;
        const double level = re[k] + 0.5 * prominence;
        dip.width = half_level_crossing(grid, re, k, +1, level) -
                    half_level_crossing(grid, re, k, -1, level);
        report.dips.push_back(dip);
    }
    std::sort(report.dips.begin(), report.dips.end(),
              [](const Dip& a, const Dip& b) { return a.x0 < b.x0; });
    return report;
}

WindowReport find_windows(const ChainModel& model, const Spectrum& spectrum,
                          const DipRule& rule) {
    return find_windows(
        spectrum,
        re_evaluator(model, spectrum.method, spectrum.variant, spectrum.unit),
        rule);
}

ResonanceTrack track_resonances(const ChainModel& model_with_atom,
                                std::span<const double> v_values,
                                const ChainModel& baseline,
                                const GridSpec& grid,
                                AtomTermVariant variant) {
    if (v_values.empty())
        throw PreconditionViolated("track_resonances requires at least one V");
    if (!model_with_atom.atom)
        throw PreconditionViolated("track_resonances requires an atom model");
    if (baseline.atom)
        throw PreconditionViolated("baseline must be atom-free");
    ChainModel stripped = model_with_atom;
    stripped.atom.reset();
    if (!structurally_equal(stripped, baseline))
        throw PreconditionViolated(
            "baseline must differ from the model only by atom presence");

    ResonanceTrack track;
    track.baseline =
        find_windows(baseline, sweep(baseline, grid, Method::Cf, variant)).dips;

    // Match radius 0.05*kappa_N, converted to grid units.
    const double radius =
        0.05 * model_with_atom.kappa_n() / grid_scale(model_with_atom, grid.unit);

    for (double v : v_values) {
        ChainModel m = model_with_atom;
        m.atom->V = v;

        TrackEntry entry;
        entry.v = v;
        entry.dips = find_windows(m, sweep(m, grid, Method::Cf, variant)).dips;
        for (const Dip& d : entry.dips) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const Dip& b : track.baseline)
                nearest = std::min(nearest, std::abs(d.x0 - b.x0));
            if (nearest > radius)
                entry.extras.push_back({d.x0, d.x0 >= 0.0});
        }
        int n_left = 0, n_right = 0;
        for (const ExtraDip& e : entry.extras) (e.right ? n_right : n_left)++;
        for (const ExtraDip& e : entry.extras) {
            if (!e.right && n_left == 1) entry.left = e.x0;
            if (e.right && n_right == 1) entry.right = e.x0;
        }
        track.entries.push_back(std::move(entry));
    }
    return track;
}

double fano_profile(double x, const FanoFit& p) {
    const double t = x - p.x0;
    const double hw = 0.5 * p.gamma_w;
    return p.amplitude * (p.q * hw + t) * (p.q * hw + t) / (hw * hw + t * t) +
           p.offset;
}

namespace {

using Params = std::array<double, 5>;  // x0, gamma_w, q, amplitude, offset

double fano_eval(double x, const Params& p) {
    const double t = x - p[0];
    const double hw = 0.5 * p[1];
    return p[3] * (p[2] * hw + t) * (p[2] * hw + t) / (hw * hw + t * t) + p[4];
}

double cost_of(std::span<const double> xs, std::span<const double> ys,
               const Params& p, std::vector<double>& res) {
    double c = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        res[i] = fano_eval(xs[i], p) - ys[i];
        c += res[i] * res[i];
    }
    return c;
}

// 5x5 normal-equation solve with simple partial pivoting.
bool solve_normal(std::array<double, 25> a, Params& b) {
    constexpr int n = 5;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
        if (std::abs(a[piv * n + k]) < 1e-300) return false;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = a[i * n + k] / a[k * n + k];
            for (int j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
            b[i] -= f * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) b[i] -= a[i * n + j] * b[j];
        b[i] /= a[i * n + i];
    }
    return true;
}

}  // namespace

FanoFit fano_fit(std::span<const double> xs, std::span<const double> ys,
                 const FanoFit& initial_guess) {
    constexpr int kMaxIterations = 200;
    constexpr double kParamTol = 1e-10;

    if (xs.size() != ys.size() || xs.size() < 8)
        throw PreconditionViolated("fano_fit requires >= 8 points");
    const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
    if (*hi - *lo < 1e-14 * std::max(1.0, std::abs(*hi)))
        throw DegenerateSlice("slice is constant");

    const std::size_t n = xs.size();
    Params p{initial_guess.x0, initial_guess.gamma_w, initial_guess.q,
             initial_guess.amplitude, initial_guess.offset};
    std::vector<double> res(n), res_try(n);
    std::vector<std::array<double, 5>> jac(n);
    double cost = cost_of(xs, ys, p, res);
    double lambda = 1e-3;
    double rel_change = std::numeric_limits<double>::infinity();
    int iter = 0;

    for (; iter < kMaxIterations; ++iter) {
        // Central-difference sensitivities.
        for (int j = 0; j < 5; ++j) {
            const double h = std::max(1e-7 * std::abs(p[j]), 1e-9);
            Params pp = p, pm = p;
            pp[j] += h;
            pm[j] -= h;
            for (std::size_t i = 0; i < n; ++i)
                jac[i][j] = (fano_eval(xs[i], pp) - fano_eval(xs[i], pm)) / (2.0 * h);
        }
        std::array<double, 25> jtj{};
        Params jtr{};
        for (std::size_t i = 0; i < n; ++i)
            for (int a = 0; a < 5; ++a) {
                jtr[a] += jac[i][a] * res[i];
                for (int b = a; b < 5; ++b) jtj[a * 5 + b] += jac[i][a] * jac[i][b];
            }
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < a; ++b) jtj[a * 5 + b] = jtj[b * 5 + a];

        bool accepted = false;
        while (lambda < 1e14) {
            std::array<double, 25> damped = jtj;
            for (int a = 0; a < 5; ++a)
                damped[a * 5 + a] += lambda * std::max(jtj[a * 5 + a], 1e-30);
            Params step;
            for (int a = 0; a < 5; ++a) step[a] = -jtr[a];
            if (!solve_normal(damped, step)) { lambda *= 4.0; continue; }

            Params p_try;
            for (int a = 0; a < 5; ++a) p_try[a] = p[a] + step[a];
            const double cost_try = cost_of(xs, ys, p_try, res_try);
            if (cost_try < cost) {
                rel_change = 0.0;
                for (int a = 0; a < 5; ++a)
                    rel_change = std::max(
                        rel_change, std::abs(step[a]) / std::max(std::abs(p[a]), 1.0));
                p = p_try;
                cost = cost_try;
                std::swap(res, res_try);
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!accepted) { rel_change = 0.0; break; }  // stationary point
        if (rel_change < kParamTol) break;
    }
    // Convergence rule: relative parameter change < 1e-10 or the iteration
    // cap; either way the best parameters are returned. A non-finite cost
    // means the fit left the representable range.
    if (!std::isfinite(cost))
        throw FitNonConvergence(iter, std::sqrt(std::abs(cost) / static_cast<double>(n)));

    FanoFit fit;
    fit.x0 = p[0];
    fit.gamma_w = p[1];
    fit.q = p[2];
    fit.amplitude = p[3];
    fit.offset = p[4];
    if (fit.gamma_w < 0.0) {  // (gamma, q) -> (-gamma, -q) leaves the form invariant
        fit.gamma_w = -fit.gamma_w;
        fit.q = -fit.q;
    }
    fit.rms_residual = std::sqrt(cost / static_cast<double>(n));
    fit.iterations = iter;
    return fit;
}

MethodComparison compare_methods(const ChainModel& model, const GridSpec& grid) {
    MethodComparison cmp;
    cmp.primary = model.atom ? AtomTermVariant::Reduced : AtomTermVariant::None;

    Spectrum s = sweep(model, grid, Method::Both, cmp.primary);
    cmp.grid = s.grid;
    cmp.rel_dev.resize(s.grid.size());
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
        cmp.rel_dev[k] = std::abs(s.cf[k] - s.direct[k]) /
                         std::max(std::abs(s.direct[k]), 1e-30);
        cmp.max_rel_dev = std::max(cmp.max_rel_dev, cmp.rel_dev[k]);
    }

    if (model.atom) {
        cmp.has_full = true;
        Spectrum f = sweep(model, grid, Method::Cf, AtomTermVariant::FullEq14);
        cmp.rel_dev_full.resize(s.grid.size());
        for (std::size_t k = 0; k < s.grid.size(); ++k) {
            cmp.rel_dev_full[k] = std::abs(f.cf[k] - s.direct[k]) /
                                  std::max(std::abs(s.direct[k]), 1e-30);
            cmp.max_rel_dev_full = std::max(cmp.max_rel_dev_full, cmp.rel_dev_full[k]);
        }
    }
    return cmp;
}

}  // namespace omitsim
