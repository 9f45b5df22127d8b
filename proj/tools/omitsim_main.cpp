// omitsim command-line front end: spectrum sweeps, transparency-window
// reports, DDI resonance tracking, Fano fits, steady states and the
// cross-verification harness.
//
// Exit codes: 0 success, 1 configuration/usage error, 2 numerical failure,
// 3 verification failure.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omitsim/closed_form.hpp"
#include "omitsim/io.hpp"
#include "omitsim/model.hpp"
#include "omitsim/sideband_direct.hpp"
#include "omitsim/spectra.hpp"
#include "omitsim/steady_state.hpp"
#include "omitsim/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace omitsim;

struct ModelArgs {
    std::string config_path;
    std::string preset_name;
    double v = 0.0;
    bool v_given = false;
};

void add_model_flags(CLI::App* cmd, ModelArgs& args) {
    auto* cfg = cmd->add_option("--config", args.config_path, "JSON model file");
    auto* pre = cmd->add_option("--preset", args.preset_name,
                                "named parameter set (fig2a..fig8)");
    cmd->add_option("--v", args.v, "DDI strength for atom presets")
        ->each([&args](const std::string&) { args.v_given = true; });
    cfg->excludes(pre);
}

ChainModel resolve_model(const ModelArgs& args) {
    ChainModel raw;
    if (!args.preset_name.empty()) {
        raw = preset(args.preset_name, args.v);
    } else if (!args.config_path.empty()) {
        raw = io::load_config(args.config_path);
        if (args.v_given && raw.atom) raw.atom->V = args.v;
    } else {
        throw ConfigError("model", "either --config or --preset is required");
    }
    Validated validated = validate(raw);
    for (const auto& w : validated.warnings) std::cerr << "warning: " << w << '\n';
    return validated.model;
}

AtomTermVariant parse_variant(const std::string& name) {
    if (name == "full") return AtomTermVariant::FullEq14;
    if (name == "reduced") return AtomTermVariant::Reduced;
    if (name == "none") return AtomTermVariant::None;
    throw ConfigError("--atom-variant", "expected full|reduced|none");
}

Method parse_method(const std::string& name) {
    if (name == "cf") return Method::Cf;
    if (name == "direct") return Method::Direct;
    if (name == "both") return Method::Both;
    throw ConfigError("--method", "expected cf|direct|both");
}

void emit(const std::string& text, const std::string& out_path,
          const io::RunManifest& manifest) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    io::write_file(out_path, text);
    io::RunManifest m = manifest;
    m.output_paths.push_back(out_path);
    io::write_file(out_path + ".manifest.json", io::manifest_json(m));
}

io::RunManifest make_manifest(const std::string& command,
                              const std::vector<std::string>& argv,
                              const ChainModel* model, long long seed = -1) {
    io::RunManifest m;
    m.command = command;
    m.argv = argv;
    m.version = kVersion;
    if (model) m.config_json = io::serialize_config(*model);
    m.seed = seed;
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-cavity OMIT spectrum simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::vector<std::string> raw_argv(argv, argv + argc);

    // spectrum
    auto* spectrum_cmd = app.add_subcommand("spectrum", "sweep eps_T over a detuning grid");
    ModelArgs spectrum_model;
    add_model_flags(spectrum_cmd, spectrum_model);
    GridSpec spectrum_grid;
    std::string spectrum_method = "cf", spectrum_variant = "reduced";
    std::string spectrum_out, spectrum_format = "csv";
    spectrum_cmd->add_option("--x-min", spectrum_grid.x_min, "grid start (units of kappa_N)");
    spectrum_cmd->add_option("--x-max", spectrum_grid.x_max, "grid end");
    spectrum_cmd->add_option("--points", spectrum_grid.n_points, "grid size");
    spectrum_cmd->add_option("--method", spectrum_method, "cf|direct|both");
    spectrum_cmd->add_option("--atom-variant", spectrum_variant, "full|reduced|none");
    spectrum_cmd->add_option("--out", spectrum_out, "output path (stdout if omitted)");
    spectrum_cmd->add_option("--format", spectrum_format, "csv|json (csv only for spectra)");

    // windows
    auto* windows_cmd = app.add_subcommand("windows", "detect transparency windows");
    ModelArgs windows_model;
    add_model_flags(windows_cmd, windows_model);
    GridSpec windows_grid;
    std::string windows_variant = "reduced", windows_out, windows_format = "json";
    windows_cmd->add_option("--x-min", windows_grid.x_min, "grid start");
    windows_cmd->add_option("--x-max", windows_grid.x_max, "grid end");
    windows_cmd->add_option("--points", windows_grid.n_points, "grid size");
    windows_cmd->add_option("--atom-variant", windows_variant, "full|reduced|none");
    windows_cmd->add_option("--out", windows_out, "output path");
    windows_cmd->add_option("--format", windows_format, "json");

    // sweep-ddi
    auto* ddi_cmd = app.add_subcommand("sweep-ddi", "track extra resonances across DDI values");
    ModelArgs ddi_model;
    add_model_flags(ddi_cmd, ddi_model);
    std::vector<double> v_list{0.0, 2.0, 4.0, 6.0, 10.0, 30.0};
    GridSpec ddi_grid{-5.0, 20.0, 4001, GridUnit::KappaN};
    std::string ddi_out;
    ddi_cmd->add_option("--v-list", v_list, "DDI strengths")->delimiter(',');
    ddi_cmd->add_option("--x-min", ddi_grid.x_min, "grid start");
    ddi_cmd->add_option("--x-max", ddi_grid.x_max, "grid end");
    ddi_cmd->add_option("--points", ddi_grid.n_points, "grid size");
    ddi_cmd->add_option("--out", ddi_out, "output path");

    // fano
    auto* fano_cmd = app.add_subcommand("fano", "fit a Fano lineshape around a resonance");
    ModelArgs fano_model;
    add_model_flags(fano_cmd, fano_model);
    double fano_center = 0.0, fano_half_span = 0.35;
    int fano_points = 141;
    std::string fano_variant = "reduced", fano_out;
    fano_cmd->add_option("--center", fano_center, "slice center (units of kappa_N)")->required();
    fano_cmd->add_option("--half-span", fano_half_span, "slice half width");
    fano_cmd->add_option("--points", fano_points, "slice size");
    fano_cmd->add_option("--atom-variant", fano_variant, "full|reduced|none");
    fano_cmd->add_option("--out", fano_out, "output path");

    // steady
    auto* steady_cmd = app.add_subcommand("steady", "solve the control-field steady state");
    ModelArgs steady_model;
    add_model_flags(steady_cmd, steady_model);
    std::string steady_out;
    steady_cmd->add_option("--out", steady_out, "output path");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "cross-check cf against the direct solve");
    int verify_trials = 200;
    std::uint64_t verify_seed = 7;
    double verify_tol = 1e-9;
    std::string verify_out;
    verify_cmd->add_option("--trials", verify_trials, "number of random models");
    verify_cmd->add_option("--seed", verify_seed, "RNG seed");
    verify_cmd->add_option("--tol", verify_tol, "max relative deviation");
    verify_cmd->add_option("--out", verify_out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::cerr << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {

        if (*spectrum_cmd) {
            if (spectrum_format != "csv")
                throw ConfigError("--format", "spectra are emitted as csv");
            const ChainModel model = resolve_model(spectrum_model);
            const Spectrum s = sweep(model, spectrum_grid,
                                     parse_method(spectrum_method),
                                     parse_variant(spectrum_variant));
            emit(io::spectrum_csv(s), spectrum_out,
                 make_manifest("spectrum", raw_argv, &model));
        } else if (*windows_cmd) {
            if (windows_format != "json")
                throw ConfigError("--format", "window reports are emitted as json");
            const ChainModel model = resolve_model(windows_model);
            const AtomTermVariant variant = parse_variant(windows_variant);
            const Spectrum s = sweep(model, windows_grid, Method::Cf, variant);
            const WindowReport report = find_windows(model, s);
            emit(io::windows_json(report), windows_out,
                 make_manifest("windows", raw_argv, &model));
        } else if (*ddi_cmd) {
            const ChainModel model = resolve_model(ddi_model);
            if (!model.atom)
                throw ConfigError("sweep-ddi", "model must contain an atom");
            ChainModel baseline = model;
            baseline.atom.reset();
            const ResonanceTrack track =
                track_resonances(model, v_list, baseline, ddi_grid);
            emit(io::track_json(track), ddi_out,
                 make_manifest("sweep-ddi", raw_argv, &model));
        } else if (*fano_cmd) {
            const ChainModel model = resolve_model(fano_model);
            const auto re_at = re_evaluator(model, Method::Cf,
                                            parse_variant(fano_variant),
                                            GridUnit::KappaN);
            std::vector<double> xs(fano_points), ys(fano_points);
            for (int k = 0; k < fano_points; ++k) {
                xs[k] = fano_center - fano_half_span +
                        2.0 * fano_half_span * k / (fano_points - 1);
                ys[k] = re_at(xs[k]);
            }
            FanoFit guess;
            guess.x0 = fano_center;
            guess.gamma_w = 0.1;
            guess.q = 0.0;
            const auto [min_it, max_it] = std::minmax_element(ys.begin(), ys.end());
            guess.amplitude = *max_it - *min_it;
            guess.offset = *min_it;
            const FanoFit fit = fano_fit(xs, ys, guess);
            emit(io::fano_json(fit), fano_out,
                 make_manifest("fano", raw_argv, &model));
        } else if (*steady_cmd) {
            const ChainModel model = resolve_model(steady_model);
            std::vector<double> delta_cavity;
            for (const auto& c : model.cavities) delta_cavity.push_back(c.omega_m);
            const SteadyState s = solve_steady(model, delta_cavity);
            emit(io::steady_json(s), steady_out,
                 make_manifest("steady", raw_argv, &model));
        } else if (*verify_cmd) {
            const VerifyReport report =
                run_verification(verify_trials, verify_seed, verify_tol);
            std::cout << report.summary << '\n';
            if (!verify_out.empty()) {
                std::string text = report.summary + "\n";
                io::write_file(verify_out, text);
                io::RunManifest m = make_manifest("verify", raw_argv, nullptr,
                                                  static_cast<long long>(verify_seed));
                m.output_paths.push_back(verify_out);
                io::write_file(verify_out + ".manifest.json", io::manifest_json(m));
            }
            return report.passed ? 0 : 3;
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const UnknownPreset& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const PreconditionViolated& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
