#pragma once

#include <string>
#include <vector>

#include "omitsim/model.hpp"
#include "omitsim/spectra.hpp"
#include "omitsim/steady_state.hpp"

namespace omitsim::io {

/// One number -> text policy for every output: 17 significant digits,
/// locale-independent.
std::string format_number(double v);

ChainModel parse_config(const std::string& json_text);
ChainModel load_config(const std::string& path);

/// Canonical JSON form of a model (fixed key order, format_number numbers).
std::string serialize_config(const ChainModel& model);

std::string spectrum_csv(const Spectrum& spectrum);
std::string windows_json(const WindowReport& report);
std::string track_json(const ResonanceTrack& track);
std::string fano_json(const FanoFit& fit);
std::string steady_json(const SteadyState& steady);
std::string comparison_json(const MethodComparison& cmp);

struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    std::string version;
    std::string config_json;  // resolved, post-validation, preset-expanded
    long long seed = -1;      // -1 = no RNG involved
    std::vector<std::string> output_paths;
};

std::string manifest_json(const RunManifest& manifest);

/// Atomic write: temp file in the target directory, then rename.
void write_file(const std::string& path, const std::string& contents);

}  // namespace omitsim::io
