#include "omitsim/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace omitsim::io {

namespace {

using nlohmann::json;

double require_number(const json& obj, const char* key, const char* ctx) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw ConfigError(std::string(ctx) + "." + key, "missing or not a number");
    return obj[key].get<double>();
}

cplx optional_complex(const json& obj, const char* key) {
    if (!obj.contains(key)) return {};
    const auto& v = obj[key];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(key, "expected [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
}

// Minimal deterministic JSON writer; nlohmann's number formatting is
// shortest-roundtrip, ours is pinned to 17 significant digits everywhere.
class Writer {
  public:
    Writer& raw(const std::string& s) { out_ += s; pending_comma_ = true; return *this; }
    Writer& key(const std::string& k) {
        comma();
        out_ += '"'; out_ += k; out_ += "\":";
        pending_comma_ = false;
        return *this;
    }
    Writer& begin_obj() { comma(); out_ += '{'; pending_comma_ = false; return *this; }
    Writer& end_obj() { out_ += '}'; pending_comma_ = true; return *this; }
    Writer& begin_arr() { comma(); out_ += '['; pending_comma_ = false; return *this; }
    Writer& end_arr() { out_ += ']'; pending_comma_ = true; return *this; }
    Writer& number(double v) { comma(); out_ += format_number(v); pending_comma_ = true; return *this; }
    Writer& integer(long long v) { comma(); out_ += std::to_string(v); pending_comma_ = true; return *this; }
    Writer& string(const std::string& s) {
        comma();
        out_ += '"';
        for (char c : s) {
            if (c == '"' || c == '\\') { out_ += '\\'; out_ += c; }
            else if (c == '\n') out_ += "\\n";
            else out_ += c;
        }
        out_ += '"';
        pending_comma_ = true;
        return *this;
    }
    Writer& complex(cplx v) {
        begin_arr(); number(v.real()); number(v.imag()); return end_arr();
    }
    std::string take() { return std::move(out_); }

  private:
    void comma() { if (pending_comma_) out_ += ','; pending_comma_ = false; }
    std::string out_;
    bool pending_comma_ = false;
};


}  // namespace

std::string format_number(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, ptr);
}

ChainModel parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<config>", std::string("JSON parse error: ") + e.what());
    }

    if (root.contains("units") && root["units"] != "g_m")
        throw ConfigError("units", "only \"g_m\" units are supported");
    if (!root.contains("cavities") || !root["cavities"].is_array())
        throw ConfigError("cavities", "missing array");

    ChainModel m;
    int idx = 0;
    for (const auto& c : root["cavities"]) {
        const std::string ctx = "cavities[" + std::to_string(idx++) + "]";
        CavityParams p;
        p.kappa = require_number(c, "kappa", ctx.c_str());
        p.omega_m = require_number(c, "omega_m", ctx.c_str());
        p.gamma_m = require_number(c, "gamma_m", ctx.c_str());
        p.g_m_bare = c.contains("g_m") ? require_number(c, "g_m", ctx.c_str()) : 1.0;
        p.G_m = require_number(c, "G_m", ctx.c_str());
        m.cavities.push_back(p);
    }
    if (root.contains("hopping"))
        for (const auto& g : root["hopping"]) {
            if (!g.is_number()) throw ConfigError("hopping", "not a number");
            m.hopping.push_back(g.get<double>());
        }
    if (root.contains("drive")) {
        m.eps_c = require_number(root["drive"], "eps_c", "drive");
        m.eps_p = require_number(root["drive"], "eps_p", "drive");
    }
    if (root.contains("atom") && !root["atom"].is_null()) {
        const auto& a = root["atom"];
        AtomParams p;
        if (!a.contains("cavity") || !a["cavity"].is_number_integer())
            throw ConfigError("atom.cavity", "missing integer");
        p.cavity_index = a["cavity"].get<int>();
        p.g = require_number(a, "g", "atom");
        p.Omega = require_number(a, "Omega", "atom");
        p.Delta_e = require_number(a, "Delta_e", "atom");
        p.Delta_r = require_number(a, "Delta_r", "atom");
        p.V = require_number(a, "V", "atom");
        p.gamma_ge = require_number(a, "gamma_ge", "atom");
        p.gamma_gr = require_number(a, "gamma_gr", "atom");
        p.gamma_er = require_number(a, "gamma_er", "atom");
        p.pop_gg = a.contains("pop_gg") ? require_number(a, "pop_gg", "atom") : 1.0;
        p.pop_ee = a.contains("pop_ee") ? require_number(a, "pop_ee", "atom") : 0.0;
        p.pop_rr = a.contains("pop_rr") ? require_number(a, "pop_rr", "atom") : 0.0;
        p.coh_gr = optional_complex(a, "coh_gr");
        p.coh_er = optional_complex(a, "coh_er");
        p.coh_ge = optional_complex(a, "coh_ge");
        p.G_e = require_number(a, "G_e", "atom");
        m.atom = p;
    }
    return m;
}

ChainModel load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("<config>", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ChainModel& m) {
    Writer w;
    w.begin_obj();
    w.key("units").string("g_m");
    w.key("cavities").begin_arr();
    for (const auto& c : m.cavities) {
        w.begin_obj();
        w.key("kappa").number(c.kappa);
        w.key("omega_m").number(c.omega_m);
        w.key("gamma_m").number(c.gamma_m);
        w.key("g_m").number(c.g_m_bare);
        w.key("G_m").number(c.G_m);
        w.end_obj();
    }
    w.end_arr();
    w.key("hopping").begin_arr();
    for (double g : m.hopping) w.number(g);
    w.end_arr();
    w.key("drive").begin_obj();
    w.key("eps_c").number(m.eps_c);
    w.key("eps_p").number(m.eps_p);
    w.end_obj();
    if (m.atom) {
        const auto& a = *m.atom;
        w.key("atom").begin_obj();
        w.key("cavity").integer(a.cavity_index);
        w.key("g").number(a.g);
        w.key("Omega").number(a.Omega);
        w.key("Delta_e").number(a.Delta_e);
        w.key("Delta_r").number(a.Delta_r);
        w.key("V").number(a.V);
        w.key("gamma_ge").number(a.gamma_ge);
        w.key("gamma_gr").number(a.gamma_gr);
        w.key("gamma_er").number(a.gamma_er);
        w.key("pop_gg").number(a.pop_gg);
        w.key("pop_ee").number(a.pop_ee);
        w.key("pop_rr").number(a.pop_rr);
        if (a.coh_gr != cplx{}) w.key("coh_gr").complex(a.coh_gr);
        if (a.coh_er != cplx{}) w.key("coh_er").complex(a.coh_er);
        if (a.coh_ge != cplx{}) w.key("coh_ge").complex(a.coh_ge);
        w.key("G_e").number(a.G_e);
        w.end_obj();
    }
    w.end_obj();
    return w.take();
}

std::string spectrum_csv(const Spectrum& s) {
    std::string out = "x";
    const bool has_cf = s.method != Method::Direct;
    const bool has_direct = s.method != Method::Cf;
    if (has_cf) out += ",re_cf,im_cf";
    if (has_direct) out += ",re_direct,im_direct";
    out += '\n';
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
        out += format_number(s.grid[k]);
        if (has_cf) {
            out += ',';
            out += format_number(s.cf[k].real());
            out += ',';
            out += format_number(s.cf[k].imag());
        }
        if (has_direct) {
            out += ',';
            out += format_number(s.direct[k].real());
            out += ',';
            out += format_number(s.direct[k].imag());
        }
        out += '\n';
    }
    return out;
}

std::string windows_json(const WindowReport& report) {
    Writer w;
    w.begin_obj();
    w.key("count").integer(static_cast<long long>(report.dips.size()));
    w.key("dips").begin_arr();
    for (const Dip& d : report.dips) {
        w.begin_obj();
        w.key("x0").number(d.x0);
        w.key("depth").number(d.depth);
        w.key("prominence").number(d.prominence);
        w.key("width").number(d.width);
        w.end_obj();
    }
    w.end_arr();
    w.end_obj();
    w.raw("\n");
    return w.take();
}

std::string track_json(const ResonanceTrack& track) {
    Writer w;
    w.begin_obj();
    w.key("baseline_dips").begin_arr();
    for (const Dip& d : track.baseline) w.number(d.x0);
    w.end_arr();
    w.key("entries").begin_arr();
    for (const TrackEntry& e : track.entries) {
        w.begin_obj();
        w.key("v").number(e.v);
        w.key("dips").begin_arr();
        for (const Dip& d : e.dips) w.number(d.x0);
        w.end_arr();
        w.key("extra").begin_arr();
        for (const ExtraDip& x : e.extras) {
            w.begin_obj();
            w.key("x0").number(x.x0);
            w.key("side").string(x.right ? "right" : "left");
            w.end_obj();
        }
        w.end_arr();
        if (e.left) w.key("left").number(*e.left);
        if (e.right) w.key("right").number(*e.right);
        w.end_obj();
    }
    w.end_arr();
    w.end_obj();
    w.raw("\n");
    return w.take();
}

std::string fano_json(const FanoFit& fit) {
    Writer w;
    w.begin_obj();
    w.key("x0").number(fit.x0);
    w.key("gamma_w").number(fit.gamma_w);
    w.key("q").number(fit.q);
    w.key("amplitude").number(fit.amplitude);
    w.key("offset").number(fit.offset);
    w.key("rms_residual").number(fit.rms_residual);
    w.key("iterations").integer(fit.iterations);
    w.end_obj();
    w.raw("\n");
    return w.take();
}

std::string steady_json(const SteadyState& s) {
    Writer w;
    w.begin_obj();
    w.key("c_bar").begin_arr();
    for (cplx c : s.c_bar) w.complex(c);
    w.end_arr();
    w.key("lambda_bar").begin_arr();
    for (double l : s.lambda_bar) w.number(l);
    w.end_arr();
    w.key("delta_tilde").begin_arr();
    for (double d : s.delta_tilde) w.number(d);
    w.end_arr();
    w.key("residual").number(s.residual);
    w.key("iterations").integer(s.iterations);
    w.end_obj();
    w.raw("\n");
    return w.take();
}

std::string comparison_json(const MethodComparison& cmp) {
    Writer w;
    w.begin_obj();
    w.key("max_rel_dev").number(cmp.max_rel_dev);
    w.key("variant").string(cmp.primary == AtomTermVariant::None ? "none" : "reduced");
    if (cmp.has_full) w.key("max_rel_dev_full_eq14").number(cmp.max_rel_dev_full);
    w.end_obj();
    w.raw("\n");
    return w.take();
}

std::string manifest_json(const RunManifest& m) {
    Writer w;
    w.begin_obj();
    w.key("command").string(m.command);
    w.key("argv").begin_arr();
    for (const auto& a : m.argv) w.string(a);
    w.end_arr();
    w.key("version").string(m.version);
    w.key("config").raw(m.config_json.empty() ? "null" : m.config_json);
    if (m.seed >= 0) w.key("seed").integer(m.seed);
    w.key("outputs").begin_arr();
    for (const auto& p : m.output_paths) w.string(p);
    w.end_arr();
    w.end_obj();
    w.raw("\n");
    return w.take();
}

void write_file(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << contents;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw Error("rename failed for " + path + ": " + ec.message());
}

}  // namespace omitsim::io
