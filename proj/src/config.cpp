#include "cfsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cfsim {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

enum class Dimension { Frequency, Time, Angle, Plain };

struct RawValue {
    std::string text;
    int line = 0;
};

struct KeyTable {
    std::map<std::string, RawValue> kv;
    std::set<std::string> consumed;

    const RawValue* find(const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        consumed.insert(key);
        return &it->second;
    }
};

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
    throw ConfigError("config field '" + key + "': " + msg);
}

double parse_number(const std::string& key, const std::string& text) {
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        fail(key, "expected a number, got '" + text + "'");
    }
    if (trim(text.substr(pos)) != "") fail(key, "trailing text after number in '" + text + "'");
    return v;
}

// Dimensioned values require an explicit unit suffix; the number is converted
// to internal units (rad/ns, ns, rad).
double parse_dimensioned(const std::string& key, const std::string& text, Dimension dim) {
    std::istringstream ss(text);
    double v = 0;
    std::string unit;
    if (!(ss >> v)) fail(key, "expected '<number> <unit>', got '" + text + "'");
    ss >> unit;
    std::string rest;
    if (ss >> rest) fail(key, "unexpected trailing text '" + rest + "'");
    switch (dim) {
        case Dimension::Frequency:
            if (unit == "GHz") return units::ghz_to_radns(v);
            if (unit == "MHz") return units::mhz_to_radns(v);
            if (unit == "kHz") return units::mhz_to_radns(v * 1e-3);
            fail(key, unit.empty() ? "missing frequency unit (GHz|MHz|kHz)"
                                   : "unknown frequency unit '" + unit + "'");
        case Dimension::Time:
            if (unit == "ns") return v;
            if (unit == "us") return v * 1e3;
            fail(key, unit.empty() ? "missing time unit (ns|us)"
                                   : "unknown time unit '" + unit + "'");
        case Dimension::Angle:
            if (unit == "rad") return v;
            if (unit == "deg") return units::deg_to_rad(v);
            fail(key, unit.empty() ? "missing angle unit (rad|deg)"
                                   : "unknown angle unit '" + unit + "'");
        case Dimension::Plain:
            if (!unit.empty()) fail(key, "dimensionless field must not carry a unit");
            return v;
    }
    fail(key, "unreachable");
}

bool is_auto(const std::string& text) { return text == "auto"; }

Mode parse_mode(const std::string& key, const std::string& text) {
    if (text == "q1" || text == "1") return Mode::Q1;
    if (text == "q2" || text == "2") return Mode::Q2;
    if (text == "coupler" || text == "c") return Mode::Coupler;
    fail(key, "expected q1|q2|coupler, got '" + text + "'");
}

}  // namespace

const DeviceParams& RunConfig::require_device() const {
    if (!device) throw ConfigError("this command needs a [device.*] section");
    return *device;
}

const ToneConfig& RunConfig::tone(int index) const {
    if (index < 1 || static_cast<size_t>(index) > tones.size())
        throw ConfigError("this command needs tone" + std::to_string(index) +
                          ".* configuration");
    return tones[index - 1];
}

bool sweep_path_known(const std::string& path) {
    static const std::set<std::string> known = {
        "tone1.amplitude", "tone1.frequency", "tone2.amplitude", "tone2.frequency",
        "toy.drive1.amplitude", "toy.drive1.frequency",
        "toy.drive2.amplitude", "toy.drive2.frequency",
        "toy.ac.amplitude", "toy.ac.frequency"};
    return known.count(path) > 0;
}

void apply_sweep_value(RunConfig& config, const std::string& path, double value) {
    auto need_tone = [&](int i) -> ToneConfig& {
        if (static_cast<size_t>(i) > config.tones.size())
            throw ConfigError("sweep path '" + path + "' has no configured tone");
        return config.tones[i - 1];
    };
    if (path == "tone1.amplitude") need_tone(1).amplitude = value;
    else if (path == "tone1.frequency") need_tone(1).frequency = value;
    else if (path == "tone2.amplitude") need_tone(2).amplitude = value;
    else if (path == "tone2.frequency") need_tone(2).frequency = value;
    else if (path == "toy.drive1.amplitude") config.toy.params.drive1.amplitude = value;
    else if (path == "toy.drive1.frequency") config.toy.params.drive1.frequency = value;
    else if (path == "toy.drive2.amplitude") config.toy.params.drive2.amplitude = value;
    else if (path == "toy.drive2.frequency") config.toy.params.drive2.frequency = value;
    else if (path == "toy.ac.amplitude") { if (config.toy.params.ac) config.toy.params.ac->amplitude = value; else throw ConfigError("no AC tone configured"); }
    else if (path == "toy.ac.frequency") { if (config.toy.params.ac) config.toy.params.ac->frequency = value; else throw ConfigError("no AC tone configured"); }
    else throw ConfigError("unresolvable sweep parameter path '" + path + "'");
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");

    KeyTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (table.kv.count(key))
            throw ConfigError("duplicate config key '" + key + "'");
        table.kv[key] = {value, lineno};
    }

    RunConfig cfg;

    auto get_dim = [&](const std::string& key, Dimension dim) -> std::optional<double> {
        const RawValue* rv = table.find(key);
        if (!rv) return std::nullopt;
        return parse_dimensioned(key, rv->text, dim);
    };
    auto get_int = [&](const std::string& key) -> std::optional<long> {
        const RawValue* rv = table.find(key);
        if (!rv) return std::nullopt;
        const double v = parse_number(key, rv->text);
        if (v != std::floor(v)) fail(key, "expected an integer");
        return static_cast<long>(v);
    };
    auto get_token = [&](const std::string& key) -> std::optional<std::string> {
        const RawValue* rv = table.find(key);
        if (!rv) return std::nullopt;
        return rv->text;
    };

    // --- device ---
    bool any_device = false;
    for (const auto& [k, v] : table.kv)
        if (k.rfind("device.", 0) == 0) any_device = true;
    if (any_device) {
        DeviceParams d;
        auto need = [&](const std::string& key, Dimension dim) {
            auto v = get_dim(key, dim);
            if (!v) fail(key, "required device field missing");
            return *v;
        };
        d.omega_1 = need("device.omega_1", Dimension::Frequency);
        d.omega_2 = need("device.omega_2", Dimension::Frequency);
        d.omega_c = need("device.omega_c", Dimension::Frequency);
        d.delta_1 = need("device.delta_1", Dimension::Frequency);
        d.delta_2 = need("device.delta_2", Dimension::Frequency);
        d.delta_c = need("device.delta_c", Dimension::Frequency);
        d.g_1c = need("device.g_1c", Dimension::Frequency);
        d.g_2c = need("device.g_2c", Dimension::Frequency);
        d.g_12 = need("device.g_12", Dimension::Frequency);
        auto dim_of = [&](const std::string& key) {
            auto v = get_int(key);
            if (!v) fail(key, "required device field missing");
            if (*v < 0) fail(key, "level count must be positive");
            return static_cast<int>(*v);
        };
        d.dim_1 = dim_of("device.dim_1");
        d.dim_2 = dim_of("device.dim_2");
        d.dim_c = dim_of("device.dim_c");
        if (auto cap = get_int("device.dim_cap")) d.dim_cap = static_cast<int>(*cap);
        d.validate();
        cfg.device = d;
    }

    // --- tones ---
    for (int ti = 1; ti <= 2; ++ti) {
        const std::string p = "tone" + std::to_string(ti) + ".";
        bool any = false;
        for (const auto& [k, v] : table.kv)
            if (k.rfind(p, 0) == 0) any = true;
        if (!any) break;
        ToneConfig t;
        t.target = ti == 1 ? Mode::Q1 : Mode::Q2;
        if (auto m = get_token(p + "target")) t.target = parse_mode(p + "target", *m);
        if (auto a = get_token(p + "amplitude")) {
            if (is_auto(*a)) {
                if (ti != 2) fail(p + "amplitude", "auto amplitude is only solvable for tone 2");
            } else {
                t.amplitude = parse_dimensioned(p + "amplitude", *a, Dimension::Frequency);
            }
        } else {
            fail(p + "amplitude", "required tone field missing");
        }
        if (auto f = get_token(p + "frequency")) {
            if (!is_auto(*f))
                t.frequency = parse_dimensioned(p + "frequency", *f, Dimension::Frequency);
        } else {
            cfg.filled_defaults.push_back(p + "frequency = auto");
        }
        if (auto ph = get_dim(p + "phase", Dimension::Angle)) t.phase = *ph;
        if (auto env = get_token(p + "envelope")) {
            if (*env == "rectangular") t.envelope.kind = EnvelopeSpec::Kind::Rectangular;
            else if (*env == "flattop") t.envelope.kind = EnvelopeSpec::Kind::FlatTopGaussian;
            else fail(p + "envelope", "expected rectangular|flattop");
        }
        if (auto v = get_dim(p + "tau1", Dimension::Time)) t.envelope.tau1 = *v;
        if (auto v = get_token(p + "tau2")) {
            if (!is_auto(*v))
                t.envelope.tau2 = parse_dimensioned(p + "tau2", *v, Dimension::Time);
        }
        if (auto v = get_dim(p + "sigma", Dimension::Time)) t.envelope.sigma = *v;
        cfg.tones.push_back(t);
    }

    // --- simulation ---
    if (auto v = get_dim("simulation.t_g", Dimension::Time)) cfg.simulation.t_g = *v;
    else cfg.filled_defaults.push_back("simulation.t_g = 100 ns");
    if (auto v = get_token("simulation.dt")) {
        if (!is_auto(*v))
            cfg.simulation.dt = parse_dimensioned("simulation.dt", *v, Dimension::Time);
    } else {
        cfg.filled_defaults.push_back("simulation.dt = auto");
    }
    if (auto v = get_token("simulation.integrator")) {
        if (*v == "split") cfg.simulation.integrator = Integrator::SplitOperator;
        else if (*v == "expm") cfg.simulation.integrator = Integrator::DirectExpm;
        else fail("simulation.integrator", "expected split|expm");
    }
    if (auto v = get_token("simulation.initial")) cfg.simulation.initial = *v;
    if (auto v = get_int("simulation.workers")) {
        if (*v < 1) fail("simulation.workers", "must be >= 1");
        cfg.simulation.workers = static_cast<int>(*v);
    }

    // --- sweep axes ---
    for (int ai = 1; ai <= 3; ++ai) {
        const std::string p = "sweep.axis" + std::to_string(ai) + ".";
        bool any = false;
        for (const auto& [k, v] : table.kv)
            if (k.rfind(p, 0) == 0) any = true;
        if (!any) break;
        if (ai > 2) fail(p + "path", "at most 2 sweep axes are supported");
        SweepAxis ax;
        if (auto v = get_token(p + "path")) ax.path = *v;
        else fail(p + "path", "sweep axis needs a parameter path");
        if (!sweep_path_known(ax.path))
            fail(p + "path", "unresolvable parameter path '" + ax.path + "'");
        auto dim = Dimension::Frequency;  // every sweepable path is a frequency
        if (auto v = get_token(p + "start")) ax.start = parse_dimensioned(p + "start", *v, dim);
        else fail(p + "start", "missing");
        if (auto v = get_token(p + "stop")) ax.stop = parse_dimensioned(p + "stop", *v, dim);
        else fail(p + "stop", "missing");
        if (auto v = get_int(p + "count")) ax.count = static_cast<int>(*v);
        else fail(p + "count", "missing");
        if (ax.count < 1) fail(p + "count", "must be >= 1");
        cfg.sweep_axes.push_back(ax);
    }

    // --- targets ---
    if (auto th = get_dim("targets.theta", Dimension::Angle)) {
        cfg.targets.theta = *th;
        auto ph = get_dim("targets.phi", Dimension::Angle);
        if (!ph) fail("targets.phi", "targets need both theta and phi");
        cfg.targets.phi = *ph;
        cfg.targets.set = true;
    }

    // --- toy model ---
    bool any_toy = false;
    for (const auto& [k, v] : table.kv)
        if (k.rfind("toy.", 0) == 0) any_toy = true;
    if (any_toy) {
        cfg.toy.set = true;
        if (auto v = get_token("toy.model")) {
            if (*v == "bpd") cfg.toy.model = ToyModelKind::Bpd;
            else if (*v == "dc_ac") cfg.toy.model = ToyModelKind::DcAc;
            else fail("toy.model", "expected bpd|dc_ac");
        }
        if (auto v = get_dim("toy.Delta", Dimension::Frequency)) cfg.toy.params.Delta = *v;
        if (auto v = get_dim("toy.delta", Dimension::Frequency)) cfg.toy.params.delta = *v;
        if (auto v = get_dim("toy.g", Dimension::Frequency)) cfg.toy.params.g = *v;
        if (auto v = get_dim("toy.g0", Dimension::Frequency)) cfg.toy.params.g0 = *v;
        for (int di = 1; di <= 2; ++di) {
            const std::string p = "toy.drive" + std::to_string(di) + ".";
            ToyTone& tone = di == 1 ? cfg.toy.params.drive1 : cfg.toy.params.drive2;
            if (auto v = get_dim(p + "amplitude", Dimension::Frequency)) tone.amplitude = *v;
            if (auto v = get_token(p + "frequency")) {
                if (is_auto(*v)) (di == 1 ? cfg.toy.drive1_freq_auto : cfg.toy.drive2_freq_auto) = true;
                else tone.frequency = parse_dimensioned(p + "frequency", *v, Dimension::Frequency);
            }
        }
        if (table.kv.count("toy.ac.amplitude") || table.kv.count("toy.ac.frequency")) {
            ToyTone ac;
            if (auto v = get_dim("toy.ac.amplitude", Dimension::Frequency)) ac.amplitude = *v;
            if (auto v = get_dim("toy.ac.frequency", Dimension::Frequency)) ac.frequency = *v;
            cfg.toy.params.ac = ac;
        }
    }

    // --- analysis / output ---
    if (auto v = get_int("resonances.max_photons")) cfg.analysis.max_photons = static_cast<int>(*v);
    if (auto v = get_dim("resonances.threshold", Dimension::Frequency)) cfg.analysis.threshold = *v;
    if (auto v = get_token("output.format")) {
        if (*v == "csv") cfg.format = OutputFormat::Csv;
        else if (*v == "json") cfg.format = OutputFormat::Json;
        else if (*v == "both") cfg.format = OutputFormat::Both;
        else fail("output.format", "expected csv|json|both");
    }

    // Reject unknown keys: they are almost always typos.
    for (const auto& [k, v] : table.kv)
        if (!table.consumed.count(k))
            throw ConfigError("unknown config key '" + k + "' (line " +
                              std::to_string(v.line) + ")");
    return cfg;
}

}  // namespace cfsim
