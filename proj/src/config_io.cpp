#include "aqi/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "aqi/detail/hash.hpp"
#include "aqi/error.hpp"
#include "json.hpp"

namespace aqi {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
    fail(ErrorCode::validation, key + ": " + why, key);
}

void reject_unknown(const json& obj, const std::string& prefix, std::set<std::string> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key())) bad(prefix + it.key(), "unknown key");
}

double number(const json& obj, const char* key, const std::string& prefix, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) bad(prefix + key, "expected a number");
    return v.get<double>();
}

std::size_t count(const json& obj, const char* key, const std::string& prefix, std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        bad(prefix + key, "expected a non-negative integer");
    return v.get<std::size_t>();
}

template <class E>
E choice(const json& obj, const char* key, const std::string& prefix, E fallback,
         std::initializer_list<std::pair<const char*, E>> options) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (v.is_string())
        for (const auto& [name, value] : options)
            if (v.get<std::string>() == name) return value;
    std::string names;
    for (const auto& [name, value] : options) names += (names.empty() ? "" : ", ") + std::string(name);
    bad(prefix + key, "expected one of: " + names);
}

}  // namespace

const char* to_string(Envelope e) { return e == Envelope::flat ? "flat" : "sin2"; }

const char* to_string(SqueezingKind k) {
    switch (k) {
        case SqueezingKind::coherent: return "coherent";
        case SqueezingKind::squeezed: return "squeezed";
        case SqueezingKind::thermal: return "thermal";
    }
    return "unknown";
}

const char* to_string(FluctuationAxis a) { return a == FluctuationAxis::amplitude ? "amplitude" : "phase"; }

DriverConfig config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::validation, std::string("config is not valid JSON: ") + e.what(), "config");
    }
    if (!doc.is_object()) bad("config", "top level must be an object");
    reject_unknown(doc, "", {"schema", "omega", "E_omega", "epsilon_ratio", "phi", "Ip", "n_cycles", "envelope",
                             "rho_coupling", "n_samples", "squeezing", "time_grid"});
    if (doc.contains("schema") && count(doc, "schema", "", 0) != config_schema_version)
        bad("schema", "unsupported schema version");

    DriverConfig c;
    c.omega = number(doc, "omega", "", c.omega);
    c.E_omega = number(doc, "E_omega", "", c.E_omega);
    c.epsilon_ratio = number(doc, "epsilon_ratio", "", c.epsilon_ratio);
    c.phi = number(doc, "phi", "", c.phi);
    c.Ip = number(doc, "Ip", "", c.Ip);
    c.n_cycles = number(doc, "n_cycles", "", c.n_cycles);
    c.rho_coupling = number(doc, "rho_coupling", "", c.rho_coupling);
    c.n_samples = count(doc, "n_samples", "", c.n_samples);
    c.envelope = choice(doc, "envelope", "", c.envelope, {{"flat", Envelope::flat}, {"sin2", Envelope::sin2}});

    if (doc.contains("squeezing")) {
        const auto& s = doc.at("squeezing");
        if (!s.is_object()) bad("squeezing", "expected an object");
        reject_unknown(s, "squeezing.", {"kind", "I_squ", "axis"});
        c.squeezing.kind = choice(s, "kind", "squeezing.", c.squeezing.kind,
                                  {{"coherent", SqueezingKind::coherent},
                                   {"squeezed", SqueezingKind::squeezed},
                                   {"thermal", SqueezingKind::thermal}});
        // A coherent driver defaults to zero squeezing intensity.
        const double fallback = c.squeezing.kind == SqueezingKind::coherent ? 0.0 : c.squeezing.I_squ;
        c.squeezing.I_squ = number(s, "I_squ", "squeezing.", fallback);
        c.squeezing.axis = choice(s, "axis", "squeezing.", c.squeezing.axis,
                                  {{"amplitude", FluctuationAxis::amplitude}, {"phase", FluctuationAxis::phase}});
    }
    if (doc.contains("time_grid")) {
        const auto& g = doc.at("time_grid");
        if (!g.is_object()) bad("time_grid", "expected an object");
        reject_unknown(g, "time_grid.", {"t_start", "t_end", "n_steps"});
        c.time_grid.n_steps = count(g, "n_steps", "time_grid.", 0);
        c.time_grid.t_start = number(g, "t_start", "time_grid.", 0.0);
        c.time_grid.t_end = number(g, "t_end", "time_grid.", 0.0);
    }
    resolve_time_grid(c);
    return c;
}

DriverConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorCode::io, "cannot read config file " + path.string(), "config");
    std::ostringstream ss;
    ss << is.rdbuf();
    return config_from_json(ss.str());
}

std::string config_to_json(const DriverConfig& c) {
    json doc;
    doc["schema"] = config_schema_version;
    doc["omega"] = c.omega;
    doc["E_omega"] = c.E_omega;
    doc["epsilon_ratio"] = c.epsilon_ratio;
    doc["phi"] = c.phi;
    doc["Ip"] = c.Ip;
    doc["n_cycles"] = c.n_cycles;
    doc["envelope"] = to_string(c.envelope);
    doc["rho_coupling"] = c.rho_coupling;
    doc["n_samples"] = c.n_samples;
    doc["squeezing"] = {{"kind", to_string(c.squeezing.kind)},
                        {"I_squ", c.squeezing.I_squ},
                        {"axis", to_string(c.squeezing.axis)}};
    doc["time_grid"] = {{"t_start", c.time_grid.t_start},
                        {"t_end", c.time_grid.t_end},
                        {"n_steps", c.time_grid.n_steps}};
    return doc.dump(2);
}

std::string config_hash(const DriverConfig& c) {
    detail::Fnv1a h;
    h.update(config_to_json(c));
    return h.hex();
}

}  // namespace aqi
