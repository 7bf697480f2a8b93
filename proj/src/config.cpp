#include "cascade/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cascade {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config: " + field + ": " + what);
}

void reject_unknown(const Json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
    if (!obj.is_object())
        fail(where.empty() ? "document" : where, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            fail(where.empty() ? it.key() : where + "." + it.key(),
                 "unknown key");
    }
}

Real get_number(const Json& obj, const std::string& where,
                const std::string& key, Real fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail(where + "." + key, "expected a number");
    return obj[key].get<Real>();
}

int get_int(const Json& obj, const std::string& where, const std::string& key,
            int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) fail(where + "." + key, "expected an integer");
    return obj[key].get<int>();
}

ModelConfig parse_model(const Json& j) {
    if (!j.is_object()) fail("model", "expected an object");
    if (!j.contains("type") || !j["type"].is_string())
        fail("model.type", "required string");
    const std::string type = j["type"].get<std::string>();

    ModelConfig model;
    if (type == "high_q") {
        model.type = ModelType::HighQ;
        reject_unknown(j, "model", {"type", "omega", "gamma", "delta"});
        if (!j.contains("omega")) fail("model.omega", "required for high_q");
        model.omega = get_number(j, "model", "omega", 0.0);
        model.gamma = get_number(j, "model", "gamma", 1.0);
        model.delta = get_number(j, "model", "delta", 0.0);
        if (!(model.gamma > 0.0)) fail("model.gamma", "must be > 0");
        if (model.omega < 0.0) fail("model.omega", "must be >= 0");
    } else if (type == "pbg") {
        model.type = ModelType::PBG;
        reject_unknown(j, "model",
                       {"type", "omega1", "gamma1", "gamma2", "delta"});
        model.omega1 = get_number(j, "model", "omega1", 1.0);
        model.gamma1 = get_number(j, "model", "gamma1", 4.0);
        model.gamma2 = get_number(j, "model", "gamma2", 1.0);
        model.delta = get_number(j, "model", "delta", 0.0);
        if (!(model.omega1 > 0.0)) fail("model.omega1", "must be > 0");
        if (!(model.gamma1 > 0.0)) fail("model.gamma1", "must be > 0");
        if (!(model.gamma2 > 0.0)) fail("model.gamma2", "must be > 0");
        if (!(model.gamma2 < model.gamma1))
            fail("model.gamma2", "must be < gamma1 (band-gap condition)");
    } else if (type == "lorentzian_sum") {
        model.type = ModelType::LorentzianSum;
        reject_unknown(j, "model", {"type", "eta", "terms"});
        model.eta = get_number(j, "model", "eta", 1.0);
        if (!(model.eta > 0.0)) fail("model.eta", "must be > 0");
        if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
            fail("model.terms", "required non-empty array");
        int idx = 0;
        for (const auto& t : j["terms"]) {
            const std::string where = "model.terms[" + std::to_string(idx) + "]";
            if (!t.is_object()) fail(where, "expected an object");
            reject_unknown(t, where, {"weight", "width", "offset"});
            LorentzianTerm term;
            term.weight = get_number(t, where, "weight", 0.0);
            term.width = get_number(t, where, "width", 0.0);
            term.offset = get_number(t, where, "offset", 0.0);
            if (!(term.width > 0.0)) fail(where + ".width", "must be > 0");
            model.terms.push_back(term);
            ++idx;
        }
    } else {
        fail("model.type", "must be high_q, pbg, or lorentzian_sum");
    }
    return model;
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    reject_unknown(j, "",
                   {"model", "atom", "method", "grid", "contour", "time",
                    "output"});
    if (!j.contains("model")) fail("model", "required");

    ScenarioConfig config;
    config.model = parse_model(j["model"]);

    if (j.contains("atom")) {
        reject_unknown(j["atom"], "atom", {"delta_bar"});
        config.atom.delta_bar = get_number(j["atom"], "atom", "delta_bar", 0.0);
    }

    if (j.contains("method")) {
        if (!j["method"].is_string()) fail("method", "expected a string");
        const std::string m = j["method"].get<std::string>();
        if (m == "integral")
            config.method = Method::Integral;
        else if (m == "master")
            config.method = Method::Master;
        else
            fail("method", "must be integral or master");
    }

    if (j.contains("grid")) {
        reject_unknown(j["grid"], "grid", {"n", "half_width"});
        config.grid_n = get_int(j["grid"], "grid", "n", 150);
        config.grid_half_width =
            get_number(j["grid"], "grid", "half_width", 30.0);
    }
    if (config.grid_n < 1) fail("grid.n", "must be >= 1");
    if (!(config.grid_half_width > 0.0)) fail("grid.half_width", "must be > 0");

    if (j.contains("time")) {
        reject_unknown(j["time"], "time", {"t_max", "n_points"});
        config.t_max = get_number(j["time"], "time", "t_max", 10.0);
        config.n_points = get_int(j["time"], "time", "n_points", 500);
    }
    if (!(config.t_max > 0.0)) fail("time.t_max", "must be > 0");
    if (config.n_points < 2) fail("time.n_points", "must be >= 2");

    config.contour.sigma = default_sigma(config.t_max);
    if (j.contains("contour")) {
        reject_unknown(j["contour"], "contour", {"sigma", "omega_max", "samples"});
        config.contour.sigma =
            get_number(j["contour"], "contour", "sigma", config.contour.sigma);
        config.contour.omega_max =
            get_number(j["contour"], "contour", "omega_max", 200.0);
        config.contour.samples = get_int(j["contour"], "contour", "samples", 16384);
    }
    if (!(config.contour.sigma > 0.0)) fail("contour.sigma", "must be > 0");
    if (!(config.contour.omega_max > 0.0))
        fail("contour.omega_max", "must be > 0");
    if (config.contour.samples < 8 || config.contour.samples % 2 != 0)
        fail("contour.samples", "must be even and >= 8");

    if (j.contains("output")) {
        if (!j["output"].is_string()) fail("output", "expected a string");
        config.output = j["output"].get<std::string>();
    }

    if (config.method == Method::Master &&
        config.model.type == ModelType::LorentzianSum)
        fail("method", "master method supports high_q and pbg models only");

    // Surface reservoir-level violations with config context.
    try {
        validate(reservoir_from_config(config.model));
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("config: model: ") + e.what());
    }
    return config;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const ScenarioConfig& config) {
    Json j;
    Json model;
    switch (config.model.type) {
        case ModelType::HighQ:
            model["type"] = "high_q";
            model["omega"] = config.model.omega;
            model["gamma"] = config.model.gamma;
            model["delta"] = config.model.delta;
            break;
        case ModelType::PBG:
            model["type"] = "pbg";
            model["omega1"] = config.model.omega1;
            model["gamma1"] = config.model.gamma1;
            model["gamma2"] = config.model.gamma2;
            model["delta"] = config.model.delta;
            break;
        case ModelType::LorentzianSum: {
            model["type"] = "lorentzian_sum";
            model["eta"] = config.model.eta;
            Json terms = Json::array();
            for (const auto& t : config.model.terms) {
                Json term;
                term["weight"] = t.weight;
                term["width"] = t.width;
                term["offset"] = t.offset;
                terms.push_back(term);
            }
            model["terms"] = terms;
            break;
        }
    }
    j["model"] = model;
    j["atom"] = Json{{"delta_bar", config.atom.delta_bar}};
    j["method"] = config.method == Method::Integral ? "integral" : "master";
    j["grid"] = Json{{"n", config.grid_n}, {"half_width", config.grid_half_width}};
    j["contour"] = Json{{"sigma", config.contour.sigma},
                        {"omega_max", config.contour.omega_max},
                        {"samples", config.contour.samples}};
    j["time"] = Json{{"t_max", config.t_max}, {"n_points", config.n_points}};
    j["output"] = config.output;
    return j.dump(2) + "\n";
}

ReservoirSpec reservoir_from_config(const ModelConfig& model) {
    switch (model.type) {
        case ModelType::HighQ:
            return high_q_spec(model.omega, model.gamma, model.delta);
        case ModelType::PBG:
            return pbg_spec(model.omega1, model.gamma1, model.gamma2, model.delta);
        case ModelType::LorentzianSum: {
            ReservoirSpec spec;
            spec.terms = model.terms;
            spec.eta = model.eta;
            spec.kind = ReservoirKind::General;
            validate(spec);
            return spec;
        }
    }
    throw ConfigError("config: unreachable model type");
}

VectorXr time_grid(const ScenarioConfig& config) {
    VectorXr times(config.n_points);
    for (int i = 0; i < config.n_points; ++i)
        times[i] = config.t_max * Real(i) / Real(config.n_points - 1);
    return times;
}

}  // namespace cascade
