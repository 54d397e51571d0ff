#include "slz/config.hpp"

#include <fstream>

namespace slz {

namespace {

using Json = nlohmann::json;

void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const auto* name : allowed)
            if (key == name) known = true;
        if (!known) throw Error("config: unknown key `" + key + "` in " + where);
    }
}

double get_num(const Json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) throw Error(std::string("config: ") + key + " must be a number");
    return obj.at(key).get<double>();
}

int get_int(const Json& obj, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number_integer())
        throw Error(std::string("config: ") + key + " must be an integer");
    return obj.at(key).get<int>();
}

bool get_bool(const Json& obj, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean())
        throw Error(std::string("config: ") + key + " must be a boolean");
    return obj.at(key).get<bool>();
}

void require_prob(double v, const char* key) {
    if (v < 0.0 || v > 1.0) throw Error(std::string("config: ") + key + " must lie in [0,1]");
}

}  // namespace

nlohmann::ordered_json config_to_json(const PipelineConfig& config) {
    nlohmann::ordered_json doc;
    auto& attributes = doc["attributes"];
    attributes["a_ref_frac"] = config.attributes.a_ref_frac;
    attributes["gamma"] = config.attributes.gamma;
    attributes["sigma2_ref"] = config.attributes.sigma2_ref;
    attributes["simplify_eps"] = config.attributes.simplify_eps;

    auto& relations = doc["relations"];
    relations["near_radius"] = config.relations.near_radius;  // <= 0: 10% of image diagonal
    relations["tau_adj"] = config.relations.tau_adj;
    relations["theta_cont"] = config.relations.theta_cont;
    relations["theta_sur"] = config.relations.theta_sur;
    relations["directional_margin"] = config.relations.directional_margin;
    relations["fact_floor"] = config.relations.fact_floor;

    auto& engine = doc["engine"];
    engine["k"] = config.engine.k;
    engine["tau_mission"] = config.engine.tau_mission;
    engine["deterministic"] = config.engine.deterministic;
    engine["tau_fact"] = config.engine.tau_fact;

    auto& mfv = doc["mfv"];
    mfv["window"] = config.mfv.window;
    mfv["tau_haz"] = config.mfv.tau_haz;
    mfv["tau_jit"] = config.mfv.tau_jit;
    mfv["iou_floor"] = config.mfv.iou_floor;

    auto& mission = doc["mission"];
    mission["name"] = mission_name(config.mission.mission);
    mission["weights"] = nlohmann::ordered_json::object();
    for (const auto& [name, w] : config.mission.weights) mission["weights"][name] = w;
    if (config.mission.target)
        mission["target"] = {config.mission.target->x(), config.mission.target->y()};
    else
        mission["target"] = nullptr;
    mission["d_max"] = config.mission.d_max;      // <= 0: half image diagonal
    mission["rho_max"] = config.mission.rho_max;  // <= 0: quarter image diagonal
    mission["a_ref"] = config.mission.a_ref;      // <= 0: 2% of image area

    auto& grid = doc["grid"];
    grid["enabled"] = config.grid.enabled;
    grid["cell_px"] = config.grid.cell_px;
    grid["min_landable_frac"] = config.grid.min_landable_frac;
    return doc;
}

PipelineConfig config_from_json(const nlohmann::json& doc) {
    PipelineConfig config;
    if (!doc.is_object()) throw Error("config: top level must be an object");
    reject_unknown(doc, {"attributes", "relations", "engine", "mfv", "mission", "grid"}, "top level");

    if (doc.contains("attributes")) {
        const auto& a = doc.at("attributes");
        reject_unknown(a, {"a_ref_frac", "gamma", "sigma2_ref", "simplify_eps"}, "attributes");
        config.attributes.a_ref_frac = get_num(a, "a_ref_frac", config.attributes.a_ref_frac);
        config.attributes.gamma = get_num(a, "gamma", config.attributes.gamma);
        config.attributes.sigma2_ref = get_num(a, "sigma2_ref", config.attributes.sigma2_ref);
        config.attributes.simplify_eps = get_num(a, "simplify_eps", config.attributes.simplify_eps);
        if (config.attributes.a_ref_frac <= 0.0) throw Error("config: a_ref_frac must be positive");
        if (config.attributes.sigma2_ref <= 0.0) throw Error("config: sigma2_ref must be positive");
    }
    if (doc.contains("relations")) {
        const auto& r = doc.at("relations");
        reject_unknown(r, {"near_radius", "tau_adj", "theta_cont", "theta_sur",
                           "directional_margin", "fact_floor"},
                       "relations");
        config.relations.near_radius = get_num(r, "near_radius", config.relations.near_radius);
        config.relations.tau_adj = get_num(r, "tau_adj", config.relations.tau_adj);
        config.relations.theta_cont = get_num(r, "theta_cont", config.relations.theta_cont);
        config.relations.theta_sur = get_num(r, "theta_sur", config.relations.theta_sur);
        config.relations.directional_margin =
            get_num(r, "directional_margin", config.relations.directional_margin);
        config.relations.fact_floor = get_num(r, "fact_floor", config.relations.fact_floor);
        if (config.relations.tau_adj <= 0.0) throw Error("config: tau_adj must be positive");
        if (config.relations.theta_cont <= 0.0 || config.relations.theta_sur <= 0.0)
            throw Error("config: theta_cont and theta_sur must be positive");
        if (config.relations.fact_floor <= 0.0 || config.relations.fact_floor >= 1.0)
            throw Error("config: fact_floor must lie in (0,1)");
    }
    if (doc.contains("engine")) {
        const auto& e = doc.at("engine");
        reject_unknown(e, {"k", "tau_mission", "deterministic", "tau_fact"}, "engine");
        config.engine.k = get_int(e, "k", config.engine.k);
        config.engine.tau_mission = get_num(e, "tau_mission", config.engine.tau_mission);
        config.engine.deterministic = get_bool(e, "deterministic", config.engine.deterministic);
        config.engine.tau_fact = get_num(e, "tau_fact", config.engine.tau_fact);
        if (config.engine.k < 1) throw Error("config: k must be at least 1");
        require_prob(config.engine.tau_mission, "tau_mission");
        require_prob(config.engine.tau_fact, "tau_fact");
    }
    if (doc.contains("mfv")) {
        const auto& m = doc.at("mfv");
        reject_unknown(m, {"window", "tau_haz", "tau_jit", "iou_floor"}, "mfv");
        config.mfv.window = get_int(m, "window", config.mfv.window);
        config.mfv.tau_haz = get_num(m, "tau_haz", config.mfv.tau_haz);
        config.mfv.tau_jit = get_num(m, "tau_jit", config.mfv.tau_jit);
        config.mfv.iou_floor = get_num(m, "iou_floor", config.mfv.iou_floor);
        if (config.mfv.window < 1) throw Error("config: mfv window must be at least 1");
        if (config.mfv.tau_haz <= 0.0 || config.mfv.tau_haz > 1.0)
            throw Error("config: tau_haz must lie in (0,1]");
        if (config.mfv.iou_floor <= 0.0 || config.mfv.iou_floor > 1.0)
            throw Error("config: iou_floor must lie in (0,1]");
        if (config.mfv.tau_jit <= 0.0) throw Error("config: tau_jit must be positive");
    }
    if (doc.contains("mission")) {
        const auto& m = doc.at("mission");
        reject_unknown(m, {"name", "weights", "target", "d_max", "rho_max", "a_ref"}, "mission");
        if (m.contains("name")) config.mission.mission = mission_from_name(m.at("name").get<std::string>());
        if (m.contains("weights")) {
            if (!m.at("weights").is_object()) throw Error("config: mission.weights must be an object");
            for (const auto& [name, w] : m.at("weights").items()) {
                bool known = false;
                for (const auto& feature : feature_names())
                    if (feature == name) known = true;
                if (!known) throw Error("config: unknown mission feature `" + name + "`");
                if (!w.is_number() || w.get<double>() < 0.0)
                    throw Error("config: mission weight " + name + " must be non-negative");
                config.mission.weights[name] = w.get<double>();
            }
            bool any_positive = false;
            for (const auto& [name, w] : config.mission.weights)
                if (w > 0.0) any_positive = true;
            if (!config.mission.weights.empty() && !any_positive)
                throw Error("config: at least one mission weight must be positive");
        }
        if (m.contains("target") && !m.at("target").is_null()) {
            const auto& t = m.at("target");
            if (!t.is_array() || t.size() != 2)
                throw Error("config: mission.target must be [x, y]");
            config.mission.target = Point(t.at(0).get<double>(), t.at(1).get<double>());
        }
        config.mission.d_max = get_num(m, "d_max", config.mission.d_max);
        config.mission.rho_max = get_num(m, "rho_max", config.mission.rho_max);
        config.mission.a_ref = get_num(m, "a_ref", config.mission.a_ref);
    }
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        reject_unknown(g, {"enabled", "cell_px", "min_landable_frac"}, "grid");
        config.grid.enabled = get_bool(g, "enabled", config.grid.enabled);
        config.grid.cell_px = get_int(g, "cell_px", config.grid.cell_px);
        config.grid.min_landable_frac =
            get_num(g, "min_landable_frac", config.grid.min_landable_frac);
        if (config.grid.cell_px < 1) throw Error("config: grid cell_px must be at least 1");
        if (config.grid.min_landable_frac <= 0.0 || config.grid.min_landable_frac > 1.0)
            throw Error("config: min_landable_frac must lie in (0,1]");
    }
    return config;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("config " + path + ": " + e.what());
    }
    return config_from_json(doc);
}

}  // namespace slz
