/**
 * @file config_io.hpp
 * @brief Strict JSON (de)serialization of ModelConfig.
 *
 * Schema (times in minutes, rates in currency per hour):
 *
 *     {
 *       "arrival":        {"kind": "exponential", "mean": 5},
 *       "manual_service": {"kind": "triangular", "min": 3, "mode": 7, "max": 14},
 *       "auto_service":   {"kind": "triangular", "min": 1, "mode": 2, "max": 4},
 *       "unskilled_factor": 1.3,
 *       "p_auto": 0.5,
 *       "p_point_A": 0.5,
 *       "skilled_per_point": 2,
 *       "unskilled_per_point": 2,
 *       "dispensers_per_point": 1,
 *       "cost_rates": {
 *         "skilled":   {"busy_rate": 20, "idle_rate": 12, "per_use": 0},
 *         "unskilled": {"busy_rate": 12, "idle_rate": 8,  "per_use": 0},
 *         "dispenser": {"busy_rate": 30, "idle_rate": 10, "per_use": 0}
 *       },
 *       "horizon": 28800,
 *       "crn_mode": "dedicated_streams"
 *     }
 *
 * Every field is required and unknown fields are rejected.
 */
#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crossdock/errors.hpp"
#include "crossdock/model.hpp"

namespace crossdock {

namespace detail {

class StrictReader {
public:
    std::vector<std::string> errors;

    void expect_keys(const nlohmann::json& obj, const std::string& where,
                     const std::set<std::string>& allowed) {
        for (const auto& [key, _] : obj.items())
            if (!allowed.count(key)) errors.push_back(where + "unknown field '" + key + "'");
        for (const auto& key : allowed)
            if (!obj.contains(key)) errors.push_back(where + "missing field '" + key + "'");
    }

    double number(const nlohmann::json& obj, const std::string& key, const std::string& where,
                  double fallback = 0.0) {
        if (!obj.contains(key)) return fallback;
        const auto& v = obj.at(key);
        if (!v.is_number()) {
            errors.push_back(where + key + " must be a number");
            return fallback;
        }
        return v.get<double>();
    }

    std::int64_t count(const nlohmann::json& obj, const std::string& key) {
        if (!obj.contains(key)) return 0;
        const auto& v = obj.at(key);
        if (!v.is_number_integer()) {
            errors.push_back(key + " must be an integer");
            return 0;
        }
        return v.get<std::int64_t>();
    }

    DistributionSpec distribution(const nlohmann::json& root, const std::string& key) {
        DistributionSpec spec;
        if (!root.contains(key)) return spec;
        const auto& obj = root.at(key);
        const std::string where = key + ".";
        if (!obj.is_object() || !obj.contains("kind") || !obj.at("kind").is_string()) {
            errors.push_back(key + " must be an object with a string 'kind'");
            return spec;
        }
        const auto kind = obj.at("kind").get<std::string>();
        if (kind == "exponential") {
            expect_keys(obj, where, {"kind", "mean"});
            spec = DistributionSpec::exponential(number(obj, "mean", where, 1.0));
        } else if (kind == "triangular") {
            expect_keys(obj, where, {"kind", "min", "mode", "max"});
            spec = DistributionSpec::triangular(number(obj, "min", where, 0.0),
                                                number(obj, "mode", where, 0.5),
                                                number(obj, "max", where, 1.0));
        } else {
            errors.push_back(where + "kind must be 'exponential' or 'triangular'");
        }
        return spec;
    }

    ClassRates rates(const nlohmann::json& parent, const std::string& key) {
        ClassRates r;
        if (!parent.contains(key)) return r;
        const auto& obj = parent.at(key);
        const std::string where = "cost_rates." + key + ".";
        if (!obj.is_object()) {
            errors.push_back(where + " must be an object");
            return r;
        }
        expect_keys(obj, where, {"busy_rate", "idle_rate", "per_use"});
        r.busy_rate = number(obj, "busy_rate", where);
        r.idle_rate = number(obj, "idle_rate", where);
        r.per_use = number(obj, "per_use", where);
        return r;
    }
};

inline nlohmann::json to_json(const DistributionSpec& d) {
    if (d.kind == DistributionKind::exponential) return {{"kind", "exponential"}, {"mean", d.mean}};
    return {{"kind", "triangular"}, {"min", d.min}, {"mode", d.mode}, {"max", d.max}};
}

inline nlohmann::json to_json(const ClassRates& r) {
    return {{"busy_rate", r.busy_rate}, {"idle_rate", r.idle_rate}, {"per_use", r.per_use}};
}

}  // namespace detail

/// Parse and validate. Throws ConfigError listing every problem found.
inline ModelConfig config_from_json(const nlohmann::json& root) {
    if (!root.is_object()) throw ConfigError("configuration must be a JSON object");
    detail::StrictReader rd;
    rd.expect_keys(root, "", {"arrival", "manual_service", "auto_service", "unskilled_factor",
                              "p_auto", "p_point_A", "skilled_per_point", "unskilled_per_point",
                              "dispensers_per_point", "cost_rates", "horizon", "crn_mode"});
    ModelConfig cfg;
    cfg.arrival = rd.distribution(root, "arrival");
    cfg.manual_service = rd.distribution(root, "manual_service");
    cfg.auto_service = rd.distribution(root, "auto_service");
    cfg.unskilled_factor = rd.number(root, "unskilled_factor", "", 1.0);
    cfg.p_auto = rd.number(root, "p_auto", "");
    cfg.p_point_A = rd.number(root, "p_point_A", "");
    PointResources per_point{rd.count(root, "skilled_per_point"),
                             rd.count(root, "unskilled_per_point"),
                             rd.count(root, "dispensers_per_point")};
    cfg.points = {per_point, per_point};
    if (root.contains("cost_rates")) {
        const auto& rates = root.at("cost_rates");
        if (rates.is_object()) {
            rd.expect_keys(rates, "cost_rates.", {"skilled", "unskilled", "dispenser"});
            cfg.cost_rates.skilled = rd.rates(rates, "skilled");
            cfg.cost_rates.unskilled = rd.rates(rates, "unskilled");
            cfg.cost_rates.dispenser = rd.rates(rates, "dispenser");
        } else {
            rd.errors.push_back("cost_rates must be an object");
        }
    }
    cfg.horizon = rd.number(root, "horizon", "", 1.0);
    if (root.contains("crn_mode")) {
        const auto& m = root.at("crn_mode");
        if (m.is_string() && m.get<std::string>() == "default_stream") {
            cfg.crn_mode = CrnMode::default_stream;
        } else if (m.is_string() && m.get<std::string>() == "dedicated_streams") {
            cfg.crn_mode = CrnMode::dedicated_streams;
        } else {
            rd.errors.push_back("crn_mode must be 'default_stream' or 'dedicated_streams'");
        }
    }
    if (!rd.errors.empty()) throw ConfigError(std::move(rd.errors));
    cfg.validate();
    return cfg;
}

inline ModelConfig config_from_string(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(root);
}

inline ModelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_string(buf.str());
}

/// Serialize. The file format has one count per class for both points, so
/// asymmetric layouts are rejected.
inline nlohmann::json config_to_json(const ModelConfig& cfg) {
    if (!cfg.symmetric_resources())
        throw ConfigError("per-point resource counts differ; not representable in the file format");
    const auto& r = cfg.points[0];
    return {
        {"arrival", detail::to_json(cfg.arrival)},
        {"manual_service", detail::to_json(cfg.manual_service)},
        {"auto_service", detail::to_json(cfg.auto_service)},
        {"unskilled_factor", cfg.unskilled_factor},
        {"p_auto", cfg.p_auto},
        {"p_point_A", cfg.p_point_A},
        {"skilled_per_point", r.skilled},
        {"unskilled_per_point", r.unskilled},
        {"dispensers_per_point", r.dispensers},
        {"cost_rates",
         {{"skilled", detail::to_json(cfg.cost_rates.skilled)},
          {"unskilled", detail::to_json(cfg.cost_rates.unskilled)},
          {"dispenser", detail::to_json(cfg.cost_rates.dispenser)}}},
        {"horizon", cfg.horizon},
        {"crn_mode", std::string(to_string(cfg.crn_mode))},
    };
}

}  // namespace crossdock
