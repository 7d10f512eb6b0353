#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vdb/instance.hpp"

namespace vdb {

// Instance document: {"name": ..., "arms": [ {"family": ..., "params": {...}}
// | {"pmf": [[value, prob], ...]} ]}. Values are parsed as decimal reals; the
// loader validates the result.
inline BanditInstance instance_from_json(const nlohmann::json& doc) {
    if (!doc.contains("arms") || !doc["arms"].is_array()) {
        throw std::invalid_argument("instance document: missing 'arms' array");
    }
    std::vector<RewardDistribution> arms;
    for (const auto& spec : doc["arms"]) {
        if (spec.contains("pmf")) {
            std::vector<RewardDistribution::Atom> atoms;
            for (const auto& pair : spec["pmf"]) {
                if (!pair.is_array() || pair.size() != 2) {
                    throw std::invalid_argument("instance document: pmf entries are [value, prob]");
                }
                atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
            }
            arms.emplace_back(std::move(atoms));
            continue;
        }
        const std::string family = spec.value("family", "");
        const auto params = spec.value("params", nlohmann::json::object());
        if (family == "point_mass") {
            arms.push_back(RewardDistribution::point_mass(params.at("value").get<double>()));
        } else if (family == "bernoulli") {
            arms.push_back(RewardDistribution::bernoulli(params.at("theta").get<double>()));
        } else if (family == "two_point") {
            arms.push_back(RewardDistribution::two_point(params.at("mu").get<double>(),
                                                         params.at("sigma").get<double>()));
        } else {
            throw std::invalid_argument("instance document: unknown arm family '" + family + "'");
        }
    }
    BanditInstance inst(std::move(arms), doc.value("name", ""));
    validate(inst);
    return inst;
}

inline nlohmann::json instance_to_json(const BanditInstance& inst) {
    nlohmann::json doc;
    doc["name"] = inst.name();
    doc["arms"] = nlohmann::json::array();
    for (const auto& arm : inst.arms()) {
        nlohmann::json pmf = nlohmann::json::array();
        for (const auto& a : arm.support()) {
            pmf.push_back({a.value, a.prob});
        }
        doc["arms"].push_back({{"pmf", pmf}});
    }
    return doc;
}

inline BanditInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open instance file '" + path + "'");
    }
    nlohmann::json doc;
    in >> doc;
    BanditInstance inst = instance_from_json(doc);
    if (inst.name().empty()) inst.set_name(path);
    return inst;
}

inline void save_instance(const BanditInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write instance file '" + path + "'");
    }
    out << instance_to_json(inst).dump(2) << '\n';
}

}  // namespace vdb
