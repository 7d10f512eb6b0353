#pragma once

#include <string>

#include <json.hpp>

#include "vdb/grouped_elim.hpp"
#include "vdb/vd_id.hpp"

namespace vdb {

// Arm ids are 1-based in all serialized output; in-memory indices are 0-based.

inline nlohmann::json to_json(const SampleLedger& ledger) {
    nlohmann::json doc;
    doc["per_arm"] = ledger.per_arm;
    doc["total"] = ledger.total;
    return doc;
}

inline nlohmann::json to_json(const RoundSummary& round) {
    nlohmann::json doc;
    doc["r"] = round.r;
    doc["epsilon"] = round.epsilon;
    doc["delta"] = round.delta;
    doc["active_count"] = round.active_count;
    doc["champion"] = round.champion >= 0 ? nlohmann::json(round.champion + 1) : nlohmann::json();
    doc["runner_up"] =
        round.runner_up >= 0 ? nlohmann::json(round.runner_up + 1) : nlohmann::json();
    doc["champion_estimate"] = round.champion_estimate;
    doc["runner_up_estimate"] = round.runner_up_estimate;
    doc["early_stop"] = round.early_stop;
    doc["samples"] = round.samples;
    return doc;
}

inline nlohmann::json to_json(const RunReport& report) {
    nlohmann::json doc;
    doc["algorithm"] = report.algorithm;
    doc["profile"] = report.profile;
    doc["seed"] = report.seed;
    doc["delta"] = report.delta;
    doc["output_arm"] =
        report.output_arm >= 0 ? nlohmann::json(report.output_arm + 1) : nlohmann::json();
    doc["correct"] = report.correct;
    doc["total_samples"] = report.ledger.total;
    doc["per_arm_samples"] = report.ledger.per_arm;
    doc["rounds"] = nlohmann::json::array();
    for (const auto& round : report.rounds) doc["rounds"].push_back(to_json(round));
    doc["stop_reason"] = to_string(report.stop_reason);
    doc["wall_ms"] = report.wall_ms;
    return doc;
}

inline nlohmann::json to_json(const BucketAudit& audit) {
    nlohmann::json doc;
    doc["j"] = audit.j;
    doc["lower"] = audit.lower;
    doc["upper"] = audit.upper;
    nlohmann::json members = nlohmann::json::array();
    for (int a : audit.members) members.push_back(a + 1);
    doc["members"] = members;
    doc["sigma_hats"] = audit.sigma_hats;
    doc["theta_hats"] = audit.theta_hats;
    nlohmann::json kept = nlohmann::json::array();
    for (int a : audit.kept) kept.push_back(a + 1);
    doc["kept"] = kept;
    doc["recycled"] = audit.recycled >= 0 ? nlohmann::json(audit.recycled + 1) : nlohmann::json();
    doc["median"] = audit.median_estimate;
    return doc;
}

inline nlohmann::json to_json(const ElimOutcome& outcome) {
    auto ids = [](const std::vector<int>& arms) {
        nlohmann::json out = nlohmann::json::array();
        for (int a : arms) out.push_back(a + 1);
        return out;
    };
    nlohmann::json doc;
    doc["kept"] = ids(outcome.kept);
    doc["recycled"] = ids(outcome.recycled);
    doc["eliminated"] = ids(outcome.eliminated);
    doc["bucket_count"] = outcome.bucket_count;
    doc["variance_draws"] = outcome.variance_draws;
    doc["mean_draws"] = outcome.mean_draws;
    doc["buckets"] = nlohmann::json::array();
    for (const auto& b : outcome.buckets) doc["buckets"].push_back(to_json(b));
    return doc;
}

inline nlohmann::json to_json(const std::vector<IterElimRound>& trace) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& round : trace) {
        nlohmann::json entry;
        entry["r"] = round.r;
        entry["epsilon"] = round.epsilon;
        entry["delta"] = round.delta;
        entry["outcome"] = to_json(round.outcome);
        doc.push_back(entry);
    }
    return doc;
}

}  // namespace vdb
