#pragma once

#include <json.hpp>

#include "mflica/harness.hpp"

namespace mflica {

// Per-block export: {t_start, t_end, edges:[{from,to,weight}]}, steps 1-based
// inclusive. Node references use series ids.
inline nlohmann::json dynamic_network_to_json(const DynamicNetwork& dyn,
                                              const std::vector<std::string>& ids) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& block : dyn.blocks) {
        nlohmann::json edges = nlohmann::json::array();
        const auto& net = block.net;
        for (std::size_t f = 0; f < net.n; ++f)
            for (std::size_t l = 0; l < net.n; ++l)
                if (net.adjacency[f * net.n + l] > 0.0)
                    edges.push_back({{"from", ids[f]}, {"to", ids[l]}, {"weight", net.adjacency[f * net.n + l]}});
        blocks.push_back({{"t_start", block.t_begin}, {"t_end", block.t_end}, {"edges", std::move(edges)}});
    }
    return {{"t_star", dyn.t_star}, {"omega", dyn.omega}, {"delta", dyn.delta},
            {"sigma", dyn.sigma}, {"blocks", std::move(blocks)}};
}

// Per-step snapshots plus intervals and merge/split events. The assignment
// object records the single-faction mapping used for evaluation.
inline nlohmann::json timeline_to_json(const FactionTimeline& timeline,
                                       const std::vector<std::string>& ids,
                                       const std::vector<MergeSplitEvent>& events,
                                       std::size_t omega, double sigma) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& block : timeline.blocks) {
        for (std::size_t t = block.t_begin; t <= block.t_end; ++t) {
            nlohmann::json factions = nlohmann::json::array();
            for (const auto& f : block.factions) {
                nlohmann::json members = nlohmann::json::array();
                for (int v : f.members) members.push_back(ids[static_cast<std::size_t>(v)]);
                nlohmann::json ranks = nlohmann::json::object();
                for (const auto& [v, score] : f.ranks) ranks[ids[static_cast<std::size_t>(v)]] = score;
                factions.push_back({{"initiator", ids[static_cast<std::size_t>(f.initiator)]},
                                    {"members", std::move(members)},
                                    {"size_ratio", f.size_ratio},
                                    {"ranks", std::move(ranks)}});
            }
            nlohmann::json assignment = nlohmann::json::object();
            for (std::size_t v = 0; v < block.assignment.size(); ++v) {
                const int f = block.assignment[v];
                if (f >= 0)
                    assignment[ids[v]] =
                        ids[static_cast<std::size_t>(block.factions[static_cast<std::size_t>(f)].initiator)];
            }
            steps.push_back({{"t", t}, {"factions", std::move(factions)}, {"assignment", std::move(assignment)}});
        }
    }
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& iv : timeline.intervals)
        intervals.push_back({{"initiator", ids[static_cast<std::size_t>(iv.initiator)]},
                             {"start", iv.start}, {"end", iv.end}});
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& e : events) {
        nlohmann::json before = nlohmann::json::array(), after = nlohmann::json::array();
        for (int v : e.initiators_before) before.push_back(ids[static_cast<std::size_t>(v)]);
        for (int v : e.initiators_after) after.push_back(ids[static_cast<std::size_t>(v)]);
        ev.push_back({{"t", e.t},
                      {"kind", e.kind == MergeSplitEvent::Kind::Split ? "split" : "merge"},
                      {"initiators_before", std::move(before)},
                      {"initiators_after", std::move(after)}});
    }
    return {{"t_star", timeline.t_star}, {"omega", omega}, {"sigma", sigma},
            {"steps", std::move(steps)}, {"intervals", std::move(intervals)}, {"events", std::move(ev)}};
}

// Reconstructs a timeline (and the id list, sorted as on load) from the JSON
// emitted above. Ranks and ratios round-trip; blocks come back per step.
struct LoadedTimeline {
    FactionTimeline timeline;
    std::vector<std::string> ids;
    std::size_t omega = 0;
    double sigma = 0.5;
};

inline LoadedTimeline timeline_from_json(const nlohmann::json& j) {
    LoadedTimeline out;
    out.timeline.t_star = j.at("t_star").get<std::size_t>();
    out.omega = j.value("omega", std::size_t{0});
    out.sigma = j.value("sigma", 0.5);

    std::set<std::string> id_set;
    for (const auto& step : j.at("steps")) {
        for (const auto& f : step.at("factions"))
            for (const auto& m : f.at("members")) id_set.insert(m.get<std::string>());
        for (const auto& [id, initiator] : step.at("assignment").items()) id_set.insert(id);
    }
    out.ids.assign(id_set.begin(), id_set.end());
    detail::sort_ids(out.ids);
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < out.ids.size(); ++i) index[out.ids[i]] = static_cast<int>(i);

    for (const auto& step : j.at("steps")) {
        TimelineBlock block;
        block.t_begin = block.t_end = step.at("t").get<std::size_t>();
        std::map<int, int> faction_of_initiator;
        for (const auto& f : step.at("factions")) {
            FactionSnapshot snap;
            snap.t = block.t_begin;
            snap.initiator = index.at(f.at("initiator").get<std::string>());
            for (const auto& m : f.at("members")) snap.members.push_back(index.at(m.get<std::string>()));
            std::sort(snap.members.begin(), snap.members.end());
            snap.size_ratio = f.at("size_ratio").get<double>();
            for (const auto& [id, score] : f.at("ranks").items())
                snap.ranks.emplace_back(index.at(id), score.get<double>());
            faction_of_initiator[snap.initiator] = static_cast<int>(block.factions.size());
            block.factions.push_back(std::move(snap));
        }
        block.assignment.assign(out.ids.size(), -1);
        for (const auto& [id, initiator] : step.at("assignment").items())
            block.assignment[static_cast<std::size_t>(index.at(id))] =
                faction_of_initiator.at(index.at(initiator.get<std::string>()));
        out.timeline.blocks.push_back(std::move(block));
    }
    for (const auto& iv : j.at("intervals"))
        out.timeline.intervals.push_back({index.at(iv.at("initiator").get<std::string>()),
                                          iv.at("start").get<std::size_t>(),
                                          iv.at("end").get<std::size_t>()});
    return out;
}

inline nlohmann::json script_entry_to_json(const ScriptEntry& e) {
    return {{"t_begin", e.t_begin}, {"t_end", e.t_end}, {"leader", e.leader},
            {"members", e.members}, {"informed", e.informed},
            {"stopped", e.stopped}, {"decelerate", e.decelerate}, {"event", e.event_index}};
}

// Ground truth: the script table plus literal per-step assignment/leaders.
inline nlohmann::json truth_to_json(const GroundTruth& truth) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : truth.entries) entries.push_back(script_entry_to_json(e));
    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t t = 1; t <= truth.t_star; ++t) {
        nlohmann::json assignment = nlohmann::json::object();
        nlohmann::json leaders = nlohmann::json::object();
        for (int label : truth.active_labels(t)) {
            leaders[std::to_string(label)] = truth.leader_set(label);
        }
        for (int id = 1; id <= truth.n; ++id) {
            const int label = truth.label_at(t, id);
            if (label >= 0) assignment[std::to_string(id)] = label;
        }
        steps.push_back({{"t", t}, {"assignment", std::move(assignment)}, {"leaders", std::move(leaders)}});
    }
    return {{"model", to_string(truth.model)}, {"event_type", to_string(truth.event_type)},
            {"n", truth.n}, {"t_star", truth.t_star},
            {"entries", std::move(entries)}, {"steps", std::move(steps)}};
}

inline GroundTruth truth_from_json(const nlohmann::json& j) {
    GroundTruth truth;
    truth.model = model_from_string(j.at("model").get<std::string>());
    truth.event_type = event_type_from_string(j.at("event_type").get<std::string>());
    truth.n = j.at("n").get<int>();
    truth.t_star = j.at("t_star").get<std::size_t>();
    for (const auto& e : j.at("entries")) {
        ScriptEntry entry;
        entry.t_begin = e.at("t_begin").get<std::size_t>();
        entry.t_end = e.at("t_end").get<std::size_t>();
        entry.leader = e.at("leader").get<int>();
        entry.members = e.at("members").get<std::vector<int>>();
        entry.informed = e.at("informed").get<std::vector<int>>();
        entry.stopped = e.at("stopped").get<bool>();
        entry.decelerate = e.at("decelerate").get<bool>();
        entry.event_index = e.at("event").get<int>();
        truth.entries.push_back(std::move(entry));
    }
    return truth;
}

inline nlohmann::json sim_config_to_json(const SimConfig& c) {
    return {{"model", to_string(c.model)}, {"event_type", to_string(c.event_type)},
            {"n", c.n}, {"t_star", c.t_star}, {"events", c.events},
            {"ic_k", c.ic_k}, {"ic_rho", c.ic_rho}, {"cm_informed", c.cm_informed},
            {"speed", c.speed}, {"noise_std", c.resolved_noise_std()}, {"seed", c.seed}};
}

inline nlohmann::json eval_report_to_json(const EvalReport& r) {
    nlohmann::json j{{"assignment_accuracy", r.assignment_accuracy},
                     {"leadership_f1", r.leadership_f1}};
    if (r.top3_rank_accuracy) j["top3_rank_accuracy"] = *r.top3_rank_accuracy;
    else j["top3_rank_accuracy"] = nullptr;
    return j;
}

inline nlohmann::json sweep_to_json(const WindowSweepResult& sweep) {
    nlohmann::json candidates = nlohmann::json::array();
    for (const auto& c : sweep.candidates)
        candidates.push_back({{"omega", c.omega}, {"psi_hat", c.psi_hat}});
    return {{"candidates", std::move(candidates)}, {"chosen", sweep.chosen}};
}

}  // namespace mflica
