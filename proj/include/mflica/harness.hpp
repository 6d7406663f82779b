#pragma once

#include <numbers>
#include <optional>

#include "mflica/coordination.hpp"
#include "mflica/sim.hpp"

namespace mflica {

// Ids of the dataset's series as integers, the bridge between node indices
// and scripted ground-truth ids.
inline std::vector<int> node_ids(const Dataset& dataset) {
    std::vector<int> ids;
    ids.reserve(dataset.size());
    for (const auto& s : dataset.series) ids.push_back(std::stoi(s.id));
    return ids;
}

// Fraction of individuals at step t whose predicted faction agrees with the
// ground truth: the predicted initiator must be in the true faction's leader
// set (the leader itself, or any informed individual under CM). Individuals
// predicted outside any faction count as correct only where the truth also
// leaves them unassigned.
inline double assignment_accuracy(const FactionTimeline& timeline, const GroundTruth& truth,
                                  std::size_t t, const std::vector<int>& ids) {
    if (ids.size() != static_cast<std::size_t>(truth.n))
        throw std::invalid_argument("assignment_accuracy: id set mismatch");
    const TimelineBlock& block = timeline.at_step(t);
    std::size_t agree = 0;
    for (std::size_t v = 0; v < ids.size(); ++v) {
        const int true_label = truth.label_at(t, ids[v]);
        const int f = block.assignment[v];
        if (f < 0) {
            agree += (true_label < 0);
            continue;
        }
        if (true_label < 0) continue;
        const int predicted_initiator = ids[static_cast<std::size_t>(
            block.factions[static_cast<std::size_t>(f)].initiator)];
        const auto leaders = truth.leader_set(true_label);
        if (std::find(leaders.begin(), leaders.end(), predicted_initiator) != leaders.end()) ++agree;
    }
    return static_cast<double>(agree) / static_cast<double>(ids.size());
}

inline double median_assignment_accuracy(const FactionTimeline& timeline, const GroundTruth& truth,
                                         const std::vector<int>& ids) {
    std::vector<double> per_t;
    per_t.reserve(truth.t_star);
    for (std::size_t t = 1; t <= truth.t_star; ++t)
        per_t.push_back(assignment_accuracy(timeline, truth, t, ids));
    return detail::median(std::move(per_t));
}

// TP/FP/FN accumulated over every step with at least one active scripted
// faction: an inferred initiator is a true positive when it belongs to the
// leader set of its own true faction; a false negative is a scripted faction
// none of whose leaders was inferred.
inline double leadership_f1(const FactionTimeline& timeline, const GroundTruth& truth,
                            const std::vector<int>& ids) {
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t t = 1; t <= truth.t_star; ++t) {
        const auto active = truth.active_labels(t);
        if (active.empty()) continue;
        const TimelineBlock& block = timeline.at_step(t);
        std::vector<int> inferred;
        for (const auto& f : block.factions)
            inferred.push_back(ids[static_cast<std::size_t>(f.initiator)]);
        for (int leader : inferred) {
            const int label = truth.label_at(t, leader);
            bool hit = false;
            if (label >= 0) {
                const auto leaders = truth.leader_set(label);
                hit = std::find(leaders.begin(), leaders.end(), leader) != leaders.end();
            }
            if (hit) ++tp; else ++fp;
        }
        for (int label : active) {
            const auto leaders = truth.leader_set(label);
            bool found = false;
            for (int leader : leaders)
                if (std::find(inferred.begin(), inferred.end(), leader) != inferred.end()) {
                    found = true;
                    break;
                }
            if (!found) ++fn;
        }
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}

// Median over snapshots of |top-k predicted| intersected with |top-k of the
// scripted hierarchy| over k. Snapshots of factions smaller than k are
// skipped; snapshots count once per covered step.
inline std::optional<double> topk_rank_accuracy(const FactionTimeline& timeline,
                                                const GroundTruth& truth,
                                                const std::vector<int>& ids, int k = 3) {
    std::vector<double> values;
    for (const auto& block : timeline.blocks) {
        for (const auto& f : block.factions) {
            if (static_cast<int>(f.members.size()) < k) continue;
            const int initiator_id = ids[static_cast<std::size_t>(f.initiator)];
            std::vector<double> per_step;
            for (std::size_t t = block.t_begin; t <= block.t_end; ++t) {
                const int label = truth.label_at(t, initiator_id);
                if (label < 0) continue;
                const auto chain = truth.hierarchy(label);
                if (static_cast<int>(chain.size()) < k) continue;

                std::vector<std::pair<int, double>> scored = f.ranks;
                std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
                    return a.second != b.second ? a.second > b.second : a.first < b.first;
                });
                std::size_t hits = 0;
                for (int p = 0; p < k; ++p) {
                    const int id = ids[static_cast<std::size_t>(scored[static_cast<std::size_t>(p)].first)];
                    for (int q = 0; q < k; ++q)
                        if (chain[static_cast<std::size_t>(q)] == id) { ++hits; break; }
                }
                per_step.push_back(static_cast<double>(hits) / static_cast<double>(k));
            }
            values.insert(values.end(), per_step.begin(), per_step.end());
        }
    }
    if (values.empty()) return std::nullopt;
    return detail::median(std::move(values));
}

struct EvalReport {
    double assignment_accuracy = 0.0;  // median over t
    double leadership_f1 = 0.0;
    std::optional<double> top3_rank_accuracy;
};

inline EvalReport evaluate(const FactionTimeline& timeline, const GroundTruth& truth,
                           const std::vector<int>& ids) {
    EvalReport report;
    report.assignment_accuracy = median_assignment_accuracy(timeline, truth, ids);
    report.leadership_f1 = leadership_f1(timeline, truth, ids);
    report.top3_rank_accuracy = topk_rank_accuracy(timeline, truth, ids, 3);
    return report;
}

// Geometric following rule of the baseline: A follows B at step t when their
// step directions agree within beta, B lies ahead of A along B's direction,
// and they are closer than gamma.
struct FlockParams {
    double beta = std::numbers::pi / 6.0;
    double gamma = 0.0;  // <= 0 resolves to 5 x median step length

    void validate() const {
        if (beta <= 0.0 || beta > std::numbers::pi)
            throw std::invalid_argument("flock: beta must lie in (0, pi]");
    }
};

inline double median_step_length(const Dataset& dataset) {
    std::vector<double> lengths;
    lengths.reserve(dataset.size() * (dataset.length() - 1));
    for (const auto& s : dataset.series) {
        for (std::size_t t = 1; t + 1 <= s.length(); ++t) {
            const auto a = s.at(t);
            const auto b = s.at(t + 1);
            double acc = 0.0;
            for (std::size_t k = 0; k < s.dim; ++k) acc += (b[k] - a[k]) * (b[k] - a[k]);
            lengths.push_back(std::sqrt(acc));
        }
    }
    return detail::median(std::move(lengths));
}

// Per-step geometric network; t needs the direction vectors from t-1 to t.
// Individuals with a zero-length direction contribute no edges.
inline FollowingNetwork flock_network(const Dataset& dataset, std::size_t t, const FlockParams& params) {
    params.validate();
    if (t < 2 || t > dataset.length())
        throw std::invalid_argument("flock_network: t must lie in [2, t*]");
    const double gamma = params.gamma > 0.0 ? params.gamma : 5.0 * median_step_length(dataset);
    const std::size_t n = dataset.size();
    const std::size_t m = dataset.dim();

    FollowingNetwork net;
    net.n = n;
    net.sigma = 0.0;
    net.adjacency.assign(n * n, 0.0);
    net.sim.assign(n * n, 0.0);

    std::vector<std::vector<double>> dir(n, std::vector<double>(m, 0.0));
    std::vector<double> norm(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto prev = dataset[i].at(t - 1);
        const auto cur = dataset[i].at(t);
        double acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            dir[i][k] = cur[k] - prev[k];
            acc += dir[i][k] * dir[i][k];
        }
        norm[i] = std::sqrt(acc);
    }
    const double cos_beta = std::cos(params.beta);
    for (std::size_t a = 0; a < n; ++a) {
        if (norm[a] < 1e-12) continue;
        const auto pa = dataset[a].at(t);
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b || norm[b] < 1e-12) continue;
            double dot = 0.0;
            for (std::size_t k = 0; k < m; ++k) dot += dir[a][k] * dir[b][k];
            if (dot <= cos_beta * norm[a] * norm[b]) continue;  // angle >= beta
            const auto pb = dataset[b].at(t);
            double ahead = 0.0, dist2 = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const double dk = pb[k] - pa[k];
                ahead += dk * dir[b][k];
                dist2 += dk * dk;
            }
            if (ahead <= 0.0) continue;  // b not in front of a along b's direction
            if (dist2 >= gamma * gamma) continue;
            net.adjacency[a * n + b] = 1.0;
            net.sim[a * n + b] = net.sim[b * n + a] = 1.0;
        }
    }
    return net;
}

// FLOCK networks for every step, packaged as a per-step dynamic network so
// the faction pipeline applies unchanged. Step 1 has no directions and gets
// an empty network.
inline DynamicNetwork flock_dynamic_network(const Dataset& dataset, FlockParams params) {
    params.validate();
    dataset.validate();
    if (params.gamma <= 0.0) params.gamma = 5.0 * median_step_length(dataset);
    DynamicNetwork dyn;
    dyn.t_star = dataset.length();
    dyn.omega = 1;
    dyn.delta = 1;
    dyn.sigma = 0.0;
    dyn.blocks.reserve(dyn.t_star);
    {
        NetworkBlock first;
        first.t_begin = 1;
        first.t_end = 1;
        first.net.n = dataset.size();
        first.net.adjacency.assign(dataset.size() * dataset.size(), 0.0);
        first.net.sim.assign(dataset.size() * dataset.size(), 0.0);
        dyn.blocks.push_back(std::move(first));
    }
    for (std::size_t t = 2; t <= dyn.t_star; ++t) {
        NetworkBlock block;
        block.t_begin = t;
        block.t_end = t;
        block.net = flock_network(dataset, t, params);
        dyn.blocks.push_back(std::move(block));
    }
    return dyn;
}

// Centrality screening on one global static following network: top-4 node
// sets by PageRank, weighted in-degree count and harmonic in-closeness,
// scored by Jaccard similarity against the scripted initiator set.
struct CentralityComparison {
    std::array<double, 3> jaccard{};              // pagerank, in-degree, closeness
    std::array<std::vector<int>, 3> top4_ids{};   // ids, descending measure
};

namespace detail {

inline std::vector<int> top_k_nodes(const std::vector<double>& score, int k) {
    std::vector<int> order(score.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return score[static_cast<std::size_t>(a)] != score[static_cast<std::size_t>(b)]
                   ? score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)]
                   : a < b;
    });
    order.resize(static_cast<std::size_t>(std::min<std::size_t>(order.size(), static_cast<std::size_t>(k))));
    return order;
}

inline double jaccard(const std::vector<int>& a, const std::vector<int>& b) {
    std::set<int> sa(a.begin(), a.end()), su(a.begin(), a.end());
    std::size_t inter = 0;
    for (int x : b) {
        if (sa.count(x)) ++inter;
        su.insert(x);
    }
    return su.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(su.size());
}

// Harmonic closeness over incoming shortest paths (hop counts).
inline std::vector<double> in_closeness(const FollowingNetwork& net) {
    const std::size_t n = net.n;
    std::vector<double> score(n, 0.0);
    std::vector<int> dist(n);
    for (std::size_t target = 0; target < n; ++target) {
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<std::size_t> queue{target};
        dist[target] = 0;
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t f = 0; f < n; ++f)
                if (dist[f] < 0 && net.adjacency[f * n + v] > 0.0) {
                    dist[f] = dist[v] + 1;
                    queue.push_back(f);
                }
        }
        for (std::size_t f = 0; f < n; ++f)
            if (f != target && dist[f] > 0) score[target] += 1.0 / static_cast<double>(dist[f]);
    }
    return score;
}

}  // namespace detail

inline CentralityComparison centrality_comparison(const Dataset& dataset, const GroundTruth& truth,
                                                  double sigma) {
    const FollowingNetwork net = create_following_network(dataset, sigma);
    std::vector<int> initiators;
    for (const auto& entry : truth.entries) {
        if (entry.stopped || entry.event_index != 0) continue;
        if (std::find(initiators.begin(), initiators.end(), entry.leader) == initiators.end())
            initiators.push_back(entry.leader);
    }

    const auto ids = node_ids(dataset);
    std::vector<double> indeg(net.n, 0.0);
    for (std::size_t v = 0; v < net.n; ++v) indeg[v] = static_cast<double>(net.in_degree(v));

    const std::array<std::vector<double>, 3> measures{pagerank(net), indeg, detail::in_closeness(net)};
    CentralityComparison out;
    for (std::size_t m = 0; m < 3; ++m) {
        const auto top = detail::top_k_nodes(measures[m], 4);
        std::vector<int> top_ids;
        for (int v : top) top_ids.push_back(ids[static_cast<std::size_t>(v)]);
        out.top4_ids[m] = top_ids;
        out.jaccard[m] = detail::jaccard(top_ids, initiators);
    }
    return out;
}

}  // namespace mflica
