#pragma once

#include <deque>
#include <string>

#include "mflica/network.hpp"

namespace mflica {

// One faction at one time step: the initiator, every node with a directed
// path to it, the induced-edge size ratio and the members' whole-network
// PageRank scores. t is the first step of the block the snapshot holds for.
struct FactionSnapshot {
    std::size_t t = 0;
    int initiator = -1;
    std::vector<int> members;  // sorted node indices, initiator included
    double size_ratio = 0.0;
    std::vector<std::pair<int, double>> ranks;  // member -> PageRank score
};

// Maximal run of consecutive steps in which an initiator leads some faction.
struct FactionInterval {
    int initiator = -1;
    std::size_t start = 0;  // 1-based, inclusive
    std::size_t end = 0;    // inclusive
};

struct TimelineBlock {
    std::size_t t_begin = 0;
    std::size_t t_end = 0;
    std::vector<FactionSnapshot> factions;
    // Single-faction assignment per node (index into factions, -1 = none):
    // a node reaching several initiators goes to the faction it reaches
    // through its heaviest first hop.
    std::vector<int> assignment;
};

struct FactionTimeline {
    std::size_t t_star = 0;
    std::vector<TimelineBlock> blocks;
    std::vector<FactionInterval> intervals;

    std::size_t block_index(std::size_t t) const {
        std::size_t lo = 0, hi = blocks.size();
        while (lo + 1 < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (blocks[mid].t_begin <= t) lo = mid; else hi = mid;
        }
        return lo;
    }
    const TimelineBlock& at_step(std::size_t t) const { return blocks[block_index(t)]; }
};

// Nodes with zero out-degree and at least one follower. The in-degree filter
// keeps isolated nodes from counting as initiators of one-member factions.
inline std::vector<int> find_initiators(const FollowingNetwork& net) {
    std::vector<int> out;
    for (std::size_t v = 0; v < net.n; ++v)
        if (net.out_degree(v) == 0 && net.in_degree(v) >= 1)
            out.push_back(static_cast<int>(v));
    return out;
}

// All nodes with a directed path to the initiator, plus the initiator.
// BFS over incoming edges (follower -> followed points toward the initiator).
inline std::vector<int> find_faction(const FollowingNetwork& net, int initiator) {
    const std::size_t v0 = static_cast<std::size_t>(initiator);
    if (initiator < 0 || v0 >= net.n || net.out_degree(v0) != 0 || net.in_degree(v0) < 1)
        throw std::invalid_argument("find_faction: node " + std::to_string(initiator) + " is not an initiator");
    std::vector<char> seen(net.n, 0);
    std::deque<std::size_t> queue{v0};
    seen[v0] = 1;
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t f = 0; f < net.n; ++f) {
            if (!seen[f] && net.adjacency[f * net.n + v] > 0.0) {
                seen[f] = 1;
                queue.push_back(f);
            }
        }
    }
    std::vector<int> members;
    for (std::size_t v = 0; v < net.n; ++v)
        if (seen[v]) members.push_back(static_cast<int>(v));
    return members;
}

// |E_l| / C(|V|, 2): directed edges induced by the faction over the pair
// count of the whole node set.
inline double faction_size_ratio(const FollowingNetwork& net, const std::vector<int>& faction) {
    if (net.n < 2) return 0.0;
    std::vector<char> in_faction(net.n, 0);
    for (int v : faction) in_faction[static_cast<std::size_t>(v)] = 1;
    std::size_t edges = 0;
    for (std::size_t a = 0; a < net.n; ++a) {
        if (!in_faction[a]) continue;
        for (std::size_t b = 0; b < net.n; ++b)
            if (in_faction[b] && net.adjacency[a * net.n + b] > 0.0) ++edges;
    }
    const double pairs = 0.5 * static_cast<double>(net.n) * static_cast<double>(net.n - 1);
    return static_cast<double>(edges) / pairs;
}

// Weighted PageRank fixed point of
//   pi_i = d * sum_{k in N_in(i)} E[k][i] * pi_k / |N_out(k)| + (1 - d),
// solved by iteration from all-ones. The recursion is unnormalized, so
// scores need not sum to one.
inline std::vector<double> pagerank(const FollowingNetwork& net, double d = 0.9,
                                    double tol = 1e-10, std::size_t max_iter = 10000) {
    if (d <= 0.0 || d >= 1.0) throw std::invalid_argument("pagerank: damping must lie in (0,1)");
    const std::size_t n = net.n;
    std::vector<double> out_deg(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        out_deg[k] = static_cast<double>(net.out_degree(k));

    std::vector<double> pi(n, 1.0), next(n, 0.0);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double w = net.adjacency[k * n + i];
                if (w > 0.0) acc += w * pi[k] / out_deg[k];
            }
            next[i] = d * acc + (1.0 - d);
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            delta = std::max(delta, std::abs(next[i] - pi[i]));
        pi.swap(next);
        if (delta < tol) return pi;
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(pi[i] - next[i]));
    throw std::runtime_error("pagerank: no convergence after " + std::to_string(max_iter) +
                             " iterations, residual " + std::to_string(residual));
}

namespace detail {

// Highest-weight first hop that still reaches the faction's initiator.
inline double best_first_hop(const FollowingNetwork& net, std::size_t v,
                             const std::vector<char>& faction_mask) {
    double best = 0.0;
    for (std::size_t u = 0; u < net.n; ++u) {
        const double w = net.adjacency[v * net.n + u];
        if (w > best && faction_mask[u]) best = w;
    }
    return best;
}

}  // namespace detail

// Per-block faction detection over the dynamic network plus the maximal
// leading intervals per initiator. compute_ranks toggles the per-snapshot
// PageRank fill (the structure is identical either way).
inline FactionTimeline find_factions_and_initiators(const DynamicNetwork& dyn,
                                                    bool compute_ranks = true) {
    FactionTimeline timeline;
    timeline.t_star = dyn.t_star;
    timeline.blocks.reserve(dyn.blocks.size());

    for (const auto& nb : dyn.blocks) {
        const FollowingNetwork& net = nb.net;
        TimelineBlock block;
        block.t_begin = nb.t_begin;
        block.t_end = nb.t_end;

        const std::vector<int> initiators = find_initiators(net);
        std::vector<std::vector<char>> masks;
        masks.reserve(initiators.size());
        std::vector<double> ranks;
        if (compute_ranks && !initiators.empty()) ranks = pagerank(net);

        for (int l : initiators) {
            FactionSnapshot snap;
            snap.t = nb.t_begin;
            snap.initiator = l;
            snap.members = find_faction(net, l);
            snap.size_ratio = faction_size_ratio(net, snap.members);
            if (compute_ranks) {
                snap.ranks.reserve(snap.members.size());
                for (int v : snap.members)
                    snap.ranks.emplace_back(v, ranks[static_cast<std::size_t>(v)]);
            }
            std::vector<char> mask(net.n, 0);
            for (int v : snap.members) mask[static_cast<std::size_t>(v)] = 1;
            masks.push_back(std::move(mask));
            block.factions.push_back(std::move(snap));
        }

        block.assignment.assign(net.n, -1);
        for (std::size_t v = 0; v < net.n; ++v) {
            int best_f = -1;
            double best_w = 0.0;
            for (std::size_t f = 0; f < block.factions.size(); ++f) {
                if (!masks[f][v]) continue;
                if (static_cast<int>(v) == block.factions[f].initiator) {
                    best_f = static_cast<int>(f);
                    break;
                }
                const double w = detail::best_first_hop(net, v, masks[f]);
                if (w > best_w) {
                    best_w = w;
                    best_f = static_cast<int>(f);
                }
            }
            block.assignment[v] = best_f;
        }
        timeline.blocks.push_back(std::move(block));
    }

    // Intervals: merge touching blocks per leading initiator.
    std::map<int, FactionInterval> open;
    auto flush_absent = [&](const std::vector<char>& leading, std::size_t n) {
        for (std::size_t v = 0; v < n; ++v) {
            auto it = open.find(static_cast<int>(v));
            if (it != open.end() && !leading[v]) {
                timeline.intervals.push_back(it->second);
                open.erase(it);
            }
        }
    };
    std::size_t n_nodes = dyn.blocks.empty() ? 0 : dyn.blocks.front().net.n;
    for (const auto& block : timeline.blocks) {
        std::vector<char> leading(n_nodes, 0);
        for (const auto& f : block.factions) {
            leading[static_cast<std::size_t>(f.initiator)] = 1;
            auto it = open.find(f.initiator);
            if (it == open.end())
                open.emplace(f.initiator, FactionInterval{f.initiator, block.t_begin, block.t_end});
            else
                it->second.end = block.t_end;
        }
        flush_absent(leading, n_nodes);
    }
    for (auto& [l, interval] : open) timeline.intervals.push_back(interval);
    std::sort(timeline.intervals.begin(), timeline.intervals.end(),
              [](const FactionInterval& a, const FactionInterval& b) {
                  return a.start != b.start ? a.start < b.start : a.initiator < b.initiator;
              });
    return timeline;
}

// Members of every snapshot ordered by descending whole-network PageRank,
// ties by ascending node index. One list per faction per block.
inline std::vector<std::vector<std::vector<int>>> rank_within_factions(const FactionTimeline& timeline) {
    std::vector<std::vector<std::vector<int>>> out;
    out.reserve(timeline.blocks.size());
    for (const auto& block : timeline.blocks) {
        std::vector<std::vector<int>> per_faction;
        per_faction.reserve(block.factions.size());
        for (const auto& f : block.factions) {
            std::vector<std::pair<int, double>> scored = f.ranks;
            std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
                return a.second != b.second ? a.second > b.second : a.first < b.first;
            });
            std::vector<int> order;
            order.reserve(scored.size());
            for (const auto& [v, s] : scored) order.push_back(v);
            per_faction.push_back(std::move(order));
        }
        out.push_back(std::move(per_faction));
    }
    return out;
}

struct MergeSplitEvent {
    std::size_t t = 0;  // first step of the new configuration
    enum class Kind { Merge, Split } kind = Kind::Split;
    std::vector<int> initiators_before;
    std::vector<int> initiators_after;
};

namespace detail {

inline std::size_t intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
    // Both sorted.
    std::size_t i = 0, j = 0, c = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (a[i] > b[j]) ++j;
        else { ++c; ++i; ++j; }
    }
    return c;
}

inline bool same_configuration(const TimelineBlock& a, const TimelineBlock& b) {
    if (a.factions.size() != b.factions.size()) return false;
    for (std::size_t f = 0; f < a.factions.size(); ++f)
        if (a.factions[f].initiator != b.factions[f].initiator ||
            a.factions[f].members != b.factions[f].members)
            return false;
    return true;
}

}  // namespace detail

// A split fires where one previous faction's member set feeds two or more
// factions of the new configuration with at least two shared members each;
// a merge fires symmetrically. Only configuration changes are examined, so
// steady overlapping factions do not retrigger.
inline std::vector<MergeSplitEvent> detect_merge_split(const FactionTimeline& timeline) {
    std::vector<MergeSplitEvent> events;
    for (std::size_t b = 1; b < timeline.blocks.size(); ++b) {
        const TimelineBlock& prev = timeline.blocks[b - 1];
        const TimelineBlock& cur = timeline.blocks[b];
        if (detail::same_configuration(prev, cur)) continue;
        const std::size_t t = cur.t_begin;

        for (const auto& before : prev.factions) {
            std::vector<int> after_hits;
            for (const auto& after : cur.factions)
                if (detail::intersection_size(before.members, after.members) >= 2)
                    after_hits.push_back(after.initiator);
            if (after_hits.size() >= 2)
                events.push_back({t, MergeSplitEvent::Kind::Split, {before.initiator}, after_hits});
        }
        for (const auto& after : cur.factions) {
            std::vector<int> before_hits;
            for (const auto& before : prev.factions)
                if (detail::intersection_size(before.members, after.members) >= 2)
                    before_hits.push_back(before.initiator);
            if (before_hits.size() >= 2)
                events.push_back({t, MergeSplitEvent::Kind::Merge, before_hits, {after.initiator}});
        }
    }
    return events;
}

}  // namespace mflica
