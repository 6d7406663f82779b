#pragma once

#include <random>

#include "mflica/factions.hpp"

namespace mflica {

// Partition of series indices into clusters; labels are arbitrary
// non-negative integers, singletons allowed.
struct Clustering {
    std::vector<int> labels;  // one label per series index

    std::size_t size() const { return labels.size(); }
};

// Average coordination measure: mean pairwise similarity over ordered
// same-cluster pairs. All-singleton clusterings have no such pairs and
// score 0 by convention.
inline double coordination_measure(const Clustering& clustering,
                                   const std::vector<double>& sim, std::size_t n) {
    if (clustering.labels.size() != n || sim.size() != n * n)
        throw std::invalid_argument("coordination_measure: size mismatch");
    double num = 0.0;
    std::size_t den = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || clustering.labels[i] != clustering.labels[j]) continue;
            num += sim[i * n + j];
            den += 1;
        }
    return den == 0 ? 0.0 : num / static_cast<double>(den);
}

// Clustering used for the per-step measure: one cluster per faction (under
// the single-assignment rule) and one residual cluster for everything else.
inline Clustering step_clustering(const TimelineBlock& block, std::size_t n) {
    Clustering c;
    c.labels.resize(n);
    const int residual = static_cast<int>(block.factions.size());
    for (std::size_t v = 0; v < n; ++v)
        c.labels[v] = block.assignment[v] >= 0 ? block.assignment[v] : residual;
    return c;
}

// Psi_t for every step, evaluated on each block's window similarities and
// replicated across the block.
inline std::vector<double> per_step_measure(const DynamicNetwork& dyn,
                                            const FactionTimeline& timeline) {
    if (timeline.blocks.size() != dyn.blocks.size())
        throw std::invalid_argument("per_step_measure: timeline does not match network");
    std::vector<double> psi(dyn.t_star, 0.0);
    for (std::size_t b = 0; b < dyn.blocks.size(); ++b) {
        const auto& nb = dyn.blocks[b];
        const Clustering c = step_clustering(timeline.blocks[b], nb.net.n);
        const double value = coordination_measure(c, nb.net.sim, nb.net.n);
        for (std::size_t t = nb.t_begin; t <= nb.t_end; ++t) psi[t - 1] = value;
    }
    return psi;
}

namespace detail {

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace detail

// One full inference pass at a fixed window length.
struct PipelineRun {
    DynamicNetwork network;
    FactionTimeline timeline;
    std::vector<double> psi;
    double psi_hat = 0.0;  // median of psi
};

inline PipelineRun run_pipeline(const Dataset& dataset, std::size_t omega, double sigma,
                                bool compute_ranks = true) {
    PipelineRun run;
    run.network = create_dynamic_network(dataset, omega, 0, sigma);
    run.timeline = find_factions_and_initiators(run.network, compute_ranks);
    run.psi = per_step_measure(run.network, run.timeline);
    run.psi_hat = detail::median(run.psi);
    return run;
}

struct WindowSweepResult {
    struct Candidate {
        std::size_t omega = 0;
        double psi_hat = 0.0;
    };
    std::vector<Candidate> candidates;
    std::size_t chosen = 0;  // the omega attaining the max psi_hat, smallest on ties
};

// Default candidate grid bracketing plausible event scales.
inline std::vector<std::size_t> default_window_candidates(std::size_t t_star) {
    std::vector<std::size_t> out;
    for (double frac : {80.0, 40.0, 20.0, 10.0}) {
        auto omega = static_cast<std::size_t>(static_cast<double>(t_star) / frac + 0.5);
        omega = std::clamp<std::size_t>(omega, 10, t_star);
        if (out.empty() || out.back() != omega) out.push_back(omega);
    }
    return out;
}

// Runs the full pipeline per candidate window length and keeps the run whose
// median coordination measure is highest. Ties go to the smallest omega.
inline WindowSweepResult infer_window(const Dataset& dataset,
                                      std::vector<std::size_t> candidates, double sigma,
                                      PipelineRun* best_run = nullptr) {
    if (candidates.empty()) throw std::invalid_argument("infer_window: no candidates");
    WindowSweepResult sweep;
    double best = -1.0;
    for (std::size_t omega : candidates) {
        PipelineRun run = run_pipeline(dataset, omega, sigma, best_run != nullptr);
        sweep.candidates.push_back({omega, run.psi_hat});
        if (run.psi_hat > best) {
            best = run.psi_hat;
            sweep.chosen = omega;
            if (best_run) *best_run = std::move(run);
        }
    }
    return sweep;
}

enum class PerturbKind { Swap, Split, Merge };

// Seeded one-step perturbation of a clustering: exchange two members of
// distinct clusters, split one cluster in two, or merge two clusters.
inline Clustering perturb_clustering(const Clustering& clustering, PerturbKind kind,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Clustering out = clustering;

    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < clustering.labels.size(); ++i)
        groups[clustering.labels[i]].push_back(i);
    std::vector<int> labels;
    for (const auto& [label, members] : groups) labels.push_back(label);

    auto pick = [&rng](std::size_t bound) {
        return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
    };

    switch (kind) {
        case PerturbKind::Swap: {
            if (labels.size() < 2) throw std::invalid_argument("perturb_clustering: swap needs two clusters");
            const std::size_t a = pick(labels.size());
            std::size_t b = pick(labels.size() - 1);
            if (b >= a) ++b;
            const auto& ga = groups[labels[a]];
            const auto& gb = groups[labels[b]];
            const std::size_t va = ga[pick(ga.size())];
            const std::size_t vb = gb[pick(gb.size())];
            std::swap(out.labels[va], out.labels[vb]);
            break;
        }
        case PerturbKind::Split: {
            std::vector<int> splittable;
            for (int l : labels)
                if (groups[l].size() >= 2) splittable.push_back(l);
            if (splittable.empty()) throw std::invalid_argument("perturb_clustering: no cluster of size >= 2");
            const int label = splittable[pick(splittable.size())];
            const auto& members = groups[label];
            int fresh = labels.back() + 1;
            // Random nonempty proper subset moves to the fresh label.
            std::vector<std::size_t> moved;
            while (moved.empty() || moved.size() == members.size()) {
                moved.clear();
                for (std::size_t v : members)
                    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5) moved.push_back(v);
            }
            for (std::size_t v : moved) out.labels[v] = fresh;
            break;
        }
        case PerturbKind::Merge: {
            if (labels.size() < 2) throw std::invalid_argument("perturb_clustering: merge needs two clusters");
            const std::size_t a = pick(labels.size());
            std::size_t b = pick(labels.size() - 1);
            if (b >= a) ++b;
            for (std::size_t v : groups[labels[b]]) out.labels[v] = labels[a];
            break;
        }
    }
    return out;
}

}  // namespace mflica
