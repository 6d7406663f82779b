#pragma once

#include <cstdint>

#include "mflica/dtw.hpp"

namespace mflica {

// Weighted directed following network over one window of data.
// adjacency[follower][followed] = |s| of the pair's warping path; an edge
// exists only when |s| cleared the sigma threshold, so at most one direction
// per pair carries weight. sim keeps the unthresholded |s| of every pair for
// coordination-measure reuse.
struct FollowingNetwork {
    std::size_t n = 0;
    double sigma = 0.0;
    std::vector<double> adjacency;  // n*n, row = follower
    std::vector<double> sim;        // n*n symmetric |s|, zero diagonal

    double weight(std::size_t follower, std::size_t followed) const {
        return adjacency[follower * n + followed];
    }
    double similarity(std::size_t a, std::size_t b) const { return sim[a * n + b]; }

    std::size_t out_degree(std::size_t v) const {
        std::size_t d = 0;
        for (std::size_t u = 0; u < n; ++u)
            if (adjacency[v * n + u] > 0.0) ++d;
        return d;
    }
    std::size_t in_degree(std::size_t v) const {
        std::size_t d = 0;
        for (std::size_t u = 0; u < n; ++u)
            if (adjacency[u * n + v] > 0.0) ++d;
        return d;
    }
};

// One per-window network replicated over a block of time steps.
struct NetworkBlock {
    std::size_t t_begin = 0;  // 1-based, inclusive
    std::size_t t_end = 0;    // inclusive
    FollowingNetwork net;
};

// Block-constant per-step networks covering [1, t*].
struct DynamicNetwork {
    std::size_t t_star = 0;
    std::size_t omega = 0;
    std::size_t delta = 0;
    double sigma = 0.0;
    std::vector<NetworkBlock> blocks;

    std::size_t block_index(std::size_t t) const {
        // Blocks are contiguous with widths delta (tail excepted).
        std::size_t lo = 0, hi = blocks.size();
        while (lo + 1 < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (blocks[mid].t_begin <= t) lo = mid; else hi = mid;
        }
        return lo;
    }
    const FollowingNetwork& at_step(std::size_t t) const {
        return blocks[block_index(t)].net;
    }
};

// Pairwise scored network of one window of data (the static construction).
// For each pair i<j a single warping path is computed; s >= sigma puts
// weight |s| on edge j->i, s <= -sigma on edge i->j, nothing otherwise.
// band 0 means "use the default shift of the window length".
inline FollowingNetwork create_following_network(const Dataset& q, double sigma,
                                                 std::size_t band = 0,
                                                 bool align_displacement = true) {
    q.validate();
    const std::size_t n = q.size();
    if (n < 2) throw std::invalid_argument("create_following_network: need at least two series");
    if (band == 0) band = default_shift(q.length());

    FollowingNetwork net;
    net.n = n;
    net.sigma = sigma;
    net.adjacency.assign(n * n, 0.0);
    net.sim.assign(n * n, 0.0);

    std::vector<TimeSeries> prepared;
    prepared.reserve(n);
    for (const auto& s : q.series)
        prepared.push_back(align_displacement ? detail::displacement_of(s) : s);

    detail::DtwWorkspace ws;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = prepared[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& w = prepared[j];
            const auto a = detail::banded_align(u.values.data(), u.length(),
                                                w.values.data(), w.length(),
                                                q.dim(), band, ws);
            const double s = a.score;
            const double mag = std::abs(s);
            net.sim[i * n + j] = mag;
            net.sim[j * n + i] = mag;
            if (s >= sigma) net.adjacency[j * n + i] = mag;
            else if (s <= -sigma) net.adjacency[i * n + j] = mag;
        }
    }
    return net;
}

// Sliding-window construction: window w(i) fills the shift-wide block
// [(i-1)*delta, i*delta), the tail window fills [K*delta, t*).
// delta 0 and band 0 mean "derive from omega" (band defaults to delta).
inline DynamicNetwork create_dynamic_network(const Dataset& u, std::size_t omega,
                                             std::size_t delta = 0, double sigma = 0.5,
                                             std::size_t band = 0,
                                             bool align_displacement = true) {
    u.validate();
    if (delta == 0) delta = default_shift(omega);
    if (band == 0) band = delta;
    const std::size_t t_star = u.length();
    const auto windows = sliding_windows(t_star, omega, delta);

    DynamicNetwork dyn;
    dyn.t_star = t_star;
    dyn.omega = omega;
    dyn.delta = delta;
    dyn.sigma = sigma;
    dyn.blocks.reserve(windows.size());
    for (std::size_t k = 0; k < windows.size(); ++k) {
        const auto& w = windows[k];
        const bool tail = (k + 1 == windows.size());
        NetworkBlock block;
        block.t_begin = (w.index - 1) * delta + 1;
        block.t_end = tail ? t_star : w.index * delta;
        block.net = create_following_network(slice(u, w), sigma, band, align_displacement);
        dyn.blocks.push_back(std::move(block));
    }
    return dyn;
}

}  // namespace mflica
