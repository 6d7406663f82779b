#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "mflica/core.hpp"

namespace mflica {

// A banded DTW alignment. The path is 1-based, starts at (1,1), ends at
// (|u|,|w|) and moves by {(+1,0),(0,+1),(+1,+1)}. score is the mean of
// sign(j-i) along the path: positive means w reproduces u's pattern later,
// i.e. w follows u.
struct WarpingResult {
    std::vector<std::pair<int, int>> path;
    double cost = 0.0;
    double score = 0.0;
};

// Mean of sign(j-i) over a warping path; always in [-1, 1].
inline double following_score(const std::vector<std::pair<int, int>>& path) {
    if (path.empty()) throw std::invalid_argument("following_score: empty path");
    long sum = 0;
    for (const auto& [i, j] : path) sum += (j > i) - (j < i);
    return static_cast<double>(sum) / static_cast<double>(path.size());
}

namespace detail {

// First differences: the per-step displacement vectors of a series.
inline TimeSeries displacement_of(const TimeSeries& s) {
    TimeSeries d;
    d.id = s.id;
    d.dim = s.dim;
    const std::size_t len = s.length();
    if (len < 2) throw std::invalid_argument("displacement_of: series '" + s.id + "' too short");
    d.values.resize((len - 1) * s.dim);
    for (std::size_t t = 0; t + 1 < len; ++t)
        for (std::size_t k = 0; k < s.dim; ++k)
            d.values[t * s.dim + k] = s.values[(t + 1) * s.dim + k] - s.values[t * s.dim + k];
    return d;
}

// Predecessor codes for backtracking.
enum : std::uint8_t { kDiag = 0, kLeft = 1, kUp = 2, kNone = 3 };

// Reusable DP buffers; one per worker thread.
struct DtwWorkspace {
    std::vector<double> cost;
    std::vector<std::uint8_t> pred;

    void reserve(std::size_t n, std::size_t m) {
        if (cost.size() < n * m) {
            cost.resize(n * m);
            pred.resize(n * m);
        }
    }
};

struct PairAlignment {
    double cost = 0.0;
    double score = 0.0;
    std::size_t path_len = 0;
};

inline double point_distance(const double* a, const double* b, std::size_t dim) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = a[k] - b[k];
        acc += d * d;
    }
    return std::sqrt(acc);
}

// Banded DTW between two flat m-dimensional series. Fills the workspace and
// backtracks. Ties are broken by preferring the diagonal step, then (0,+1).
// If sink is non-null the path is appended to it (1-based, in order);
// lag_sink likewise collects j-i along the path.
inline PairAlignment banded_align(const double* u, std::size_t nu,
                                  const double* w, std::size_t nw,
                                  std::size_t dim, std::size_t band,
                                  DtwWorkspace& ws,
                                  std::vector<std::pair<int, int>>* sink = nullptr,
                                  std::vector<long>* lag_sink = nullptr) {
    if (nu == 0 || nw == 0) throw std::invalid_argument("dtw: empty series");
    const std::size_t diff = nu > nw ? nu - nw : nw - nu;
    if (band < diff) throw std::invalid_argument("dtw: band smaller than length difference, no feasible path");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    ws.reserve(nu, nw);
    double* D = ws.cost.data();
    std::uint8_t* P = ws.pred.data();
    const auto idx = [nw](std::size_t i, std::size_t j) { return i * nw + j; };

    const long b = static_cast<long>(band);
    for (std::size_t i = 0; i < nu; ++i) {
        const long lo_l = static_cast<long>(i) - b;
        const std::size_t lo = lo_l < 0 ? 0 : static_cast<std::size_t>(lo_l);
        std::size_t hi = i + band;  // inclusive
        if (hi >= nw) hi = nw - 1;
        // Sentinels just outside the band keep stale buffer contents out.
        if (lo > 0) D[idx(i, lo - 1)] = kInf;
        if (hi + 1 < nw) D[idx(i, hi + 1)] = kInf;
        const double* ui = u + i * dim;
        for (std::size_t j = lo; j <= hi; ++j) {
            const double c = point_distance(ui, w + j * dim, dim);
            if (i == 0 && j == 0) {
                D[0] = c;
                P[0] = kNone;
                continue;
            }
            const double dd = (i > 0 && j > 0) ? D[idx(i - 1, j - 1)] : kInf;
            const double dl = (j > 0) ? D[idx(i, j - 1)] : kInf;
            const double du = (i > 0) ? D[idx(i - 1, j)] : kInf;
            double best = dd;
            std::uint8_t from = kDiag;
            if (dl < best) { best = dl; from = kLeft; }
            if (du < best) { best = du; from = kUp; }
            D[idx(i, j)] = best + c;
            P[idx(i, j)] = from;
        }
    }

    PairAlignment out;
    out.cost = D[idx(nu - 1, nw - 1)];

    // Backtrack, accumulating the sign statistic.
    std::size_t i = nu - 1, j = nw - 1;
    long sign_sum = 0;
    std::size_t len = 0;
    while (true) {
        const long lag = static_cast<long>(j) - static_cast<long>(i);
        sign_sum += (lag > 0) - (lag < 0);
        ++len;
        if (sink) sink->emplace_back(static_cast<int>(i) + 1, static_cast<int>(j) + 1);
        if (lag_sink) lag_sink->push_back(lag);
        const std::uint8_t from = P[idx(i, j)];
        if (from == kNone) break;
        if (from == kDiag) { --i; --j; }
        else if (from == kLeft) { --j; }
        else { --i; }
    }
    if (sink) std::reverse(sink->end() - static_cast<std::ptrdiff_t>(len), sink->end());
    if (lag_sink) std::reverse(lag_sink->end() - static_cast<std::ptrdiff_t>(len), lag_sink->end());
    out.score = static_cast<double>(sign_sum) / static_cast<double>(len);
    out.path_len = len;
    return out;
}

}  // namespace detail

// Minimum-cost monotone warping path between u and w under a Sakoe-Chiba
// band, with Euclidean point distance. By default the series are first
// transformed to per-step displacement vectors; pass align_displacement =
// false to align raw values.
inline WarpingResult dtw_align(const TimeSeries& u, const TimeSeries& w,
                               std::size_t band, bool align_displacement = true) {
    if (u.dim != w.dim) throw std::invalid_argument("dtw_align: dimension mismatch");
    if (u.length() == 0 || w.length() == 0) throw std::invalid_argument("dtw_align: empty series");
    detail::DtwWorkspace ws;
    WarpingResult result;
    detail::PairAlignment a;
    if (align_displacement) {
        const TimeSeries du = detail::displacement_of(u);
        const TimeSeries dw = detail::displacement_of(w);
        a = detail::banded_align(du.values.data(), du.length(), dw.values.data(), dw.length(),
                                 u.dim, band, ws, &result.path);
    } else {
        a = detail::banded_align(u.values.data(), u.length(), w.values.data(), w.length(),
                                 u.dim, band, ws, &result.path);
    }
    result.cost = a.cost;
    result.score = a.score;
    return result;
}

// The |score| similarity of the optimal path together with the path's median
// lag, the concrete realization of the maximal-similarity / best-delay pair.
struct SimMax {
    double similarity = 0.0;
    long delta_t = 0;
};

inline SimMax sim_max(const TimeSeries& u, const TimeSeries& w,
                      std::size_t band, bool align_displacement = true) {
    if (u.dim != w.dim) throw std::invalid_argument("sim_max: dimension mismatch");
    if (u.length() == 0 || w.length() == 0) throw std::invalid_argument("sim_max: empty series");
    detail::DtwWorkspace ws;
    std::vector<long> lags;
    detail::PairAlignment a;
    if (align_displacement) {
        const TimeSeries du = detail::displacement_of(u);
        const TimeSeries dw = detail::displacement_of(w);
        a = detail::banded_align(du.values.data(), du.length(), dw.values.data(), dw.length(),
                                 u.dim, band, ws, nullptr, &lags);
    } else {
        a = detail::banded_align(u.values.data(), u.length(), w.values.data(), w.length(),
                                 u.dim, band, ws, nullptr, &lags);
    }
    std::sort(lags.begin(), lags.end());
    SimMax out;
    out.similarity = std::abs(a.score);
    out.delta_t = lags[(lags.size() - 1) / 2];
    return out;
}

}  // namespace mflica
