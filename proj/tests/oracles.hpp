// Independent reference implementations used only by tests. Each one takes
// the slow exhaustive route so the library's dynamic programming / iterative
// answers can be checked against first principles.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

// Exhaustive minimum-cost monotone banded path between two 1-d series.
// Costs accumulate front-to-back exactly as the library does, so equal-cost
// comparisons are exact in floating point.
struct BruteForceDtw {
    const std::vector<double>& u;
    const std::vector<double>& w;
    long band;
    double best = std::numeric_limits<double>::infinity();

    void run(std::size_t i, std::size_t j, double acc) {
        if (std::labs(static_cast<long>(i) - static_cast<long>(j)) > band) return;
        acc = acc + std::abs(u[i] - w[j]);
        if (acc > best) return;
        if (i + 1 == u.size() && j + 1 == w.size()) {
            best = std::min(best, acc);
            return;
        }
        if (i + 1 < u.size() && j + 1 < w.size()) run(i + 1, j + 1, acc);
        if (j + 1 < w.size()) run(i, j + 1, acc);
        if (i + 1 < u.size()) run(i + 1, j, acc);
    }
};

inline double brute_force_dtw_cost(const std::vector<double>& u, const std::vector<double>& w, long band) {
    BruteForceDtw bf{u, w, band};
    bf.run(0, 0, 0.0);
    return bf.best;
}

// Dense Gaussian elimination solve of the unnormalized weighted PageRank
// system (I - d M^T) pi = (1-d) 1 with M[k][i] = E[k][i] / outdeg(k).
inline std::vector<double> solve_pagerank_dense(const std::vector<double>& adjacency,
                                                std::size_t n, double d) {
    std::vector<double> outdeg(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (adjacency[k * n + i] > 0.0) outdeg[k] += 1.0;

    std::vector<double> A(n * n, 0.0), b(n, 1.0 - d);
    for (std::size_t i = 0; i < n; ++i) {
        A[i * n + i] = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double w = adjacency[k * n + i];
            if (w > 0.0) A[i * n + k] -= d * w / outdeg[k];
        }
    }
    // Partial-pivot elimination.
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[perm[r] * n + col]) > std::abs(A[perm[pivot] * n + col])) pivot = r;
        std::swap(perm[col], perm[pivot]);
        const double diag = A[perm[col] * n + col];
        if (std::abs(diag) < 1e-14) throw std::runtime_error("oracle: singular pagerank system");
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = A[perm[r] * n + col] / diag;
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[perm[r] * n + c] -= factor * A[perm[col] * n + c];
            b[perm[r]] -= factor * b[perm[col]];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double acc = b[perm[ri]];
        for (std::size_t c = ri + 1; c < n; ++c) acc -= A[perm[ri] * n + c] * x[c];
        x[ri] = acc / A[perm[ri] * n + ri];
    }
    return x;
}

// Boolean transitive closure by Floyd-Warshall; reach[a][b] = path a -> b.
inline std::vector<char> transitive_closure(const std::vector<double>& adjacency, std::size_t n) {
    std::vector<char> reach(n * n, 0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) reach[a * n + b] = adjacency[a * n + b] > 0.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t a = 0; a < n; ++a)
            if (reach[a * n + k])
                for (std::size_t b = 0; b < n; ++b)
                    if (reach[k * n + b]) reach[a * n + b] = 1;
    return reach;
}

}  // namespace oracle
