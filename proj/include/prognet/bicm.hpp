#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "prognet/rng.hpp"
#include "prognet/types.hpp"

namespace prognet {

struct BinaryMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<uint8_t> v;  // row-major

    BinaryMatrix() = default;
    BinaryMatrix(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0) {}

    uint8_t at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
    void set(int r, int c, uint8_t val) { v[static_cast<size_t>(r) * cols + c] = val; }

    std::vector<int> row_sums() const {
        std::vector<int> d(rows, 0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) d[r] += at(r, c);
        return d;
    }
    std::vector<int> col_sums() const {
        std::vector<int> u(cols, 0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) u[c] += at(r, c);
        return u;
    }
};

// Maximum-entropy bipartite ensemble constrained to reproduce the observed
// degree sequences on average: p[r][c] = x_r y_c / (1 + x_r y_c) with
// sum_c p[r][c] = d_r and sum_r p[r][c] = u_c. link_prob is authoritative;
// fitnesses are 0 / +inf on lines resolved by the degeneracy rule.
struct BicmFit {
    int rows = 0;
    int cols = 0;
    std::vector<double> row_fitness;
    std::vector<double> col_fitness;
    std::vector<double> link_prob;  // [r][c]
    double residual = 0.0;
    int iterations = 0;

    double p(int r, int c) const { return link_prob[static_cast<size_t>(r) * cols + c]; }
};

namespace detail {

// Peels saturated constraints: an all-zero line gets p = 0, a line that is
// full with respect to the still-active other axis gets p = 1 and the other
// axis's degrees are reduced. Cascades until only a strictly interior core
// remains; every peeled constraint is satisfied exactly.
struct PeelState {
    std::vector<uint8_t> row_active, col_active;
    std::vector<int> d, u;  // degrees within the active core
    int active_rows = 0, active_cols = 0;
};

inline PeelState peel_degenerate(const BinaryMatrix& m, BicmFit& fit) {
    PeelState st;
    st.row_active.assign(m.rows, 1);
    st.col_active.assign(m.cols, 1);
    st.d = m.row_sums();
    st.u = m.col_sums();
    st.active_rows = m.rows;
    st.active_cols = m.cols;

    bool changed = true;
    while (changed) {
        changed = false;
        for (int r = 0; r < m.rows; ++r) {
            if (!st.row_active[r]) continue;
            if (st.d[r] == 0 || st.d[r] == st.active_cols) {
                bool full = st.d[r] != 0;
                for (int c = 0; c < m.cols; ++c) {
                    if (!st.col_active[c]) continue;
                    fit.link_prob[static_cast<size_t>(r) * m.cols + c] = full ? 1.0 : 0.0;
                    if (full) --st.u[c];
                }
                fit.row_fitness[r] = full ? std::numeric_limits<double>::infinity() : 0.0;
                st.row_active[r] = 0;
                --st.active_rows;
                changed = true;
            }
        }
        for (int c = 0; c < m.cols; ++c) {
            if (!st.col_active[c]) continue;
            if (st.u[c] == 0 || st.u[c] == st.active_rows) {
                bool full = st.u[c] != 0;
                for (int r = 0; r < m.rows; ++r) {
                    if (!st.row_active[r]) continue;
                    fit.link_prob[static_cast<size_t>(r) * m.cols + c] = full ? 1.0 : 0.0;
                    if (full) --st.d[r];
                }
                fit.col_fitness[c] = full ? std::numeric_limits<double>::infinity() : 0.0;
                st.col_active[c] = 0;
                --st.active_cols;
                changed = true;
            }
        }
    }
    return st;
}

}  // namespace detail

// Damped fixed-point solver for the likelihood conditions, under-relaxation
// 0.5, residual measured as the max absolute expected-degree error over all
// rows and columns of the full matrix (peeled lines included).
inline BicmFit fit_bicm(const BinaryMatrix& m, double tol = 1e-8, int max_iters = 10000) {
    if (m.rows == 0 || m.cols == 0)
        throw Error(ErrorClass::Data, "EmptyMatrix", "fit_bicm needs a nonempty matrix");

    BicmFit fit;
    fit.rows = m.rows;
    fit.cols = m.cols;
    fit.row_fitness.assign(m.rows, 0.0);
    fit.col_fitness.assign(m.cols, 0.0);
    fit.link_prob.assign(static_cast<size_t>(m.rows) * m.cols, 0.0);

    detail::PeelState st = detail::peel_degenerate(m, fit);

    if (st.active_rows > 0 && st.active_cols > 0) {
        double total = 0.0;
        for (int r = 0; r < m.rows; ++r)
            if (st.row_active[r]) total += st.d[r];
        double scale = std::sqrt(std::max(total, 1.0));
        for (int r = 0; r < m.rows; ++r)
            if (st.row_active[r]) fit.row_fitness[r] = st.d[r] / scale;
        for (int c = 0; c < m.cols; ++c)
            if (st.col_active[c]) fit.col_fitness[c] = st.u[c] / scale;

        double residual = std::numeric_limits<double>::infinity();
        int iter = 0;
        for (; iter < max_iters && residual > tol; ++iter) {
            for (int r = 0; r < m.rows; ++r) {
                if (!st.row_active[r]) continue;
                double denom = 0.0;
                for (int c = 0; c < m.cols; ++c) {
                    if (!st.col_active[c]) continue;
                    denom += fit.col_fitness[c] /
                             (1.0 + fit.row_fitness[r] * fit.col_fitness[c]);
                }
                double prop = st.d[r] / denom;
                fit.row_fitness[r] = 0.5 * fit.row_fitness[r] + 0.5 * prop;
            }
            for (int c = 0; c < m.cols; ++c) {
                if (!st.col_active[c]) continue;
                double denom = 0.0;
                for (int r = 0; r < m.rows; ++r) {
                    if (!st.row_active[r]) continue;
                    denom += fit.row_fitness[r] /
                             (1.0 + fit.row_fitness[r] * fit.col_fitness[c]);
                }
                double prop = st.u[c] / denom;
                fit.col_fitness[c] = 0.5 * fit.col_fitness[c] + 0.5 * prop;
            }
            residual = 0.0;
            for (int r = 0; r < m.rows; ++r) {
                if (!st.row_active[r]) continue;
                double sum = 0.0;
                for (int c = 0; c < m.cols; ++c) {
                    if (!st.col_active[c]) continue;
                    double xy = fit.row_fitness[r] * fit.col_fitness[c];
                    sum += xy / (1.0 + xy);
                }
                residual = std::max(residual, std::abs(sum - st.d[r]));
            }
            for (int c = 0; c < m.cols; ++c) {
                if (!st.col_active[c]) continue;
                double sum = 0.0;
                for (int r = 0; r < m.rows; ++r) {
                    if (!st.row_active[r]) continue;
                    double xy = fit.row_fitness[r] * fit.col_fitness[c];
                    sum += xy / (1.0 + xy);
                }
                residual = std::max(residual, std::abs(sum - st.u[c]));
            }
        }
        fit.iterations = iter;
        if (residual > tol)
            throw Error(ErrorClass::Convergence, "IterationLimit",
                        "BiCM fit residual " + std::to_string(residual) + " after " +
                            std::to_string(max_iters) + " iterations");
        for (int r = 0; r < m.rows; ++r) {
            if (!st.row_active[r]) continue;
            for (int c = 0; c < m.cols; ++c) {
                if (!st.col_active[c]) continue;
                double xy = fit.row_fitness[r] * fit.col_fitness[c];
                fit.link_prob[static_cast<size_t>(r) * m.cols + c] = xy / (1.0 + xy);
            }
        }
    }

    // Full-matrix residual against the original degree sequences.
    std::vector<int> d_obs = m.row_sums();
    std::vector<int> u_obs = m.col_sums();
    double res = 0.0;
    for (int r = 0; r < m.rows; ++r) {
        double sum = 0.0;
        for (int c = 0; c < m.cols; ++c) sum += fit.p(r, c);
        res = std::max(res, std::abs(sum - d_obs[r]));
    }
    for (int c = 0; c < m.cols; ++c) {
        double sum = 0.0;
        for (int r = 0; r < m.rows; ++r) sum += fit.p(r, c);
        res = std::max(res, std::abs(sum - u_obs[c]));
    }
    fit.residual = res;
    return fit;
}

// One ensemble member: every cell an independent Bernoulli(p[r][c]). Cells
// are drawn row-major so the stream is a pure function of the engine state.
inline BinaryMatrix draw_matrix(const BicmFit& fit, std::mt19937_64& eng) {
    BinaryMatrix m(fit.rows, fit.cols);
    for (size_t i = 0; i < fit.link_prob.size(); ++i)
        m.v[i] = uniform01(eng) < fit.link_prob[i] ? 1 : 0;
    return m;
}

// Reproducible stream of paired null matrices: sample(i) depends only on
// (seed, i), and the two time layers are sampled independently.
class NullSampler {
public:
    NullSampler(const BicmFit& fit_t, const BicmFit& fit_delta, uint64_t seed)
        : fit_t_(&fit_t), fit_delta_(&fit_delta), seed_(seed) {
        if (fit_t.rows != fit_delta.rows)
            throw Error(ErrorClass::Data, "CountryAxisMismatch",
                        "null fits must share the country axis");
    }

    std::pair<BinaryMatrix, BinaryMatrix> sample(uint64_t index) const {
        auto eng = make_engine(seed_, index);
        BinaryMatrix a = draw_matrix(*fit_t_, eng);
        BinaryMatrix b = draw_matrix(*fit_delta_, eng);
        return {std::move(a), std::move(b)};
    }

private:
    const BicmFit* fit_t_;
    const BicmFit* fit_delta_;
    uint64_t seed_;
};

}  // namespace prognet
