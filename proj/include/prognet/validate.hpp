#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "prognet/assist.hpp"
#include "prognet/bicm.hpp"
#include "prognet/parallel.hpp"
#include "prognet/types.hpp"

namespace prognet {

struct ValidationResult {
    SectorRef source;
    SectorRef target;
    double observed_b = 0.0;
    double p_value = 1.0;
    int n_samples = 0;
    bool validated = false;
};

struct ValidateOptions {
    int n_samples = 1000;
    double alpha = 0.05;
    uint64_t seed = 0;
    bool fdr = false;  // Benjamini-Hochberg across the link list, off by default
};

namespace detail {

// Assist rows recomputed on one null pair, using the null pair's own
// ubiquities and diversifications. Undefined null rows count as 0.
inline void null_assist_rows(const BinaryMatrix& m_t, const BinaryMatrix& m_delta,
                             const std::vector<int>& source_cols,
                             const std::vector<int>& target_cols,
                             std::vector<double>& out) {
    int nc = m_t.rows;
    std::vector<int> div(nc, 0);
    for (int c = 0; c < nc; ++c)
        for (int x = 0; x < m_delta.cols; ++x) div[c] += m_delta.at(c, x);

    size_t nt = target_cols.size();
    std::fill(out.begin(), out.end(), 0.0);
    for (size_t s = 0; s < source_cols.size(); ++s) {
        int sx = source_cols[s];
        int ubiq = 0;
        for (int c = 0; c < nc; ++c) ubiq += m_t.at(c, sx);
        if (ubiq == 0) continue;  // undefined row: stays 0 for the comparison
        for (int c = 0; c < nc; ++c) {
            if (!m_t.at(c, sx) || div[c] == 0) continue;
            double contrib = 1.0 / div[c];
            for (size_t t = 0; t < nt; ++t)
                if (m_delta.at(c, target_cols[t])) out[s * nt + t] += contrib;
        }
        for (size_t t = 0; t < nt; ++t) out[s * nt + t] /= ubiq;
    }
}

}  // namespace detail

// One-sided right-tail Monte Carlo test of every defined link against the
// null ensemble, with the add-one estimator p = (1 + #{null >= obs}) / (1 + n).
// Tail counts are integers keyed by sample index, so parallel and serial runs
// produce identical p-values.
inline std::vector<ValidationResult> validate(const AssistMatrix& observed,
                                              const BicmFit& fit_t, const BicmFit& fit_delta,
                                              const ValidateOptions& opt) {
    if (opt.n_samples < 1)
        throw Error(ErrorClass::Data, "InvalidArgument", "n_samples must be >= 1");
    if (fit_t.rows != static_cast<int>(observed.countries.size()) ||
        fit_delta.rows != static_cast<int>(observed.countries.size()))
        throw Error(ErrorClass::Data, "CountryAxisMismatch",
                    "fit row count does not match observed country axis");

    size_t ns = observed.sources.size();
    size_t nt = observed.targets.size();
    NullSampler sampler(fit_t, fit_delta, opt.seed);

    unsigned workers = thread_count();
    std::vector<std::vector<int64_t>> counts(workers, std::vector<int64_t>(ns * nt, 0));
    parallel_blocks(static_cast<size_t>(opt.n_samples),
                    [&](size_t begin, size_t end, unsigned block) {
        std::vector<double> null_b(ns * nt, 0.0);
        auto& local = counts[block];
        for (size_t i = begin; i < end; ++i) {
            auto [m_t, m_delta] = sampler.sample(i);
            detail::null_assist_rows(m_t, m_delta, observed.source_cols, observed.target_cols,
                                     null_b);
            for (size_t s = 0; s < ns; ++s) {
                if (!observed.row_defined[s]) continue;
                for (size_t t = 0; t < nt; ++t)
                    if (null_b[s * nt + t] >= observed.b[observed.idx(s, t)])
                        ++local[s * nt + t];
            }
        }
    });
    for (unsigned w = 1; w < workers; ++w)
        for (size_t i = 0; i < counts[0].size(); ++i) counts[0][i] += counts[w][i];

    std::vector<ValidationResult> results;
    results.reserve(ns * nt);
    for (size_t s = 0; s < ns; ++s) {
        if (!observed.row_defined[s]) continue;
        for (size_t t = 0; t < nt; ++t) {
            ValidationResult r;
            r.source = observed.sources[s];
            r.target = observed.targets[t];
            r.observed_b = observed.b[observed.idx(s, t)];
            r.n_samples = opt.n_samples;
            r.p_value = static_cast<double>(1 + counts[0][s * nt + t]) /
                        static_cast<double>(1 + opt.n_samples);
            results.push_back(r);
        }
    }

    if (!opt.fdr) {
        for (auto& r : results) r.validated = r.p_value <= opt.alpha;
    } else {
        std::vector<double> sorted;
        sorted.reserve(results.size());
        for (const auto& r : results) sorted.push_back(r.p_value);
        std::sort(sorted.begin(), sorted.end());
        double threshold = 0.0;
        size_t m = sorted.size();
        for (size_t k = m; k >= 1; --k) {
            if (sorted[k - 1] <= opt.alpha * static_cast<double>(k) / static_cast<double>(m)) {
                threshold = sorted[k - 1];
                break;
            }
        }
        for (auto& r : results) r.validated = threshold > 0.0 && r.p_value <= threshold;
    }
    return results;
}

}  // namespace prognet
