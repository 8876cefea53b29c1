#pragma once

#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "prognet/rca.hpp"
#include "prognet/rng.hpp"
#include "prognet/types.hpp"

namespace prognet {

// Time-lagged conditional co-occurrence from source sectors (rows, observed
// at t) to target sectors (columns, observed at t+delay):
//
//   b[x][x'] = (1/u_x) * sum_c m_t[c][x] * m_delta[c][x'] / d_c
//
// u_x is the source ubiquity at t; d_c is the country's diversification over
// the FULL sector axis at t+delay. Countries with d_c = 0 are dead ends and
// contribute nothing. A source with u_x = 0 has no evidence at all: its row
// is carried as undefined (NaN + mask), never imputed as 0.
struct AssistMatrix {
    int source_year = 0;
    int delay = 0;
    std::vector<std::string> countries;
    std::vector<SectorRef> sources;
    std::vector<SectorRef> targets;
    std::vector<int> source_cols;  // indices into the t sector axis
    std::vector<int> target_cols;  // indices into the t+delay sector axis
    std::vector<double> b;         // [source][target], NaN on undefined rows
    std::vector<uint8_t> row_defined;
    std::vector<int> ubiquity;         // per source, at t
    std::vector<int> diversification;  // per country, at t+delay

    size_t idx(size_t s, size_t t) const { return s * targets.size() + t; }
};

inline std::vector<int> sector_indices(const SpecMatrix& m, const std::set<Layer>& layers) {
    std::vector<int> out;
    for (size_t x = 0; x < m.sectors.size(); ++x)
        if (layers.count(m.sectors[x].layer)) out.push_back(static_cast<int>(x));
    return out;
}

inline AssistMatrix assist(const SpecMatrix& m_t, const SpecMatrix& m_delta,
                           const std::vector<int>& source_cols,
                           const std::vector<int>& target_cols) {
    if (m_t.countries != m_delta.countries)
        throw Error(ErrorClass::Data, "CountryAxisMismatch",
                    "assist inputs must share the country axis");
    if (source_cols.empty())
        throw Error(ErrorClass::Data, "EmptySourceSet", "assist needs at least one source");
    if (m_delta.year < m_t.year)
        throw Error(ErrorClass::Data, "CountryAxisMismatch",
                    "target matrix year precedes source matrix year");

    size_t nc = m_t.countries.size();
    size_t ns = source_cols.size();
    size_t nt = target_cols.size();

    AssistMatrix a;
    a.source_year = m_t.year;
    a.delay = m_delta.year - m_t.year;
    a.countries = m_t.countries;
    a.source_cols = source_cols;
    a.target_cols = target_cols;
    for (int x : source_cols) a.sources.push_back(m_t.sectors[static_cast<size_t>(x)]);
    for (int x : target_cols) a.targets.push_back(m_delta.sectors[static_cast<size_t>(x)]);

    a.diversification.assign(nc, 0);
    for (size_t c = 0; c < nc; ++c)
        for (size_t x = 0; x < m_delta.sectors.size(); ++x)
            a.diversification[c] += m_delta.m[m_delta.idx(c, x)];

    a.ubiquity.assign(ns, 0);
    a.row_defined.assign(ns, 0);
    a.b.assign(ns * nt, std::numeric_limits<double>::quiet_NaN());

    for (size_t s = 0; s < ns; ++s) {
        size_t sx = static_cast<size_t>(source_cols[s]);
        for (size_t c = 0; c < nc; ++c) a.ubiquity[s] += m_t.m[m_t.idx(c, sx)];
        if (a.ubiquity[s] == 0) continue;
        a.row_defined[s] = 1;
        for (size_t t = 0; t < nt; ++t) {
            size_t tx = static_cast<size_t>(target_cols[t]);
            double sum = 0.0;
            for (size_t c = 0; c < nc; ++c) {
                if (!m_t.m[m_t.idx(c, sx)] || a.diversification[c] == 0) continue;
                if (m_delta.m[m_delta.idx(c, tx)]) sum += 1.0 / a.diversification[c];
            }
            a.b[a.idx(s, t)] = sum / a.ubiquity[s];
        }
    }
    return a;
}

// Monte Carlo mirror of the closed form: a walker starts at `source_col`,
// steps to a uniform country among those specialized in it at t, then to a
// uniform sector among those the country is specialized in at t+delay.
// Returns empirical arrival frequencies over the full t+delay sector axis;
// walks that hit a dead-end country (d_c = 0) arrive nowhere. Test oracle
// only; the pipeline never calls it.
inline std::vector<double> random_walk_oracle(const SpecMatrix& m_t, const SpecMatrix& m_delta,
                                              int source_col, long long n_walks,
                                              uint64_t seed) {
    if (m_t.countries != m_delta.countries)
        throw Error(ErrorClass::Data, "CountryAxisMismatch",
                    "oracle inputs must share the country axis");
    if (n_walks < 1)
        throw Error(ErrorClass::Data, "InvalidArgument", "n_walks must be >= 1");

    size_t nc = m_t.countries.size();
    size_t sx = static_cast<size_t>(source_col);
    std::vector<int> active_countries;
    for (size_t c = 0; c < nc; ++c)
        if (m_t.m[m_t.idx(c, sx)]) active_countries.push_back(static_cast<int>(c));
    if (active_countries.empty())
        throw Error(ErrorClass::Data, "SourceNotActive",
                    "source has no specialized country at t");

    std::vector<std::vector<int>> country_targets(nc);
    for (int c : active_countries)
        for (size_t x = 0; x < m_delta.sectors.size(); ++x)
            if (m_delta.m[m_delta.idx(static_cast<size_t>(c), x)])
                country_targets[static_cast<size_t>(c)].push_back(static_cast<int>(x));

    std::vector<long long> hits(m_delta.sectors.size(), 0);
    auto eng = make_engine(seed, 0);
    for (long long w = 0; w < n_walks; ++w) {
        int c = active_countries[uniform_below(eng, active_countries.size())];
        const auto& targets = country_targets[static_cast<size_t>(c)];
        if (targets.empty()) continue;  // dead end, no arrival
        ++hits[static_cast<size_t>(targets[uniform_below(eng, targets.size())])];
    }
    std::vector<double> freq(hits.size(), 0.0);
    for (size_t i = 0; i < hits.size(); ++i)
        freq[i] = static_cast<double>(hits[i]) / static_cast<double>(n_walks);
    return freq;
}

}  // namespace prognet
