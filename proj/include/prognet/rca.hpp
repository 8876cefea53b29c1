#pragma once

#include <string>
#include <vector>

#include "prognet/panel.hpp"
#include "prognet/types.hpp"

namespace prognet {

struct LayerBlock {
    Layer layer{};
    int begin = 0;  // [begin, end) into the sector axis
    int end = 0;
};

// Per-year specialization matrix: the Balassa index per (country, sector)
// computed within each layer, and its strict binarization m = [rca > 1].
struct SpecMatrix {
    int year = 0;
    std::vector<std::string> countries;
    std::vector<SectorRef> sectors;
    std::vector<double> rca;  // [c][x]
    std::vector<uint8_t> m;   // [c][x]
    std::vector<LayerBlock> layer_blocks;

    size_t idx(size_t c, size_t x) const { return c * sectors.size() + x; }
};

// RCA_{c,x} = (E_cx / sum_x E_cx) / (sum_c E_cx / sum_cx E_cx), all four sums
// ranging over the sectors of x's layer only: AI investment USD and export
// USD are never normalized against each other. A zero country-layer total
// (or one below min_layer_total) and a zero world-sector total both give
// rca = 0.
inline SpecMatrix compute_rca(const Panel& panel, int year, double min_layer_total = 0.0) {
    int t = panel.year_index(year);
    if (t < 0)
        throw Error(ErrorClass::Data, "YearNotInPanel",
                    "year " + std::to_string(year) + " not in panel");

    SpecMatrix s;
    s.year = year;
    s.countries = panel.countries;
    s.sectors = panel.sectors;
    size_t nc = s.countries.size();
    size_t nx = s.sectors.size();
    s.rca.assign(nc * nx, 0.0);
    s.m.assign(nc * nx, 0);

    for (size_t x = 0; x < nx; ++x) {
        if (s.layer_blocks.empty() || s.layer_blocks.back().layer != s.sectors[x].layer)
            s.layer_blocks.push_back({s.sectors[x].layer, static_cast<int>(x), static_cast<int>(x)});
        s.layer_blocks.back().end = static_cast<int>(x) + 1;
    }

    for (const auto& block : s.layer_blocks) {
        std::vector<double> country_total(nc, 0.0);
        std::vector<double> world_sector(block.end - block.begin, 0.0);
        double world_total = 0.0;
        for (size_t c = 0; c < nc; ++c)
            for (int x = block.begin; x < block.end; ++x) {
                double v = panel.value(c, static_cast<size_t>(x), static_cast<size_t>(t));
                country_total[c] += v;
                world_sector[x - block.begin] += v;
                world_total += v;
            }
        if (world_total <= 0) continue;
        for (size_t c = 0; c < nc; ++c) {
            if (country_total[c] <= 0 || country_total[c] < min_layer_total) continue;
            for (int x = block.begin; x < block.end; ++x) {
                double wx = world_sector[x - block.begin];
                if (wx <= 0) continue;
                double v = panel.value(c, static_cast<size_t>(x), static_cast<size_t>(t));
                double r = (v / country_total[c]) / (wx / world_total);
                s.rca[s.idx(c, static_cast<size_t>(x))] = r;
                s.m[s.idx(c, static_cast<size_t>(x))] = r > 1.0 ? 1 : 0;
            }
        }
    }
    return s;
}

enum class SpecPattern { Classic, Absent, Disappearing, Emerging };

inline const char* spec_pattern_name(SpecPattern p) {
    switch (p) {
        case SpecPattern::Classic:      return "Classic";
        case SpecPattern::Absent:       return "Absent";
        case SpecPattern::Disappearing: return "Disappearing";
        case SpecPattern::Emerging:     return "Emerging";
    }
    return "?";
}

inline SpecPattern parse_spec_pattern(const std::string& s) {
    if (s == "Classic") return SpecPattern::Classic;
    if (s == "Absent") return SpecPattern::Absent;
    if (s == "Disappearing") return SpecPattern::Disappearing;
    if (s == "Emerging") return SpecPattern::Emerging;
    throw Error(ErrorClass::Data, "MalformedRow", "unknown specialization label: " + s);
}

// Pure function of the two booleans; exhaustive over the four cases.
inline SpecPattern classify_specialization(bool early_above_one, bool late_above_one) {
    if (early_above_one && late_above_one) return SpecPattern::Classic;
    if (!early_above_one && !late_above_one) return SpecPattern::Absent;
    if (early_above_one) return SpecPattern::Disappearing;
    return SpecPattern::Emerging;
}

struct SpecLabel {
    std::string country;
    SectorRef sector;
    SpecPattern label{};
    double early_avg_rca = 0.0;
    double late_avg_rca = 0.0;
};

// Sub-period averaging is mean-of-yearly-RCAs, not RCA of summed values.
inline std::vector<SpecLabel> label_specializations(const Panel& panel, YearRange early,
                                                    YearRange late,
                                                    double min_layer_total = 0.0) {
    auto check_range = [&](YearRange r, const char* which) {
        if (r.first > r.last)
            throw Error(ErrorClass::Data, "RangeOutsidePanel",
                        std::string(which) + " range is empty");
        for (int y = r.first; y <= r.last; ++y)
            if (panel.year_index(y) < 0)
                throw Error(ErrorClass::Data, "RangeOutsidePanel",
                            std::string(which) + " range year " + std::to_string(y) +
                                " not in panel");
    };
    check_range(early, "early");
    check_range(late, "late");

    size_t nc = panel.countries.size();
    size_t nx = panel.sectors.size();
    std::vector<double> early_sum(nc * nx, 0.0), late_sum(nc * nx, 0.0);
    auto accumulate = [&](YearRange r, std::vector<double>& acc) {
        int n_years = r.last - r.first + 1;
        for (int y = r.first; y <= r.last; ++y) {
            SpecMatrix s = compute_rca(panel, y, min_layer_total);
            for (size_t i = 0; i < acc.size(); ++i) acc[i] += s.rca[i] / n_years;
        }
    };
    accumulate(early, early_sum);
    accumulate(late, late_sum);

    std::vector<SpecLabel> out;
    out.reserve(nc * nx);
    for (size_t c = 0; c < nc; ++c)
        for (size_t x = 0; x < nx; ++x) {
            size_t i = c * nx + x;
            out.push_back({panel.countries[c], panel.sectors[x],
                           classify_specialization(early_sum[i] > 1.0, late_sum[i] > 1.0),
                           early_sum[i], late_sum[i]});
        }
    return out;
}

}  // namespace prognet
