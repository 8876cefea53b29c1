#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "prognet/network.hpp"
#include "prognet/rca.hpp"
#include "prognet/types.hpp"

namespace prognet {

enum class Application { Enhance, Strengthen, Regain, Discover };

inline const char* application_name(Application a) {
    switch (a) {
        case Application::Enhance:    return "Enhance";
        case Application::Strengthen: return "Strengthen";
        case Application::Regain:     return "Regain";
        case Application::Discover:   return "Discover";
    }
    return "?";
}

// Fixed recommendation rule: the link pattern supports what the current
// specialization status allows.
inline Application application_for(SpecPattern status) {
    switch (status) {
        case SpecPattern::Classic:      return Application::Enhance;
        case SpecPattern::Emerging:     return Application::Strengthen;
        case SpecPattern::Disappearing: return Application::Regain;
        case SpecPattern::Absent:       return Application::Discover;
    }
    return Application::Discover;
}

struct DensityValue {
    double density = 0.0;
    bool no_support = false;  // target has no incoming validated AI edge
    // AI sources the country is active in, with aggregated edge weight,
    // sorted by descending weight.
    std::vector<std::pair<SectorRef, double>> contributing;
};

// D_{c,x} = sum_{x' active} B[x'][x] / sum_{x'} B[x'][x] over the AI sources
// with a validated edge into the target, using aggregated weights and the
// final-year activity matrix. No incoming support gives D = 0, flagged.
inline DensityValue compute_density(const SpecMatrix& m_final, const ProgressionNetwork& net,
                                    const std::string& country, const SectorRef& target) {
    auto cit = std::lower_bound(m_final.countries.begin(), m_final.countries.end(), country);
    if (cit == m_final.countries.end() || *cit != country)
        throw Error(ErrorClass::Data, "UnknownCountry", "country not in panel: " + country);
    size_t c = static_cast<size_t>(cit - m_final.countries.begin());

    DensityValue out;
    double numer = 0.0, denom = 0.0;
    for (const auto& e : net.edges) {
        const SectorRef* src = nullptr;
        if (e.target == target && e.source.layer == Layer::AI) src = &e.source;
        else if (!net.directed && e.source == target && e.target.layer == Layer::AI)
            src = &e.target;
        if (!src) continue;
        denom += e.weight;
        SectorRef probe{src->layer, src->code, ""};
        auto sit = std::lower_bound(m_final.sectors.begin(), m_final.sectors.end(), probe);
        bool active = sit != m_final.sectors.end() && *sit == *src &&
                      m_final.m[m_final.idx(c, static_cast<size_t>(
                                                   sit - m_final.sectors.begin()))] != 0;
        if (active) {
            numer += e.weight;
            out.contributing.emplace_back(*src, e.weight);
        }
    }
    if (denom <= 0.0) {
        out.no_support = true;
        return out;
    }
    out.density = numer / denom;
    std::sort(out.contributing.begin(), out.contributing.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
              });
    return out;
}

struct ReportRow {
    SectorRef target;
    double density = 0.0;
    bool no_support = false;
    std::vector<SectorRef> related_ai;  // contributing sources, weight-ranked, capped at 5
    SpecPattern status{};
    Application application{};
};

struct DensityReport {
    std::string country;
    int year = 0;  // final panel year the densities refer to
    std::vector<ReportRow> rows;
};

// Country table in the operational-framework layout: density-ranked
// Goods/Services targets joined with specialization status.
inline DensityReport country_report(const Panel& panel, const ProgressionNetwork& net,
                                    const std::vector<SpecLabel>& labels,
                                    const std::string& country, int top_k,
                                    double min_layer_total = 0.0) {
    if (panel.country_index(country) < 0)
        throw Error(ErrorClass::Data, "UnknownCountry", "country not in panel: " + country);
    if (top_k < 1)
        throw Error(ErrorClass::Config, "InvalidArgument", "top_k must be >= 1");

    SpecMatrix m_final = compute_rca(panel, panel.years.back(), min_layer_total);
    std::map<SectorRef, SpecPattern> status;
    for (const auto& l : labels)
        if (l.country == country) status[l.sector] = l.label;

    DensityReport report;
    report.country = country;
    report.year = panel.years.back();
    for (const auto& sector : panel.sectors) {
        if (sector.layer == Layer::AI) continue;
        DensityValue d = compute_density(m_final, net, country, sector);
        ReportRow row;
        row.target = sector;
        row.density = d.density;
        row.no_support = d.no_support;
        for (size_t i = 0; i < d.contributing.size() && i < 5; ++i)
            row.related_ai.push_back(d.contributing[i].first);
        auto it = status.find(sector);
        row.status = it == status.end() ? SpecPattern::Absent : it->second;
        row.application = application_for(row.status);
        report.rows.push_back(std::move(row));
    }
    std::sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
        if (a.density != b.density) return a.density > b.density;
        return a.target < b.target;
    });
    if (static_cast<int>(report.rows.size()) > top_k) report.rows.resize(top_k);
    return report;
}

struct TopSpecializations {
    std::string country;
    int year = 0;
    // One descending-RCA ranking per layer, ties broken by code.
    std::map<Layer, std::vector<std::pair<SectorRef, double>>> by_layer;
};

inline TopSpecializations top_specializations(const Panel& panel, const std::string& country,
                                              int year, int top_k,
                                              double min_layer_total = 0.0) {
    int c = panel.country_index(country);
    if (c < 0)
        throw Error(ErrorClass::Data, "UnknownCountry", "country not in panel: " + country);
    SpecMatrix s = compute_rca(panel, year, min_layer_total);

    TopSpecializations out;
    out.country = country;
    out.year = year;
    for (size_t x = 0; x < s.sectors.size(); ++x)
        out.by_layer[s.sectors[x].layer].emplace_back(s.sectors[x],
                                                      s.rca[s.idx(static_cast<size_t>(c), x)]);
    for (auto& [layer, ranking] : out.by_layer) {
        std::sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (static_cast<int>(ranking.size()) > top_k) ranking.resize(top_k);
    }
    return out;
}

}  // namespace prognet
