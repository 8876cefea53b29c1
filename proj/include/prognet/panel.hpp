#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "prognet/csv.hpp"
#include "prognet/types.hpp"
#include "prognet/util.hpp"

namespace prognet {

// Maps raw input labels (e.g. the curated AI sub-sector vocabulary, 4-digit
// SITC codes) onto canonical SectorRefs. Lookups fall back to the canonical
// code itself, so re-loading emitted panels needs no extra mapping rows.
struct Taxonomy {
    std::vector<SectorRef> sectors;  // sorted by (layer, code)
    std::map<std::pair<Layer, std::string>, std::string> raw_to_code;

    const SectorRef* find(Layer layer, const std::string& code) const {
        SectorRef probe{layer, code, ""};
        auto it = std::lower_bound(sectors.begin(), sectors.end(), probe);
        if (it != sectors.end() && it->layer == layer && it->code == code) return &*it;
        return nullptr;
    }

    // Raw label or canonical code -> SectorRef; nullptr when unmapped.
    const SectorRef* resolve(Layer layer, const std::string& label) const {
        auto it = raw_to_code.find({layer, label});
        if (it != raw_to_code.end()) return find(layer, it->second);
        return find(layer, label);
    }
};

inline bool valid_country_code(const std::string& s) {
    if (s.size() != 3) return false;
    for (char c : s)
        if (c < 'A' || c > 'Z') return false;
    return true;
}

inline bool valid_sector_code(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

// Taxonomy CSV schema: layer,raw_label,code,name
inline Taxonomy load_taxonomy(const std::string& path) {
    auto in = open_input(path);
    Taxonomy tax;
    std::map<std::pair<Layer, std::string>, std::string> code_to_name;
    for_each_csv_row(in, "layer,raw_label,code,name",
                     [&](const std::vector<std::string>& f, size_t line_no) {
        if (f.size() != 4)
            throw Error(ErrorClass::Data, "MalformedRow",
                        path + ": wrong field count on line " + std::to_string(line_no));
        Layer layer = parse_layer(f[0]);
        const std::string& raw = f[1];
        const std::string& code = f[2];
        const std::string& name = f[3];
        if (!valid_sector_code(code))
            throw Error(ErrorClass::Data, "MalformedRow",
                        path + ": bad sector code '" + code + "' on line " + std::to_string(line_no));
        auto key = std::make_pair(layer, code);
        auto [it, fresh] = code_to_name.emplace(key, name);
        if (!fresh && it->second != name)
            throw Error(ErrorClass::Data, "TaxonomyConflict",
                        path + ": code '" + code + "' has conflicting names");
        auto [rit, rfresh] = tax.raw_to_code.emplace(std::make_pair(layer, raw), code);
        if (!rfresh && rit->second != code)
            throw Error(ErrorClass::Data, "TaxonomyConflict",
                        path + ": raw label '" + raw + "' maps to two codes");
    });
    if (code_to_name.empty())
        throw Error(ErrorClass::Data, "EmptyPanel", path + ": taxonomy has no rows");
    for (const auto& [key, name] : code_to_name)
        tax.sectors.push_back(SectorRef{key.first, key.second, name});
    return tax;
}

// Dense country x sector x year tensor of nonnegative USD values. Absent
// observations are zero for all math; `present` keeps the raw coverage so
// downstream reports can tell "zero" from "not reported".
struct Panel {
    std::vector<std::string> countries;  // sorted ISO-3
    std::vector<SectorRef> sectors;      // sorted by (layer, code)
    std::vector<int> years;              // ascending
    std::vector<double> values;          // [c][x][t]
    std::vector<uint8_t> present;        // [c][x][t]

    size_t idx(size_t c, size_t x, size_t t) const {
        return (c * sectors.size() + x) * years.size() + t;
    }
    double value(size_t c, size_t x, size_t t) const { return values[idx(c, x, t)]; }

    int country_index(const std::string& iso) const {
        auto it = std::lower_bound(countries.begin(), countries.end(), iso);
        if (it == countries.end() || *it != iso) return -1;
        return static_cast<int>(it - countries.begin());
    }
    int sector_index(const SectorRef& s) const {
        auto it = std::lower_bound(sectors.begin(), sectors.end(), s);
        if (it == sectors.end() || !(*it == s)) return -1;
        return static_cast<int>(it - sectors.begin());
    }
    int year_index(int year) const {
        auto it = std::lower_bound(years.begin(), years.end(), year);
        if (it == years.end() || *it != year) return -1;
        return static_cast<int>(it - years.begin());
    }

    std::set<Layer> layers() const {
        std::set<Layer> out;
        for (const auto& s : sectors) out.insert(s.layer);
        return out;
    }
};

// Long CSV schema: country,sector,year,value. Rows mapping to the same
// (country, sector, year) after taxonomy aggregation are summed.
inline Panel load_panel(const std::string& path, Layer layer, const Taxonomy& taxonomy) {
    auto in = open_input(path);
    // (country, sector, year) -> value accumulated while streaming
    std::map<std::tuple<std::string, SectorRef, int>, double> cells;
    size_t rows = for_each_csv_row(in, "country,sector,year,value",
                                   [&](const std::vector<std::string>& f, size_t line_no) {
        if (f.size() != 4)
            throw Error(ErrorClass::Data, "MalformedRow",
                        path + ": wrong field count on line " + std::to_string(line_no));
        const std::string& country = f[0];
        if (!valid_country_code(country))
            throw Error(ErrorClass::Data, "MalformedRow",
                        path + ": bad country code '" + country + "' on line " +
                            std::to_string(line_no));
        const SectorRef* sector = taxonomy.resolve(layer, f[1]);
        if (!sector)
            throw Error(ErrorClass::Data, "UnknownSector",
                        path + ": sector '" + f[1] + "' not in taxonomy (line " +
                            std::to_string(line_no) + ")");
        long long year = parse_int(f[2], "year");
        if (year < 1000 || year > 9999)
            throw Error(ErrorClass::Data, "MalformedRow",
                        path + ": bad year '" + f[2] + "' on line " + std::to_string(line_no));
        double value = parse_double(f[3], "value");
        if (!std::isfinite(value))
            throw Error(ErrorClass::Data, "MalformedRow",
                        path + ": non-finite value on line " + std::to_string(line_no));
        if (value < 0)
            throw Error(ErrorClass::Data, "NegativeValue",
                        path + ": negative value on line " + std::to_string(line_no));
        cells[{country, *sector, static_cast<int>(year)}] += value;
    });
    if (rows == 0)
        throw Error(ErrorClass::Data, "EmptyPanel", path + ": no data rows");

    std::set<std::string> countries;
    std::set<SectorRef> sectors;
    std::set<int> years;
    for (const auto& [key, value] : cells) {
        countries.insert(std::get<0>(key));
        sectors.insert(std::get<1>(key));
        years.insert(std::get<2>(key));
    }
    Panel p;
    p.countries.assign(countries.begin(), countries.end());
    p.sectors.assign(sectors.begin(), sectors.end());
    p.years.assign(years.begin(), years.end());
    p.values.assign(p.countries.size() * p.sectors.size() * p.years.size(), 0.0);
    p.present.assign(p.values.size(), 0);
    for (const auto& [key, value] : cells) {
        size_t c = static_cast<size_t>(p.country_index(std::get<0>(key)));
        size_t x = static_cast<size_t>(p.sector_index(std::get<1>(key)));
        size_t t = static_cast<size_t>(p.year_index(std::get<2>(key)));
        p.values[p.idx(c, x, t)] = value;
        p.present[p.idx(c, x, t)] = 1;
    }
    return p;
}

// Concatenates layer panels into the universal panel: common countries,
// common years, union of sectors. Layer mixing happens only here.
inline Panel align(const std::vector<Panel>& panels) {
    if (panels.size() < 2)
        throw Error(ErrorClass::Data, "TooFewPanels", "align needs at least two panels");
    std::set<Layer> seen;
    for (const auto& p : panels)
        for (Layer l : p.layers())
            if (!seen.insert(l).second)
                throw Error(ErrorClass::Data, "LayerOverlap",
                            std::string("layer ") + layer_name(l) + " appears in two panels");

    std::set<std::string> countries(panels[0].countries.begin(), panels[0].countries.end());
    std::set<int> years(panels[0].years.begin(), panels[0].years.end());
    for (size_t i = 1; i < panels.size(); ++i) {
        std::set<std::string> ci;
        for (const auto& c : panels[i].countries)
            if (countries.count(c)) ci.insert(c);
        countries.swap(ci);
        std::set<int> yi;
        for (int y : panels[i].years)
            if (years.count(y)) yi.insert(y);
        years.swap(yi);
    }
    if (countries.empty())
        throw Error(ErrorClass::Data, "NoCommonCountries", "no country present in every panel");
    if (years.empty())
        throw Error(ErrorClass::Data, "NoCommonYears", "no year present in every panel");

    Panel out;
    out.countries.assign(countries.begin(), countries.end());
    out.years.assign(years.begin(), years.end());
    std::set<SectorRef> sectors;
    for (const auto& p : panels) sectors.insert(p.sectors.begin(), p.sectors.end());
    out.sectors.assign(sectors.begin(), sectors.end());
    out.values.assign(out.countries.size() * out.sectors.size() * out.years.size(), 0.0);
    out.present.assign(out.values.size(), 0);

    for (const auto& p : panels) {
        for (size_t c = 0; c < out.countries.size(); ++c) {
            int pc = p.country_index(out.countries[c]);
            if (pc < 0) continue;
            for (size_t x = 0; x < p.sectors.size(); ++x) {
                int ox = out.sector_index(p.sectors[x]);
                for (size_t t = 0; t < out.years.size(); ++t) {
                    int pt = p.year_index(out.years[t]);
                    if (pt < 0) continue;
                    size_t src = p.idx(static_cast<size_t>(pc), x, static_cast<size_t>(pt));
                    size_t dst = out.idx(c, static_cast<size_t>(ox), t);
                    out.values[dst] = p.values[src];
                    out.present[dst] = p.present[src];
                }
            }
        }
    }
    return out;
}

// Emits one layer in the long CSV schema with canonical codes. Only present
// cells are written, so load_panel(write_panel_csv(p)) round-trips exactly.
inline void write_panel_csv(const Panel& panel, Layer layer, std::ostream& out) {
    out << "country,sector,year,value\n";
    for (size_t c = 0; c < panel.countries.size(); ++c)
        for (size_t x = 0; x < panel.sectors.size(); ++x) {
            if (panel.sectors[x].layer != layer) continue;
            for (size_t t = 0; t < panel.years.size(); ++t) {
                size_t i = panel.idx(c, x, t);
                if (!panel.present[i]) continue;
                out << csv_join({panel.countries[c], panel.sectors[x].code,
                                 std::to_string(panel.years[t]), format_double(panel.values[i])})
                    << "\n";
            }
        }
}

}  // namespace prognet
