#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "prognet/assist.hpp"
#include "prognet/bicm.hpp"
#include "prognet/csv.hpp"
#include "prognet/rca.hpp"
#include "prognet/rng.hpp"
#include "prognet/types.hpp"
#include "prognet/util.hpp"
#include "prognet/validate.hpp"

namespace prognet {

struct Edge {
    SectorRef source;
    SectorRef target;
    double weight = 0.0;          // mean observed b over the validated year-pairs
    int validation_count = 0;     // number of year-pairs in which the link validated
    std::vector<int> year_pairs;  // the source year t of each validated (t, t+delay)
};

// Time-independent aggregation of per-year-pair validations. Undirected iff
// delay == 0; undirected edges are stored canonically with source <= target.
struct ProgressionNetwork {
    int delay = 0;
    bool directed = true;
    std::vector<SectorRef> nodes;  // candidate universe, sorted by (layer, code)
    std::vector<Edge> edges;       // sorted by (source, target)
};

struct BuildOptions {
    int delay = 3;
    double alpha = 0.05;
    int n_samples = 1000;
    uint64_t seed = 7;
    int min_validations = 1;
    bool fdr = false;
    bool include_self_links = false;
    bool weight_all_pairs = false;  // average over all defined year-pairs, not validated only
    double min_layer_total = 0.0;
};

// Runs assist + BiCM validation over every (t, t+delay) pair in the panel and
// aggregates surviving links. BiCM fits are per year over the full binary
// matrix and shared between the pairs a year participates in.
inline ProgressionNetwork build_progression(const Panel& panel,
                                            const std::set<Layer>& source_layers,
                                            const std::set<Layer>& target_layers,
                                            const BuildOptions& opt) {
    std::vector<int> start_years;
    for (int y : panel.years)
        if (panel.year_index(y + opt.delay) >= 0) start_years.push_back(y);
    if (start_years.empty())
        throw Error(ErrorClass::Data, "InsufficientYears",
                    "panel has no (t, t+" + std::to_string(opt.delay) + ") year pair");

    std::map<int, SpecMatrix> spec_cache;
    std::map<int, BicmFit> fit_cache;
    auto spec_for = [&](int year) -> const SpecMatrix& {
        auto it = spec_cache.find(year);
        if (it == spec_cache.end())
            it = spec_cache.emplace(year, compute_rca(panel, year, opt.min_layer_total)).first;
        return it->second;
    };
    auto fit_for = [&](int year) -> const BicmFit& {
        auto it = fit_cache.find(year);
        if (it == fit_cache.end()) {
            const SpecMatrix& s = spec_for(year);
            BinaryMatrix m(static_cast<int>(s.countries.size()),
                           static_cast<int>(s.sectors.size()));
            m.v = s.m;
            it = fit_cache.emplace(year, fit_bicm(m)).first;
        }
        return it->second;
    };

    bool directed = opt.delay != 0;
    struct Agg {
        double weight_sum = 0.0;
        int count = 0;
        std::vector<int> years;
        double all_sum = 0.0;
        int all_n = 0;
    };
    std::map<std::pair<SectorRef, SectorRef>, Agg> agg;

    for (int t : start_years) {
        const SpecMatrix& m_t = spec_for(t);
        const SpecMatrix& m_delta = spec_for(t + opt.delay);
        std::vector<int> src_cols = sector_indices(m_t, source_layers);
        std::vector<int> tgt_cols = sector_indices(m_delta, target_layers);
        if (src_cols.empty() || tgt_cols.empty())
            throw Error(ErrorClass::Data, "EmptySourceSet",
                        "no sectors in the requested source/target layers");
        AssistMatrix a = assist(m_t, m_delta, src_cols, tgt_cols);

        ValidateOptions vopt;
        vopt.n_samples = opt.n_samples;
        vopt.alpha = opt.alpha;
        vopt.fdr = opt.fdr;
        vopt.seed = derive_seed(derive_seed(opt.seed, static_cast<uint64_t>(opt.delay)),
                                static_cast<uint64_t>(t));
        std::vector<ValidationResult> results = validate(a, fit_for(t), fit_for(t + opt.delay), vopt);

        if (directed) {
            for (const auto& r : results) {
                if (!opt.include_self_links && r.source == r.target) continue;
                auto& entry = agg[{r.source, r.target}];
                entry.all_sum += r.observed_b;
                entry.all_n += 1;
                if (r.validated) {
                    entry.weight_sum += r.observed_b;
                    entry.count += 1;
                    entry.years.push_back(t);
                }
            }
        } else {
            // Merge the two directions of each unordered pair: validated when
            // either direction validates, weight = mean of the two entries
            // (they obey u_x b_xy = u_y b_yx, so this is the canonical value).
            std::map<std::pair<SectorRef, SectorRef>, const ValidationResult*> by_pair;
            for (const auto& r : results) by_pair[{r.source, r.target}] = &r;
            for (const auto& [key, r] : by_pair) {
                if (!(key.first < key.second)) continue;  // visit each pair once, skip self
                auto rev = by_pair.find({key.second, key.first});
                if (rev == by_pair.end()) continue;  // one side undefined: no evidence
                if (!opt.include_self_links && key.first == key.second) continue;
                double sym = 0.5 * (r->observed_b + rev->second->observed_b);
                auto& entry = agg[key];
                entry.all_sum += sym;
                entry.all_n += 1;
                if (r->validated || rev->second->validated) {
                    entry.weight_sum += sym;
                    entry.count += 1;
                    entry.years.push_back(t);
                }
            }
        }
    }

    ProgressionNetwork net;
    net.delay = opt.delay;
    net.directed = directed;
    std::set<SectorRef> nodes;
    for (const auto& s : panel.sectors)
        if (source_layers.count(s.layer) || target_layers.count(s.layer)) nodes.insert(s);
    net.nodes.assign(nodes.begin(), nodes.end());
    for (const auto& [key, entry] : agg) {
        if (entry.count < opt.min_validations || entry.count == 0) continue;
        Edge e;
        e.source = key.first;
        e.target = key.second;
        e.validation_count = entry.count;
        e.year_pairs = entry.years;
        e.weight = opt.weight_all_pairs ? entry.all_sum / entry.all_n
                                        : entry.weight_sum / entry.count;
        net.edges.push_back(std::move(e));
    }
    return net;
}

struct NodeSummaryRow {
    SectorRef sector;
    int in_degree = 0;
    int out_degree = 0;
    double strength = 0.0;
};

// Degree/strength table over validated edges, sorted by descending total
// degree, ties broken by sector id. Undirected edges count once per endpoint.
inline std::vector<NodeSummaryRow> node_summary(const ProgressionNetwork& net) {
    if (net.edges.empty())
        throw Error(ErrorClass::Data, "EmptyNetwork", "network has no validated edges");
    std::map<SectorRef, NodeSummaryRow> rows;
    for (const auto& n : net.nodes) rows[n].sector = n;
    for (const auto& e : net.edges) {
        auto& src = rows[e.source];
        auto& tgt = rows[e.target];
        src.sector = e.source;
        tgt.sector = e.target;
        if (net.directed) {
            src.out_degree += 1;
            tgt.in_degree += 1;
        } else {
            src.in_degree += 1;
            src.out_degree += 1;
            tgt.in_degree += 1;
            tgt.out_degree += 1;
        }
        src.strength += e.weight;
        tgt.strength += e.weight;
    }
    std::vector<NodeSummaryRow> out;
    out.reserve(rows.size());
    for (auto& [ref, row] : rows) out.push_back(row);
    std::sort(out.begin(), out.end(), [&](const NodeSummaryRow& a, const NodeSummaryRow& b) {
        int ta = a.in_degree + a.out_degree;
        int tb = b.in_degree + b.out_degree;
        if (ta != tb) return ta > tb;
        return sector_id(a.sector) < sector_id(b.sector);
    });
    return out;
}

enum class GraphFormat { GraphML, DOT, JSON };

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string join_years(const std::vector<int>& years) {
    std::string out;
    for (size_t i = 0; i < years.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(years[i]);
    }
    return out;
}

}  // namespace detail

inline nlohmann::ordered_json network_to_json(const ProgressionNetwork& net) {
    nlohmann::ordered_json j;
    j["delay"] = net.delay;
    j["directed"] = net.directed;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : net.nodes) {
        nlohmann::ordered_json nj;
        nj["layer"] = layer_name(n.layer);
        nj["code"] = n.code;
        nj["name"] = n.name;
        j["nodes"].push_back(std::move(nj));
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : net.edges) {
        nlohmann::ordered_json ej;
        ej["source"] = sector_id(e.source);
        ej["target"] = sector_id(e.target);
        ej["weight"] = e.weight;
        ej["count"] = e.validation_count;
        ej["year_pairs"] = e.year_pairs;
        j["edges"].push_back(std::move(ej));
    }
    return j;
}

inline ProgressionNetwork network_from_json(const nlohmann::json& j) {
    ProgressionNetwork net;
    net.delay = j.at("delay").get<int>();
    net.directed = j.at("directed").get<bool>();
    std::map<std::string, SectorRef> by_id;
    for (const auto& nj : j.at("nodes")) {
        SectorRef ref{parse_layer(nj.at("layer").get<std::string>()),
                      nj.at("code").get<std::string>(), nj.at("name").get<std::string>()};
        by_id[sector_id(ref)] = ref;
        net.nodes.push_back(std::move(ref));
    }
    for (const auto& ej : j.at("edges")) {
        Edge e;
        auto src = by_id.find(ej.at("source").get<std::string>());
        auto tgt = by_id.find(ej.at("target").get<std::string>());
        if (src == by_id.end() || tgt == by_id.end())
            throw Error(ErrorClass::Data, "MalformedRow",
                        "network JSON edge references an unknown node");
        e.source = src->second;
        e.target = tgt->second;
        e.weight = ej.at("weight").get<double>();
        e.validation_count = ej.at("count").get<int>();
        e.year_pairs = ej.at("year_pairs").get<std::vector<int>>();
        net.edges.push_back(std::move(e));
    }
    return net;
}

inline ProgressionNetwork import_network_json(const std::string& path) {
    auto in = open_input(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorClass::Data, "MalformedRow",
                    path + ": invalid network JSON: " + e.what());
    }
    return network_from_json(j);
}

inline void export_graph(const ProgressionNetwork& net, GraphFormat format, std::ostream& out) {
    switch (format) {
        case GraphFormat::JSON:
            out << network_to_json(net).dump(2) << "\n";
            return;
        case GraphFormat::DOT: {
            const char* arrow = net.directed ? " -> " : " -- ";
            out << (net.directed ? "digraph" : "graph") << " prognet {\n";
            for (const auto& n : net.nodes)
                out << "  \"" << detail::dot_escape(sector_id(n)) << "\" [layer=\""
                    << layer_name(n.layer) << "\", code=\"" << detail::dot_escape(n.code)
                    << "\", label=\"" << detail::dot_escape(n.name) << "\"];\n";
            for (const auto& e : net.edges)
                out << "  \"" << detail::dot_escape(sector_id(e.source)) << "\"" << arrow << "\""
                    << detail::dot_escape(sector_id(e.target)) << "\" [weight="
                    << format_double(e.weight) << ", count=" << e.validation_count << "];\n";
            out << "}\n";
            return;
        }
        case GraphFormat::GraphML: {
            out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
                << "  <key id=\"d0\" for=\"node\" attr.name=\"layer\" attr.type=\"string\"/>\n"
                << "  <key id=\"d1\" for=\"node\" attr.name=\"code\" attr.type=\"string\"/>\n"
                << "  <key id=\"d2\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n"
                << "  <key id=\"d3\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
                << "  <key id=\"d4\" for=\"edge\" attr.name=\"count\" attr.type=\"int\"/>\n"
                << "  <key id=\"d5\" for=\"edge\" attr.name=\"year_pairs\" attr.type=\"string\"/>\n"
                << "  <graph id=\"G\" edgedefault=\""
                << (net.directed ? "directed" : "undirected") << "\">\n";
            for (const auto& n : net.nodes) {
                out << "    <node id=\"" << detail::xml_escape(sector_id(n)) << "\">\n"
                    << "      <data key=\"d0\">" << layer_name(n.layer) << "</data>\n"
                    << "      <data key=\"d1\">" << detail::xml_escape(n.code) << "</data>\n"
                    << "      <data key=\"d2\">" << detail::xml_escape(n.name) << "</data>\n"
                    << "    </node>\n";
            }
            size_t eid = 0;
            for (const auto& e : net.edges) {
                out << "    <edge id=\"e" << eid++ << "\" source=\""
                    << detail::xml_escape(sector_id(e.source)) << "\" target=\""
                    << detail::xml_escape(sector_id(e.target)) << "\">\n"
                    << "      <data key=\"d3\">" << format_double(e.weight) << "</data>\n"
                    << "      <data key=\"d4\">" << e.validation_count << "</data>\n"
                    << "      <data key=\"d5\">" << detail::join_years(e.year_pairs)
                    << "</data>\n"
                    << "    </edge>\n";
            }
            out << "  </graph>\n</graphml>\n";
            return;
        }
    }
}

inline void export_graph(const ProgressionNetwork& net, GraphFormat format,
                         const std::filesystem::path& path) {
    write_file_atomic(path, [&](std::ostream& out) { export_graph(net, format, out); });
}

// Dense weight matrix, AI rows by Goods/Services columns, zeros where no
// validated edge exists (the Fig.-15-style heatmap input).
inline void write_heatmap_csv(const ProgressionNetwork& net, std::ostream& out) {
    std::vector<SectorRef> rows, cols;
    for (const auto& n : net.nodes)
        (n.layer == Layer::AI ? rows : cols).push_back(n);
    std::map<std::pair<SectorRef, SectorRef>, double> weight;
    for (const auto& e : net.edges) {
        weight[{e.source, e.target}] = e.weight;
        if (!net.directed) weight[{e.target, e.source}] = e.weight;
    }
    std::vector<std::string> header{"source"};
    for (const auto& c : cols) header.push_back(sector_id(c));
    out << csv_join(header) << "\n";
    for (const auto& r : rows) {
        std::vector<std::string> fields{sector_id(r)};
        for (const auto& c : cols) {
            auto it = weight.find({r, c});
            fields.push_back(format_double(it == weight.end() ? 0.0 : it->second));
        }
        out << csv_join(fields) << "\n";
    }
}

}  // namespace prognet
