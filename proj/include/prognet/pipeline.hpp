#pragma once

#include <filesystem>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "prognet/assist.hpp"
#include "prognet/config.hpp"
#include "prognet/csv.hpp"
#include "prognet/density.hpp"
#include "prognet/network.hpp"
#include "prognet/panel.hpp"
#include "prognet/rca.hpp"
#include "prognet/types.hpp"
#include "prognet/util.hpp"
#include "prognet/validate.hpp"

namespace prognet {

// ---------------------------------------------------------------------------
// CSV writers shared by the pipeline and the individual CLI subcommands.
// ---------------------------------------------------------------------------

inline void write_rca_csv(const SpecMatrix& s, std::ostream& out) {
    out << "country,layer,code,rca,m\n";
    for (size_t c = 0; c < s.countries.size(); ++c)
        for (size_t x = 0; x < s.sectors.size(); ++x)
            out << csv_join({s.countries[c], layer_name(s.sectors[x].layer), s.sectors[x].code,
                             format_double(s.rca[s.idx(c, x)],),
                             s.m[s.idx(c, x)] ? "1" : "0"})
                << "\n";
}

inline void write_labels_csv(const std::vector<SpecLabel>& labels, std::ostream& out) {
    out << "country,layer,code,label,early_avg,late_avg\n";
    for (const auto& l : labels)
        out << csv_join({l.country, layer_name(l.sector.layer), l.sector.code,
                         spec_pattern_name(l.label), format_double(l.early_avg_rca),
                         format_double(l.late_avg_rca)})
            << "\n";
}

// Dense matrix form with an `undefined` sentinel on u_x = 0 rows.
inline void write_assist_csv(const AssistMatrix& a, std::ostream& out) {
    std::vector<std::string> header{"source"};
    for (const auto& t : a.targets) header.push_back(sector_id(t));
    out << csv_join(header) << "\n";
    for (size_t s = 0; s < a.sources.size(); ++s) {
        std::vector<std::string> fields{sector_id(a.sources[s])};
        for (size_t t = 0; t < a.targets.size(); ++t)
            fields.push_back(a.row_defined[s] ? format_double(a.b[a.idx(s, t)]) : "undefined");
        out << csv_join(fields) << "\n";
    }
}

inline void write_validation_csv(const std::vector<ValidationResult>& results,
                                 std::ostream& out) {
    out << "source_layer,source,target_layer,target,observed_b,p_value,validated\n";
    for (const auto& r : results)
        out << csv_join({layer_name(r.source.layer), r.source.code, layer_name(r.target.layer),
                         r.target.code, format_double(r.observed_b), format_double(r.p_value),
                         r.validated ? "true" : "false"})
            << "\n";
}

inline void write_node_summary_csv(const std::vector<NodeSummaryRow>& rows, std::ostream& out) {
    out << "layer,code,name,in_degree,out_degree,strength\n";
    for (const auto& r : rows)
        out << csv_join({layer_name(r.sector.layer), r.sector.code, r.sector.name,
                         std::to_string(r.in_degree), std::to_string(r.out_degree),
                         format_double(r.strength)})
            << "\n";
}

inline void write_report_csv(const DensityReport& report, std::ostream& out) {
    out << "rank,target_layer,target,density,related_ai,status,application,no_support\n";
    int rank = 1;
    for (const auto& row : report.rows) {
        std::string related;
        for (size_t i = 0; i < row.related_ai.size(); ++i) {
            if (i) related += ';';
            related += row.related_ai[i].code;
        }
        out << csv_join({std::to_string(rank++), layer_name(row.target.layer), row.target.code,
                         format_double(row.density), related, spec_pattern_name(row.status),
                         application_name(row.application), row.no_support ? "true" : "false"})
            << "\n";
    }
}

// ---------------------------------------------------------------------------
// Input loading and the full pipeline.
// ---------------------------------------------------------------------------

struct PipelineInputs {
    Taxonomy taxonomy;
    Panel universal;
};

inline PipelineInputs load_inputs(const RunConfig& cfg) {
    if (cfg.ai_panel.empty() || cfg.goods_panel.empty() || cfg.services_panel.empty() ||
        cfg.taxonomy.empty())
        throw Error(ErrorClass::Config, "MissingInput",
                    "ai_panel, goods_panel, services_panel and taxonomy must all be set");
    PipelineInputs in;
    in.taxonomy = load_taxonomy(cfg.taxonomy);
    std::vector<Panel> panels;
    panels.push_back(load_panel(cfg.ai_panel, Layer::AI, in.taxonomy));
    panels.push_back(load_panel(cfg.goods_panel, Layer::Goods, in.taxonomy));
    panels.push_back(load_panel(cfg.services_panel, Layer::Services, in.taxonomy));
    in.universal = align(panels);
    return in;
}

inline BuildOptions build_options_from(const RunConfig& cfg) {
    BuildOptions opt;
    opt.delay = cfg.delay;
    opt.alpha = cfg.alpha;
    opt.n_samples = cfg.n_samples;
    opt.seed = cfg.seed;
    opt.min_validations = cfg.min_validations;
    opt.fdr = cfg.fdr;
    opt.include_self_links = cfg.include_self_links;
    opt.weight_all_pairs = cfg.weight_all_pairs;
    opt.min_layer_total = cfg.min_layer_total;
    return opt;
}

// End-to-end run: ingest -> rca -> labels -> validated networks -> reports.
// Every output goes through write-then-rename, and all content is a pure
// function of (inputs, config), so identical runs are byte-identical.
inline void run_pipeline(const RunConfig& cfg) {
    validate_config(cfg);
    PipelineInputs in = load_inputs(cfg);
    const Panel& panel = in.universal;

    std::filesystem::path out_dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw Error(ErrorClass::Io, "IoError",
                    "cannot create output directory: " + out_dir.string());

    write_file_atomic(out_dir / "config_resolved.txt",
                      [&](std::ostream& o) { o << serialize_config(cfg); });

    for (int year : panel.years) {
        SpecMatrix s = compute_rca(panel, year, cfg.min_layer_total);
        write_file_atomic(out_dir / ("rca_" + std::to_string(year) + ".csv"),
                          [&](std::ostream& o) { write_rca_csv(s, o); });
    }

    std::vector<SpecLabel> labels =
        label_specializations(panel, {cfg.early_start, cfg.early_end},
                              {cfg.late_start, cfg.late_end}, cfg.min_layer_total);
    write_file_atomic(out_dir / "labels.csv",
                      [&](std::ostream& o) { write_labels_csv(labels, o); });

    BuildOptions opt = build_options_from(cfg);
    ProgressionNetwork net =
        build_progression(panel, {Layer::AI}, {Layer::AI, Layer::Goods, Layer::Services}, opt);
    export_graph(net, GraphFormat::JSON, out_dir / "network.json");
    export_graph(net, GraphFormat::GraphML, out_dir / "network.graphml");
    export_graph(net, GraphFormat::DOT, out_dir / "network.dot");
    write_file_atomic(out_dir / "node_summary.csv", [&](std::ostream& o) {
        if (net.edges.empty())
            o << "layer,code,name,in_degree,out_degree,strength\n";
        else
            write_node_summary_csv(node_summary(net), o);
    });
    write_file_atomic(out_dir / "heatmap.csv",
                      [&](std::ostream& o) { write_heatmap_csv(net, o); });

    BuildOptions co_opt = opt;
    co_opt.delay = 0;
    ProgressionNetwork cooc = build_progression(panel, {Layer::AI}, {Layer::AI}, co_opt);
    export_graph(cooc, GraphFormat::JSON, out_dir / "cooccurrence.json");
    export_graph(cooc, GraphFormat::GraphML, out_dir / "cooccurrence.graphml");
    export_graph(cooc, GraphFormat::DOT, out_dir / "cooccurrence.dot");

    for (const auto& country : panel.countries) {
        DensityReport report =
            country_report(panel, net, labels, country, cfg.top_k, cfg.min_layer_total);
        write_file_atomic(out_dir / ("report_" + country + ".csv"),
                          [&](std::ostream& o) { write_report_csv(report, o); });
    }
}

}  // namespace prognet
