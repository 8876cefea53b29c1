#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "prognet/types.hpp"
#include "prognet/util.hpp"

namespace prognet {

// Flat, diffable run configuration. One key per line, `key = value`; every
// key is overridable by a CLI flag of the same name. The resolved form is
// echoed verbatim into the output directory for provenance.
struct RunConfig {
    std::string ai_panel;
    std::string goods_panel;
    std::string services_panel;
    std::string taxonomy;
    std::string output_dir = "out";
    int delay = 3;
    double alpha = 0.05;
    int n_samples = 1000;
    uint64_t seed = 7;
    int early_start = 2010;
    int early_end = 2014;
    int late_start = 2017;
    int late_end = 2019;
    int min_validations = 1;
    int top_k = 10;
    double min_layer_total = 0.0;
    bool include_self_links = false;
    bool weight_all_pairs = false;
    bool fdr = false;
};

inline bool parse_bool(const std::string& s, const char* key) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw Error(ErrorClass::Config, "BadConfigValue",
                std::string("boolean expected for ") + key + ", got '" + s + "'");
}

// `key = value` lines; '#' starts a comment; blank lines ignored.
inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorClass::Io, "IoError", "cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    size_t line_no = 0;
    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t");
        size_t b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorClass::Config, "BadConfigValue",
                        path + ": expected 'key = value' on line " + std::to_string(line_no));
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto as_int = [&](const char* what) {
        try {
            return static_cast<int>(parse_int(value, what));
        } catch (const Error&) {
            throw Error(ErrorClass::Config, "BadConfigValue",
                        std::string("integer expected for ") + key + ", got '" + value + "'");
        }
    };
    auto as_double = [&](const char* what) {
        try {
            return parse_double(value, what);
        } catch (const Error&) {
            throw Error(ErrorClass::Config, "BadConfigValue",
                        std::string("number expected for ") + key + ", got '" + value + "'");
        }
    };
    if (key == "ai_panel") cfg.ai_panel = value;
    else if (key == "goods_panel") cfg.goods_panel = value;
    else if (key == "services_panel") cfg.services_panel = value;
    else if (key == "taxonomy") cfg.taxonomy = value;
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "delay") cfg.delay = as_int("delay");
    else if (key == "alpha") cfg.alpha = as_double("alpha");
    else if (key == "n_samples") cfg.n_samples = as_int("n_samples");
    else if (key == "seed") cfg.seed = static_cast<uint64_t>(parse_int(value, "seed"));
    else if (key == "early_start") cfg.early_start = as_int("early_start");
    else if (key == "early_end") cfg.early_end = as_int("early_end");
    else if (key == "late_start") cfg.late_start = as_int("late_start");
    else if (key == "late_end") cfg.late_end = as_int("late_end");
    else if (key == "min_validations") cfg.min_validations = as_int("min_validations");
    else if (key == "top_k") cfg.top_k = as_int("top_k");
    else if (key == "min_layer_total") cfg.min_layer_total = as_double("min_layer_total");
    else if (key == "include_self_links") cfg.include_self_links = parse_bool(value, key.c_str());
    else if (key == "weight_all_pairs") cfg.weight_all_pairs = parse_bool(value, key.c_str());
    else if (key == "fdr") cfg.fdr = parse_bool(value, key.c_str());
    else
        throw Error(ErrorClass::Config, "UnknownConfigKey", "unknown config key: " + key);
}

inline void validate_config(const RunConfig& cfg) {
    auto bad = [](const std::string& msg) {
        throw Error(ErrorClass::Config, "BadConfigValue", msg);
    };
    if (cfg.delay < 0) bad("delay must be >= 0");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) bad("alpha must be in (0, 1)");
    if (cfg.n_samples < 1) bad("n_samples must be >= 1");
    if (cfg.top_k < 1) bad("top_k must be >= 1");
    if (cfg.min_validations < 1) bad("min_validations must be >= 1");
    if (cfg.min_layer_total < 0) bad("min_layer_total must be >= 0");
    if (cfg.early_start > cfg.early_end) bad("early sub-period is empty");
    if (cfg.late_start > cfg.late_end) bad("late sub-period is empty");
}

// Loads a config file with relative input paths resolved against the file's
// own directory, so bundled configs work from any working directory.
inline RunConfig load_run_config(const std::string& path) {
    RunConfig cfg;
    auto kv = parse_config_file(path);
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        if (p.empty()) return p;
        std::filesystem::path fp(p);
        return fp.is_absolute() ? p : (base / fp).string();
    };
    for (const auto& [key, value] : kv) {
        if (key == "ai_panel" || key == "goods_panel" || key == "services_panel" ||
            key == "taxonomy")
            apply_config_entry(cfg, key, resolve(value));
        else
            apply_config_entry(cfg, key, value);
    }
    return cfg;
}

inline std::string serialize_config(const RunConfig& cfg) {
    std::string out;
    auto emit = [&](const std::string& key, const std::string& value) {
        out += key + " = " + value + "\n";
    };
    emit("ai_panel", cfg.ai_panel);
    emit("goods_panel", cfg.goods_panel);
    emit("services_panel", cfg.services_panel);
    emit("taxonomy", cfg.taxonomy);
    emit("output_dir", cfg.output_dir);
    emit("delay", std::to_string(cfg.delay));
    emit("alpha", format_double(cfg.alpha));
    emit("n_samples", std::to_string(cfg.n_samples));
    emit("seed", std::to_string(cfg.seed));
    emit("early_start", std::to_string(cfg.early_start));
    emit("early_end", std::to_string(cfg.early_end));
    emit("late_start", std::to_string(cfg.late_start));
    emit("late_end", std::to_string(cfg.late_end));
    emit("min_validations", std::to_string(cfg.min_validations));
    emit("top_k", std::to_string(cfg.top_k));
    emit("min_layer_total", format_double(cfg.min_layer_total));
    emit("include_self_links", cfg.include_self_links ? "true" : "false");
    emit("weight_all_pairs", cfg.weight_all_pairs ? "true" : "false");
    emit("fdr", cfg.fdr ? "true" : "false");
    return out;
}

}  // namespace prognet
