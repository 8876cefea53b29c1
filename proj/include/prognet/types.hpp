#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <utility>

namespace prognet {

// Error classes map one-to-one onto CLI exit codes.
enum class ErrorClass { Config, Io, Data, Convergence };

inline const char* error_class_name(ErrorClass c) {
    switch (c) {
        case ErrorClass::Config:      return "config";
        case ErrorClass::Io:          return "io";
        case ErrorClass::Data:        return "data";
        case ErrorClass::Convergence: return "convergence";
    }
    return "unknown";
}

// Single exception type carrying a stable machine-readable code
// (e.g. "UnknownSector", "IterationLimit") plus its class.
class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, std::string code, const std::string& message)
        : std::runtime_error(message), cls_(cls), code_(std::move(code)) {}

    ErrorClass cls() const { return cls_; }
    const std::string& code() const { return code_; }

private:
    ErrorClass cls_;
    std::string code_;
};

enum class Layer { AI, Goods, Services };

inline const char* layer_name(Layer l) {
    switch (l) {
        case Layer::AI:       return "AI";
        case Layer::Goods:    return "Goods";
        case Layer::Services: return "Services";
    }
    return "?";
}

inline Layer parse_layer(const std::string& s) {
    if (s == "AI" || s == "ai") return Layer::AI;
    if (s == "Goods" || s == "goods") return Layer::Goods;
    if (s == "Services" || s == "services") return Layer::Services;
    throw Error(ErrorClass::Data, "UnknownLayer", "unknown layer: " + s);
}

// Node identity for every network: a layer tag plus a stable sector code.
struct SectorRef {
    Layer layer{};
    std::string code;
    std::string name;

    friend bool operator==(const SectorRef& a, const SectorRef& b) {
        return a.layer == b.layer && a.code == b.code;
    }
    friend std::strong_ordering operator<=>(const SectorRef& a, const SectorRef& b) {
        if (a.layer != b.layer) return a.layer <=> b.layer;
        return a.code <=> b.code;
    }
};

// Canonical id used in graph exports and as a sort key: "AI:agtech".
inline std::string sector_id(const SectorRef& s) {
    return std::string(layer_name(s.layer)) + ":" + s.code;
}

struct YearRange {
    int first = 0;
    int last = 0;

    bool contains(int y) const { return y >= first && y <= last; }
};

}  // namespace prognet
