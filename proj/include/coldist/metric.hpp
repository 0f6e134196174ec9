#pragma once

#include "coldist/colorspace.hpp"
#include "coldist/naming.hpp"

#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace coldist {

// The scalar knobs of the distance family. Defaults are the published set.
struct MetricParams {
    double T = 20.0;      // CIEDE2000 saturation threshold (CIELAB units)
    double alpha = 0.5;   // blend weight between d1 and d2
    double Z = 10.0;      // sigmoid scale
    double gamma = 14.0;  // negative-exponent decay (CIELAB units)
    double t = 0.7;       // ground-distance threshold

    void validate() const;  // throws std::invalid_argument
};

// A color as the metrics see it: Lab coordinates plus term probabilities.
struct ColorRepr {
    LabColor s;
    TermProbabilities p;
    int naming_cell = -1;  // table cell p came from; -1 if p was hand-built
};

ColorRepr represent(RgbColor c, const NamingTable& table);

// EMD between term-probability vectors under the ground matrix. In [0, 1]
// when D is.
double d2(const TermProbabilities& p1, const TermProbabilities& p2, const GroundMatrix& D);

// alpha * d1 + (1 - alpha) * d2.
double d3(const ColorRepr& v1, const ColorRepr& v2, const MetricParams& params,
          const GroundMatrix& D);

// The logistic squash 1 / (1 + exp(-(Z * d3 - Z/2))). Note col_dist of a
// color to itself is NOT zero: it is the sigmoid floor 1 / (1 + exp(Z/2))
// (~0.00669 at Z=10). Consumers that need a true zero must subtract
// col_dist_floor themselves.
double col_dist_from_blend(double d3_value, double Z);
double col_dist(const ColorRepr& v1, const ColorRepr& v2, const MetricParams& params,
                const GroundMatrix& D);
double col_dist_floor(double Z);

// Ruzon-Tomasi baseline: 1 - exp(-||s1 - s2||_2 / gamma).
double ne_dist(const LabColor& s1, const LabColor& s2, double gamma);

// Thresholded CIEDE2000 baseline (identical to d1).
double tc_dist(const LabColor& s1, const LabColor& s2, double T);

// Pluggable color difference over ColorRepr pairs. Implementations are
// symmetric and safe for concurrent use.
class ColorDifference {
public:
    virtual ~ColorDifference() = default;
    virtual double operator()(const ColorRepr& a, const ColorRepr& b) const = 0;
    // Distance of a color to itself (the sigmoid floor for COL_DIST, zero
    // for everything else).
    virtual double self_distance() const { return 0.0; }
    virtual std::string_view name() const = 0;
};

class ColDistMetric final : public ColorDifference {
public:
    ColDistMetric(MetricParams params, GroundMatrix ground);
    double operator()(const ColorRepr& a, const ColorRepr& b) const override;
    double self_distance() const override;
    std::string_view name() const override { return "coldist"; }
    const GroundMatrix& ground() const { return ground_; }

private:
    MetricParams params_;
    GroundMatrix ground_;
    // d2 depends only on the pair of table cells, so memoize it per cell
    // pair; reads take a shared lock because detect_edges hits the cache
    // from many threads at once.
    mutable std::shared_mutex cache_mutex_;
    mutable std::unordered_map<std::uint64_t, double> d2_cache_;
};

class TcMetric final : public ColorDifference {
public:
    explicit TcMetric(double T);
    double operator()(const ColorRepr& a, const ColorRepr& b) const override;
    std::string_view name() const override { return "tc"; }

private:
    double T_;
};

class NeMetric final : public ColorDifference {
public:
    explicit NeMetric(double gamma);
    double operator()(const ColorRepr& a, const ColorRepr& b) const override;
    std::string_view name() const override { return "ne"; }

private:
    double gamma_;
};

class Ciede2000Metric final : public ColorDifference {
public:
    double operator()(const ColorRepr& a, const ColorRepr& b) const override;
    std::string_view name() const override { return "ciede2000"; }
};

enum class MetricKind { coldist, tc, ne, ciede2000 };

std::optional<MetricKind> parse_metric_kind(std::string_view name);

// ground is only consulted for MetricKind::coldist.
std::unique_ptr<ColorDifference> make_metric(MetricKind kind, const MetricParams& params,
                                             GroundMatrix ground);

}  // namespace coldist
