#include "coldist/metric.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace coldist {

void MetricParams::validate() const {
    if (!(T > 0.0)) throw std::invalid_argument("MetricParams: T must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("MetricParams: gamma must be positive");
    if (!(Z > 0.0)) throw std::invalid_argument("MetricParams: Z must be positive");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("MetricParams: alpha must be in [0, 1]");
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("MetricParams: t must be in (0, 1]");
}

ColorRepr represent(RgbColor c, const NamingTable& table) {
    return {rgb_to_lab(c), term_probabilities(table, c), NamingTable::cell_index(c)};
}

double d2(const TermProbabilities& p1, const TermProbabilities& p2, const GroundMatrix& D) {
    if (static_cast<int>(p1.size()) != D.size() || static_cast<int>(p2.size()) != D.size())
        throw std::invalid_argument("d2: probability vector size does not match ground matrix");
    if (p1 == p2) return 0.0;  // identity plan, zero diagonal
    return emd(p1, p2, D.d);
}

double d3(const ColorRepr& v1, const ColorRepr& v2, const MetricParams& params,
          const GroundMatrix& D) {
    const double a = params.alpha;
    double value = 0.0;
    if (a > 0.0) value += a * d1(v1.s, v2.s, params.T);
    if (a < 1.0) value += (1.0 - a) * d2(v1.p, v2.p, D);
    return value;
}

double col_dist_from_blend(double d3_value, double Z) {
    return 1.0 / (1.0 + std::exp(-(Z * d3_value - Z / 2.0)));
}

double col_dist(const ColorRepr& v1, const ColorRepr& v2, const MetricParams& params,
                const GroundMatrix& D) {
    return col_dist_from_blend(d3(v1, v2, params, D), params.Z);
}

double col_dist_floor(double Z) { return col_dist_from_blend(0.0, Z); }

double ne_dist(const LabColor& s1, const LabColor& s2, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("ne_dist: gamma must be positive");
    return 1.0 - std::exp(-lab_euclidean(s1, s2) / gamma);
}

double tc_dist(const LabColor& s1, const LabColor& s2, double T) { return d1(s1, s2, T); }

ColDistMetric::ColDistMetric(MetricParams params, GroundMatrix ground)
    : params_(params), ground_(std::move(ground)) {
    params_.validate();
}

double ColDistMetric::operator()(const ColorRepr& a, const ColorRepr& b) const {
    double term_part = 0.0;
    if (params_.alpha < 1.0) {
        const bool cacheable = a.naming_cell >= 0 && b.naming_cell >= 0;
        bool found = false;
        std::uint64_t key = 0;
        if (cacheable) {
            const std::uint64_t lo = static_cast<std::uint32_t>(std::min(a.naming_cell, b.naming_cell));
            const std::uint64_t hi = static_cast<std::uint32_t>(std::max(a.naming_cell, b.naming_cell));
            key = (hi << 32) | lo;
            std::shared_lock lock(cache_mutex_);
            if (auto it = d2_cache_.find(key); it != d2_cache_.end()) {
                term_part = it->second;
                found = true;
            }
        }
        if (!found) {
            term_part = d2(a.p, b.p, ground_);
            if (cacheable) {
                std::unique_lock lock(cache_mutex_);
                d2_cache_.emplace(key, term_part);
            }
        }
    }
    const double blend =
        params_.alpha * d1(a.s, b.s, params_.T) + (1.0 - params_.alpha) * term_part;
    return col_dist_from_blend(blend, params_.Z);
}

double ColDistMetric::self_distance() const { return col_dist_floor(params_.Z); }

TcMetric::TcMetric(double T) : T_(T) {
    if (!(T > 0.0)) throw std::invalid_argument("TcMetric: T must be positive");
}

double TcMetric::operator()(const ColorRepr& a, const ColorRepr& b) const {
    return tc_dist(a.s, b.s, T_);
}

NeMetric::NeMetric(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("NeMetric: gamma must be positive");
}

double NeMetric::operator()(const ColorRepr& a, const ColorRepr& b) const {
    return ne_dist(a.s, b.s, gamma_);
}

double Ciede2000Metric::operator()(const ColorRepr& a, const ColorRepr& b) const {
    return ciede2000(a.s, b.s);
}

std::optional<MetricKind> parse_metric_kind(std::string_view name) {
    if (name == "coldist") return MetricKind::coldist;
    if (name == "tc") return MetricKind::tc;
    if (name == "ne") return MetricKind::ne;
    if (name == "ciede2000") return MetricKind::ciede2000;
    return std::nullopt;
}

std::unique_ptr<ColorDifference> make_metric(MetricKind kind, const MetricParams& params,
                                             GroundMatrix ground) {
    params.validate();
    switch (kind) {
        case MetricKind::coldist:
            return std::make_unique<ColDistMetric>(params, std::move(ground));
        case MetricKind::tc:
            return std::make_unique<TcMetric>(params.T);
        case MetricKind::ne:
            return std::make_unique<NeMetric>(params.gamma);
        case MetricKind::ciede2000:
            return std::make_unique<Ciede2000Metric>();
    }
    throw std::logic_error("make_metric: unknown kind");
}

}  // namespace coldist
