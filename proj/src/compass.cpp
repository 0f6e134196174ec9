#include "coldist/compass.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace coldist {

namespace {

struct DiscOffset {
    int dx, dy;
};

std::vector<DiscOffset> disc_offsets(int radius) {
    std::vector<DiscOffset> offsets;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) offsets.push_back({dx, dy});
    return offsets;
}

struct Bucket {
    int kl, ka, kb;  // quantized Lab cell
    double sum_r = 0.0, sum_g = 0.0, sum_b = 0.0;
    int count = 0;
};

// Buckets are few (tens); linear scan beats hashing and keeps insertion
// order, and with it the output, deterministic.
void accumulate(std::vector<Bucket>& buckets, const LabColor& lab, RgbColor rgb, double step) {
    const int kl = static_cast<int>(std::floor(lab.l / step));
    const int ka = static_cast<int>(std::floor(lab.a / step));
    const int kb = static_cast<int>(std::floor(lab.b / step));
    for (auto& bucket : buckets) {
        if (bucket.kl == kl && bucket.ka == ka && bucket.kb == kb) {
            bucket.sum_r += rgb.r;
            bucket.sum_g += rgb.g;
            bucket.sum_b += rgb.b;
            ++bucket.count;
            return;
        }
    }
    buckets.push_back({kl, ka, kb, double(rgb.r), double(rgb.g), double(rgb.b), 1});
}

// Left normal of the dividing line. Snapping near-zero components keeps the
// on-line column assignment exact at the axis-aligned orientations, where
// sin/cos would otherwise leave 1e-17 residues that split it by sign noise.
std::pair<double, double> line_normal(double angle) {
    double nx = -std::sin(angle);
    double ny = std::cos(angle);
    if (std::fabs(nx) < 1e-12) nx = 0.0;
    if (std::fabs(ny) < 1e-12) ny = 0.0;
    return {nx, ny};
}

std::uint8_t round_channel(double sum, int count) {
    const long v = std::lround(sum / count);
    return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
}

Signature buckets_to_signature(const std::vector<Bucket>& buckets, int total,
                               const NamingTable& table) {
    Signature sig;
    sig.clusters.reserve(buckets.size());
    for (const auto& bucket : buckets) {
        const RgbColor mean = {round_channel(bucket.sum_r, bucket.count),
                               round_channel(bucket.sum_g, bucket.count),
                               round_channel(bucket.sum_b, bucket.count)};
        sig.clusters.push_back({represent(mean, table), double(bucket.count) / total, mean});
    }
    return sig;
}

// Ground-distance values are a pure function of the rounded representative
// pair (the metrics are symmetric), so workers memoize them; the same pairs
// recur across orientations and neighboring discs.
struct CostCache {
    std::unordered_map<std::uint64_t, double> map;
};

std::uint64_t pack_rgb_pair(RgbColor a, RgbColor b) {
    const std::uint32_t pa = (std::uint32_t(a.r) << 16) | (std::uint32_t(a.g) << 8) | a.b;
    const std::uint32_t pb = (std::uint32_t(b.r) << 16) | (std::uint32_t(b.g) << 8) | b.b;
    return (static_cast<std::uint64_t>(std::max(pa, pb)) << 32) | std::min(pa, pb);
}

double signature_emd(const Signature& a, const Signature& b, const ColorDifference& dist,
                     double floor_value, CostCache& cache) {
    if (cache.map.size() > (1u << 22)) cache.map.clear();
    const int na = static_cast<int>(a.clusters.size());
    const int nb = static_cast<int>(b.clusters.size());
    Matrix cost(na, nb);
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
            const std::uint64_t key = pack_rgb_pair(a.clusters[i].mean_rgb, b.clusters[j].mean_rgb);
            auto it = cache.map.find(key);
            if (it == cache.map.end()) {
                const double v =
                    std::max(0.0, dist(a.clusters[i].repr, b.clusters[j].repr) - floor_value);
                it = cache.map.emplace(key, v).first;
            }
            cost.at(i, j) = it->second;
        }
    }
    std::vector<double> p(na), q(nb);
    for (int i = 0; i < na; ++i) p[i] = a.clusters[i].weight;
    for (int j = 0; j < nb; ++j) q[j] = b.clusters[j].weight;
    return emd(p, q, cost);
}

void validate_center(const RgbImage& image, int cx, int cy) {
    if (cx < 0 || cx >= image.width || cy < 0 || cy >= image.height)
        throw std::invalid_argument("compass: center outside the image");
}

// Shared per-call machinery: disc offsets plus an optional precomputed Lab
// plane (detect_edges converts every pixel once up front).
struct ResponseContext {
    const RgbImage& image;
    const CompassParams& params;
    const ColorDifference& dist;
    const NamingTable& table;
    const std::vector<LabColor>* lab_plane = nullptr;
    std::vector<DiscOffset> offsets;
    double floor_value = 0.0;

    ResponseContext(const RgbImage& img, const CompassParams& p, const ColorDifference& d,
                    const NamingTable& t)
        : image(img), params(p), dist(d), table(t), offsets(disc_offsets(p.radius)),
          floor_value(d.self_distance()) {}

    LabColor lab_at(int x, int y) const {
        if (lab_plane) return (*lab_plane)[static_cast<std::size_t>(y) * image.width + x];
        return rgb_to_lab(image.at(x, y));
    }

    CompassResponse response(int cx, int cy, CostCache& cache) const {
        CompassResponse best;
        std::vector<Bucket> pos, neg;
        for (int k = 0; k < params.orientations; ++k) {
            const double angle = k * M_PI / params.orientations;
            const auto [nx, ny] = line_normal(angle);
            pos.clear();
            neg.clear();
            int pos_total = 0, neg_total = 0;
            for (const auto& off : offsets) {
                const int x = cx + off.dx;
                const int y = cy + off.dy;
                if (x < 0 || x >= image.width || y < 0 || y >= image.height) continue;
                const double side = off.dx * nx + off.dy * ny;
                auto& buckets = side >= 0.0 ? pos : neg;
                auto& total = side >= 0.0 ? pos_total : neg_total;
                accumulate(buckets, lab_at(x, y), image.at(x, y), params.quant_step);
                ++total;
            }
            if (pos_total == 0 || neg_total == 0) continue;  // empty half: zero strength
            const Signature sa = buckets_to_signature(pos, pos_total, table);
            const Signature sb = buckets_to_signature(neg, neg_total, table);
            const double strength = signature_emd(sa, sb, dist, floor_value, cache);
            if (strength > best.strength) {
                best.strength = strength;
                best.orientation = angle;
            }
        }
        return best;
    }
};

void validate_params(const CompassParams& params) {
    if (params.radius < 2)
        throw std::invalid_argument("compass: radius must be at least 2");
    if (params.orientations < 2)
        throw std::invalid_argument("compass: need at least 2 orientations");
    if (!(params.quant_step > 0.0))
        throw std::invalid_argument("compass: quant_step must be positive");
}

}  // namespace

std::optional<Signature> build_signature(const RgbImage& image, int cx, int cy, int radius,
                                         HalfDisc half, const NamingTable& table,
                                         double quant_step) {
    if (radius < 2) throw std::invalid_argument("build_signature: radius must be at least 2");
    if (!(quant_step > 0.0))
        throw std::invalid_argument("build_signature: quant_step must be positive");
    validate_center(image, cx, cy);
    const auto [nx, ny] = line_normal(half.angle);
    std::vector<Bucket> buckets;
    int total = 0;
    for (const auto& off : disc_offsets(radius)) {
        const int x = cx + off.dx;
        const int y = cy + off.dy;
        if (x < 0 || x >= image.width || y < 0 || y >= image.height) continue;
        const double side = off.dx * nx + off.dy * ny;
        if ((side >= 0.0) != half.positive) continue;
        accumulate(buckets, rgb_to_lab(image.at(x, y)), image.at(x, y), quant_step);
        ++total;
    }
    if (total == 0) return std::nullopt;
    return buckets_to_signature(buckets, total, table);
}

CompassResponse compass_response(const RgbImage& image, int cx, int cy,
                                 const CompassParams& params, const ColorDifference& dist,
                                 const NamingTable& table) {
    validate_params(params);
    validate_center(image, cx, cy);
    CostCache cache;
    return ResponseContext(image, params, dist, table).response(cx, cy, cache);
}

EdgeMap detect_edges(const RgbImage& image, const CompassParams& params,
                     const ColorDifference& dist, const NamingTable& table) {
    validate_params(params);
    if (image.width <= 2 * params.radius || image.height <= 2 * params.radius)
        throw std::invalid_argument("detect_edges: image must be larger than 2*radius in both dimensions");

    std::vector<LabColor> lab_plane(image.pixels.size());
    for (std::size_t i = 0; i < image.pixels.size(); ++i)
        lab_plane[i] = rgb_to_lab(image.pixels[i]);

    ResponseContext ctx(image, params, dist, table);
    ctx.lab_plane = &lab_plane;

    EdgeMap map;
    map.width = image.width;
    map.height = image.height;
    map.strength.assign(image.pixels.size(), 0.0);
    map.orientation.assign(image.pixels.size(), 0.0);

    const unsigned hw = std::thread::hardware_concurrency();
    const int nthreads = static_cast<int>(
        std::max(1u, std::min(hw ? hw : 1u, static_cast<unsigned>(image.height))));
    std::atomic<int> next_row{0};
    auto work = [&]() {
        CostCache cache;
        for (;;) {
            const int y = next_row.fetch_add(1);
            if (y >= image.height) return;
            for (int x = 0; x < image.width; ++x) {
                const CompassResponse r = ctx.response(x, y, cache);
                const std::size_t idx = static_cast<std::size_t>(y) * image.width + x;
                map.strength[idx] = r.strength;
                map.orientation[idx] = r.orientation;
            }
        }
    };
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return map;
}

EdgeMap thin_edges(const EdgeMap& map) {
    EdgeMap out = map;
    auto strength_at = [&](int x, int y) {
        if (x < 0 || x >= map.width || y < 0 || y >= map.height) return 0.0;
        return map.strength[static_cast<std::size_t>(y) * map.width + x];
    };
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * map.width + x;
            const auto [nx, ny] = line_normal(map.orientation[idx]);
            const int ox = static_cast<int>(std::lround(nx));
            const int oy = static_cast<int>(std::lround(ny));
            const double s = map.strength[idx];
            // The strict test on the minus side collapses plateaus along the
            // normal to a single survivor.
            if (!(s >= strength_at(x + ox, y + oy) && s > strength_at(x - ox, y - oy)))
                out.strength[idx] = 0.0;
        }
    }
    return out;
}

}  // namespace coldist
