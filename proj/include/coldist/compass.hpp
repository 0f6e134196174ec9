#pragma once

#include "coldist/metric.hpp"

#include <optional>
#include <vector>

namespace coldist {

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<RgbColor> pixels;  // row-major

    RgbImage() = default;
    RgbImage(int w, int h, RgbColor fill = {})
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    RgbColor at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    RgbColor& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// Sparse weighted summary of the colors in a half-disc.
struct Signature {
    struct Cluster {
        ColorRepr repr;
        double weight = 0.0;
        RgbColor mean_rgb;  // the rounded bucket mean repr was built from
    };
    std::vector<Cluster> clusters;  // weights sum to 1
};

struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<double> strength;     // per pixel, within the ground distance's range
    std::vector<double> orientation;  // dividing-line angle, radians in [0, pi)
};

struct CompassParams {
    int radius = 8;
    int orientations = 12;     // 15 degree spacing
    double quant_step = 10.0;  // Lab cube cell size for signature bucketing
};

// Diameter at `angle` (radians, measured from the +x axis) through the disc
// center. `positive` selects the half on the side the left normal
// (-sin, cos) points to; pixels exactly on the line count as positive.
struct HalfDisc {
    double angle = 0.0;
    bool positive = true;
};

// Buckets the half-disc pixels by uniform Lab quantization; each non-empty
// bucket becomes a cluster at the bucket's mean color, weighted by pixel
// fraction. Disc membership is pixel-center distance <= radius, clipped to
// the image. Returns nullopt when the half-disc contains no pixels.
std::optional<Signature> build_signature(const RgbImage& image, int cx, int cy, int radius,
                                         HalfDisc half, const NamingTable& table,
                                         double quant_step);

struct CompassResponse {
    double strength = 0.0;
    double orientation = 0.0;
};

// Max over a uniform orientation grid on [0, pi) of the EMD between the two
// half-disc signatures, with dist (minus its self-distance floor) as the
// ground distance. Ties go to the smallest angle; an empty half contributes
// zero strength at that angle.
CompassResponse compass_response(const RgbImage& image, int cx, int cy,
                                 const CompassParams& params, const ColorDifference& dist,
                                 const NamingTable& table);

// Per-pixel compass response over the whole image (border discs are
// clipped). Deterministic for fixed inputs; rows are processed in parallel.
EdgeMap detect_edges(const RgbImage& image, const CompassParams& params,
                     const ColorDifference& dist, const NamingTable& table);

// Optional non-maximum suppression: keeps a pixel only when its strength is
// maximal among the two neighbors across its edge direction.
EdgeMap thin_edges(const EdgeMap& map);

}  // namespace coldist
