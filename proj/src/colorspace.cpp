#include "coldist/colorspace.hpp"

#include <cmath>
#include <stdexcept>

namespace coldist {

namespace {

using Mat3 = double[3][3];
using Vec3 = double[3];

// IEC 61966-2-1 sRGB primaries, linear RGB -> XYZ under D65.
constexpr Mat3 kSrgbToXyzD65 = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

// Bradford cone response matrix.
constexpr Mat3 kBradford = {
    {0.8951, 0.2664, -0.1614},
    {-0.7502, 1.7135, 0.0367},
    {0.0389, -0.0685, 1.0296},
};

constexpr Vec3 kWhiteD65 = {0.95047, 1.00000, 1.08883};
constexpr Vec3 kWhiteD50 = {0.96422, 1.00000, 0.82521};

void mat_mul(const Mat3 a, const Mat3 b, Mat3 out) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            out[i][j] = 0.0;
            for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
        }
}

void mat_apply(const Mat3 m, const Vec3 x, Vec3 out) {
    for (int i = 0; i < 3; ++i)
        out[i] = m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2];
}

void mat_invert(const Mat3 m, Mat3 out) {
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    const double inv_det = 1.0 / det;
    out[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * inv_det;
    out[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv_det;
    out[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv_det;
    out[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * inv_det;
    out[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv_det;
    out[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv_det;
    out[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * inv_det;
    out[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv_det;
    out[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv_det;
}

struct SrgbToXyzD50 {
    Mat3 m;
    SrgbToXyzD50() {
        // Bradford adaptation D65 -> D50, composed with the sRGB matrix.
        Vec3 cone_src, cone_dst;
        mat_apply(kBradford, kWhiteD65, cone_src);
        mat_apply(kBradford, kWhiteD50, cone_dst);
        Mat3 scale = {};
        for (int i = 0; i < 3; ++i) scale[i][i] = cone_dst[i] / cone_src[i];
        Mat3 bradford_inv, tmp, adapt;
        mat_invert(kBradford, bradford_inv);
        mat_mul(scale, kBradford, tmp);
        mat_mul(bradford_inv, tmp, adapt);
        mat_mul(adapt, kSrgbToXyzD65, m);
    }
};

double srgb_decode(std::uint8_t channel) {
    const double u = channel / 255.0;
    return u <= 0.04045 ? u / 12.92 : std::pow((u + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    constexpr double delta3 = delta * delta * delta;
    return t > delta3 ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

constexpr double deg_to_rad(double deg) { return deg * M_PI / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / M_PI; }

}  // namespace

LabColor rgb_to_lab(RgbColor c) {
    static const SrgbToXyzD50 conv;
    const Vec3 rgb = {srgb_decode(c.r), srgb_decode(c.g), srgb_decode(c.b)};
    Vec3 xyz;
    mat_apply(conv.m, rgb, xyz);
    const double fx = lab_f(xyz[0] / kWhiteD50[0]);
    const double fy = lab_f(xyz[1] / kWhiteD50[1]);
    const double fz = lab_f(xyz[2] / kWhiteD50[2]);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double ciede2000(const LabColor& s1, const LabColor& s2) {
    constexpr double pow25_7 = 6103515625.0;  // 25^7

    const double c1 = std::hypot(s1.a, s1.b);
    const double c2 = std::hypot(s2.a, s2.b);
    const double c_bar = (c1 + c2) / 2.0;
    const double c_bar7 = std::pow(c_bar, 7.0);
    const double g = 0.5 * (1.0 - std::sqrt(c_bar7 / (c_bar7 + pow25_7)));

    const double a1p = (1.0 + g) * s1.a;
    const double a2p = (1.0 + g) * s2.a;
    const double c1p = std::hypot(a1p, s1.b);
    const double c2p = std::hypot(a2p, s2.b);

    // Hue angles in degrees, in [0, 360).
    auto hue_deg = [](double ap, double b) {
        if (ap == 0.0 && b == 0.0) return 0.0;
        double h = rad_to_deg(std::atan2(b, ap));
        return h < 0.0 ? h + 360.0 : h;
    };
    const double h1p = hue_deg(a1p, s1.b);
    const double h2p = hue_deg(a2p, s2.b);

    const double dlp = s2.l - s1.l;
    const double dcp = c2p - c1p;

    double dhp_deg = 0.0;
    if (c1p * c2p != 0.0) {
        dhp_deg = h2p - h1p;
        if (dhp_deg > 180.0)
            dhp_deg -= 360.0;
        else if (dhp_deg < -180.0)
            dhp_deg += 360.0;
    }
    const double dHp = 2.0 * std::sqrt(c1p * c2p) * std::sin(deg_to_rad(dhp_deg) / 2.0);

    const double l_bar = (s1.l + s2.l) / 2.0;
    const double cp_bar = (c1p + c2p) / 2.0;

    double hp_bar = h1p + h2p;
    if (c1p * c2p != 0.0) {
        if (std::fabs(h1p - h2p) <= 180.0)
            hp_bar = (h1p + h2p) / 2.0;
        else if (h1p + h2p < 360.0)
            hp_bar = (h1p + h2p + 360.0) / 2.0;
        else
            hp_bar = (h1p + h2p - 360.0) / 2.0;
    }

    const double t = 1.0 - 0.17 * std::cos(deg_to_rad(hp_bar - 30.0)) +
                     0.24 * std::cos(deg_to_rad(2.0 * hp_bar)) +
                     0.32 * std::cos(deg_to_rad(3.0 * hp_bar + 6.0)) -
                     0.20 * std::cos(deg_to_rad(4.0 * hp_bar - 63.0));

    const double dtheta = 30.0 * std::exp(-((hp_bar - 275.0) / 25.0) * ((hp_bar - 275.0) / 25.0));
    const double cp_bar7 = std::pow(cp_bar, 7.0);
    const double rc = 2.0 * std::sqrt(cp_bar7 / (cp_bar7 + pow25_7));
    const double rt = -std::sin(deg_to_rad(2.0 * dtheta)) * rc;

    const double lm50sq = (l_bar - 50.0) * (l_bar - 50.0);
    const double sl = 1.0 + 0.015 * lm50sq / std::sqrt(20.0 + lm50sq);
    const double sc = 1.0 + 0.045 * cp_bar;
    const double sh = 1.0 + 0.015 * cp_bar * t;

    const double vl = dlp / sl;
    const double vc = dcp / sc;
    const double vh = dHp / sh;
    return std::sqrt(vl * vl + vc * vc + vh * vh + rt * vc * vh);
}

double d1(const LabColor& s1, const LabColor& s2, double threshold) {
    if (!(threshold > 0.0))
        throw std::invalid_argument("d1: threshold must be positive");
    return std::min(ciede2000(s1, s2), threshold) / threshold;
}

double lab_euclidean(const LabColor& s1, const LabColor& s2) {
    const double dl = s1.l - s2.l;
    const double da = s1.a - s2.a;
    const double db = s1.b - s2.b;
    return std::sqrt(dl * dl + da * da + db * db);
}

}  // namespace coldist
