#include "coldist/colorspace.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace coldist;

namespace {

// Reference Lab values computed through an independent pipeline: Lindbloom's
// published Bradford-adapted sRGB -> XYZ(D50) matrix, CIE Lab with the D50
// white point. r, g, b, L, a, b.
constexpr double kLabReference[][6] = {
    {0, 0, 0, 0.000000, 0.000000, 0.000000},
    {255, 255, 255, 100.000000, 0.000000, 0.000000},
    {128, 128, 128, 53.585013, 0.000000, 0.000000},
    {255, 0, 0, 54.291734, 80.812455, 69.885040},
    {0, 0, 255, 29.567573, 68.298653, -112.029430},
    {0, 128, 0, 46.277464, -47.562125, 48.583690},
    {70, 130, 180, 51.986249, -8.362792, -32.832699},
    {250, 128, 114, 67.847361, 46.634206, 30.160484},
};

// CIEDE2000 worked test pairs published with the formula's implementation
// notes (Sharma, Wu, Dalal): L1, a1, b1, L2, a2, b2, dE00. The set spans all
// hue-mean and hue-difference discontinuity branches.
constexpr double kCiedePairs[][7] = {
    {50.0000, 2.6772, -79.7751, 50.0000, 0.0000, -82.7485, 2.0425},
    {50.0000, 3.1571, -77.2803, 50.0000, 0.0000, -82.7485, 2.8615},
    {50.0000, 2.8361, -74.0200, 50.0000, 0.0000, -82.7485, 3.4412},
    {50.0000, -1.3802, -84.2814, 50.0000, 0.0000, -82.7485, 1.0000},
    {50.0000, -1.1848, -84.8006, 50.0000, 0.0000, -82.7485, 1.0000},
    {50.0000, -0.9009, -85.5211, 50.0000, 0.0000, -82.7485, 1.0000},
    {50.0000, 0.0000, 0.0000, 50.0000, -1.0000, 2.0000, 2.3669},
    {50.0000, -1.0000, 2.0000, 50.0000, 0.0000, 0.0000, 2.3669},
    {50.0000, 2.4900, -0.0010, 50.0000, -2.4900, 0.0009, 7.1792},
    {50.0000, 2.4900, -0.0010, 50.0000, -2.4900, 0.0010, 7.1792},
    {50.0000, 2.4900, -0.0010, 50.0000, -2.4900, 0.0011, 7.2195},
    {50.0000, 2.4900, -0.0010, 50.0000, -2.4900, 0.0012, 7.2195},
    {50.0000, -0.0010, 2.4900, 50.0000, 0.0009, -2.4900, 4.8045},
    {50.0000, -0.0010, 2.4900, 50.0000, 0.0010, -2.4900, 4.8045},
    {50.0000, -0.0010, 2.4900, 50.0000, 0.0011, -2.4900, 4.7461},
    {50.0000, 2.5000, 0.0000, 50.0000, 0.0000, -2.5000, 4.3065},
    {50.0000, 2.5000, 0.0000, 73.0000, 25.0000, -18.0000, 27.1492},
    {50.0000, 2.5000, 0.0000, 61.0000, -5.0000, 29.0000, 22.8977},
    {50.0000, 2.5000, 0.0000, 56.0000, -27.0000, -3.0000, 31.9030},
    {50.0000, 2.5000, 0.0000, 58.0000, 24.0000, 15.0000, 19.4535},
    {50.0000, 2.5000, 0.0000, 50.0000, 3.1736, 0.5854, 1.0000},
    {50.0000, 2.5000, 0.0000, 50.0000, 3.2972, 0.0000, 1.0000},
    {50.0000, 2.5000, 0.0000, 50.0000, 1.8634, 0.5757, 1.0000},
    {50.0000, 2.5000, 0.0000, 50.0000, 3.2592, 0.3350, 1.0000},
    {60.2574, -34.0099, 36.2677, 60.4626, -34.1751, 39.4387, 1.2644},
    {63.0109, -31.0961, -5.8663, 62.8187, -29.7946, -4.0864, 1.2630},
    {61.2901, 3.7196, -5.3901, 61.4292, 2.2480, -4.9620, 1.8731},
    {35.0831, -44.1164, 3.7933, 35.0232, -40.0716, 1.5901, 1.8645},
    {22.7233, 20.0904, -46.6940, 23.0331, 14.9730, -42.5619, 2.0373},
    {36.4612, 47.8580, 18.3852, 36.2715, 50.5065, 21.2231, 1.4146},
    {90.8027, -2.0831, 1.4410, 91.1528, -1.6435, 0.0447, 1.4441},
    {90.9257, -0.5406, -0.9208, 88.6381, -0.8985, -0.7239, 1.5381},
    {6.7747, -0.2908, -2.4247, 5.8714, -0.0985, -2.2286, 0.6377},
    {2.0776, 0.0795, -1.1350, 0.9033, -0.0636, -0.5514, 0.9082},
};

// Random Lab pairs with ΔE00 frozen from scikit-image's independent
// implementation.
constexpr double kRandomPairs[][7] = {
    {31.3236, 26.6644, 77.8096, 69.9718, -57.1121, 50.3271, 59.4902188920},
    {21.5579, 3.4633, 66.7592, 54.6916, 40.4529, -4.0452, 56.3922321938},
    {93.6571, -84.7034, 87.7190, 61.6923, 56.3448, 77.9327, 71.1775667279},
    {96.8287, 74.6726, 2.6076, 38.7236, 30.4778, -72.3240, 58.8050024951},
    {9.3799, 13.5657, 6.5261, 60.0779, 25.5921, 80.0207, 50.4049943687},
    {38.1476, 80.5288, 48.8950, 6.3148, 85.5417, 28.9515, 24.3457891515},
    {44.5050, -68.9257, -64.2513, 3.2856, -15.5238, -40.4312, 34.4184331714},
    {31.6442, 9.7604, -65.9694, 91.0913, 15.9343, 6.3587, 61.6948872521},
    {24.5849, 11.9217, -44.8146, 70.7614, -22.7015, 43.6143, 70.7415408660},
    {49.8349, -49.5392, 66.7926, 70.8335, 78.3468, -4.2103, 86.1239235483},
};

LabColor random_lab(std::mt19937& rng) {
    std::uniform_real_distribution<double> dl(0.0, 100.0), dab(-90.0, 90.0);
    return {dl(rng), dab(rng), dab(rng)};
}

}  // namespace

TEST_CASE("rgb_to_lab matches the independent reference pipeline") {
    for (const auto& row : kLabReference) {
        const LabColor lab = rgb_to_lab({static_cast<std::uint8_t>(row[0]),
                                         static_cast<std::uint8_t>(row[1]),
                                         static_cast<std::uint8_t>(row[2])});
        CHECK(std::fabs(lab.l - row[3]) < 1e-3);
        CHECK(std::fabs(lab.a - row[4]) < 1e-3);
        CHECK(std::fabs(lab.b - row[5]) < 1e-3);
    }
}

TEST_CASE("rgb_to_lab endpoints") {
    const LabColor black = rgb_to_lab({0, 0, 0});
    CHECK(black.l == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(black.a == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(black.b == doctest::Approx(0.0).epsilon(1e-12));

    const LabColor white = rgb_to_lab({255, 255, 255});
    CHECK(std::fabs(white.l - 100.0) < 1e-3);
    CHECK(std::fabs(white.a) < 1e-3);
    CHECK(std::fabs(white.b) < 1e-3);

    // Gray axis stays neutral up to the published matrices' 7-digit rounding.
    const LabColor gray = rgb_to_lab({128, 128, 128});
    CHECK(std::fabs(gray.a) < 1e-4);
    CHECK(std::fabs(gray.b) < 1e-4);
}

TEST_CASE("rgb_to_lab is injective on random samples") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> ch(0, 255);
    for (int i = 0; i < 2000; ++i) {
        const RgbColor c1 = {static_cast<std::uint8_t>(ch(rng)), static_cast<std::uint8_t>(ch(rng)),
                             static_cast<std::uint8_t>(ch(rng))};
        const RgbColor c2 = {static_cast<std::uint8_t>(ch(rng)), static_cast<std::uint8_t>(ch(rng)),
                             static_cast<std::uint8_t>(ch(rng))};
        if (c1 == c2) continue;
        CHECK(lab_euclidean(rgb_to_lab(c1), rgb_to_lab(c2)) > 1e-9);
    }
}

TEST_CASE("ciede2000 matches the published worked pairs to 1e-4") {
    for (const auto& p : kCiedePairs) {
        const double got = ciede2000({p[0], p[1], p[2]}, {p[3], p[4], p[5]});
        CHECK(std::fabs(got - p[6]) < 1e-4);
    }
}

TEST_CASE("ciede2000 matches an independent oracle on random pairs") {
    for (const auto& p : kRandomPairs) {
        const double got = ciede2000({p[0], p[1], p[2]}, {p[3], p[4], p[5]});
        CHECK(std::fabs(got - p[6]) < 1e-4);
    }
}

TEST_CASE("ciede2000 identity and symmetry") {
    std::mt19937 rng(11);
    for (int i = 0; i < 200; ++i) {
        const LabColor a = random_lab(rng);
        const LabColor b = random_lab(rng);
        CHECK(ciede2000(a, a) == 0.0);
        CHECK(std::fabs(ciede2000(a, b) - ciede2000(b, a)) < 1e-12);
        CHECK(ciede2000(a, b) >= 0.0);
    }
}

TEST_CASE("ciede2000 on the neutral axis reduces to the lightness term") {
    const LabColor a = {30.0, 0.0, 0.0};
    const LabColor b = {70.0, 0.0, 0.0};
    const double mean = 50.0;  // (30+70)/2
    const double sl = 1.0 + 0.015 * (mean - 50.0) * (mean - 50.0) /
                                std::sqrt(20.0 + (mean - 50.0) * (mean - 50.0));
    CHECK(ciede2000(a, b) == doctest::Approx(40.0 / sl).epsilon(1e-12));

    const LabColor c = {20.0, 0.0, 0.0};
    const LabColor d = {35.0, 0.0, 0.0};
    const double mean2 = 27.5;
    const double sl2 = 1.0 + 0.015 * (mean2 - 50.0) * (mean2 - 50.0) /
                                 std::sqrt(20.0 + (mean2 - 50.0) * (mean2 - 50.0));
    CHECK(ciede2000(c, d) == doctest::Approx(15.0 / sl2).epsilon(1e-12));
}

TEST_CASE("d1 thresholds and scales") {
    // Pair with dE00 > 20 saturates at exactly 1.
    const LabColor q = {50.0, 2.5, 0.0};
    const LabColor far = {73.0, 25.0, -18.0};  // dE00 = 27.1492
    CHECK(d1(q, far, 20.0) == 1.0);

    // Below the threshold d1 is the linear scaling dE00 / T.
    const LabColor near = {61.0, -5.0, 29.0};  // dE00 = 22.8977
    CHECK(d1(q, near, 40.0) == doctest::Approx(ciede2000(q, near) / 40.0).epsilon(1e-12));

    CHECK(d1(q, q, 20.0) == 0.0);
    CHECK_THROWS_AS(d1(q, far, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(d1(q, far, -3.0), std::invalid_argument);
}

TEST_CASE("d1 stays in [0,1], non-decreasing in dE00, constant beyond T") {
    std::mt19937 rng(13);
    const double T = 20.0;
    struct Sample {
        double de, v;
    };
    std::vector<Sample> samples;
    for (int i = 0; i < 400; ++i) {
        const LabColor a = random_lab(rng);
        const LabColor b = random_lab(rng);
        const double v = d1(a, b, T);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        samples.push_back({ciede2000(a, b), v});
    }
    std::sort(samples.begin(), samples.end(),
              [](const Sample& x, const Sample& y) { return x.de < y.de; });
    for (std::size_t i = 1; i < samples.size(); ++i) {
        CHECK(samples[i].v >= samples[i - 1].v - 1e-12);
        if (samples[i].de >= T) CHECK(samples[i].v == 1.0);
    }
}
