#include "coldist/compass.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace coldist;

namespace {

constexpr RgbColor kColorA = {36, 68, 180};   // mid-cell blue-ish
constexpr RgbColor kColorB = {220, 140, 52};  // mid-cell orange-ish

RgbImage vertical_step(int size, int boundary, RgbColor a = kColorA, RgbColor b = kColorB) {
    RgbImage img(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) img.at(x, y) = x < boundary ? a : b;
    return img;
}

RgbImage rotate90(const RgbImage& img) {
    RgbImage out(img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) out.at(img.height - 1 - y, x) = img.at(x, y);
    return out;
}

struct Fixture {
    NamingTable table = synthetic_naming_table();
    GroundMatrix ground = learn_ground_distance(table, 0.7);
    MetricParams params;
    ColDistMetric metric{params, ground};
};

}  // namespace

TEST_CASE("uniform half-disc gives a single full-weight cluster") {
    Fixture f;
    RgbImage img(32, 32, kColorA);
    const auto sig = build_signature(img, 16, 16, 8, {0.0, true}, f.table, 10.0);
    REQUIRE(sig.has_value());
    REQUIRE(sig->clusters.size() == 1);
    CHECK(sig->clusters[0].weight == 1.0);
    CHECK(sig->clusters[0].repr.s == rgb_to_lab(kColorA));
}

TEST_CASE("an even two-color half-disc yields two clusters of weight 0.5") {
    // The negative half of the horizontal diameter at radius 2 holds exactly
    // four pixels: (-1,-1), (0,-1), (1,-1), (0,-2) relative to the center.
    RgbImage img(16, 16, kColorA);
    img.at(9, 7) = kColorB;
    img.at(8, 6) = kColorB;
    Fixture f;
    const auto sig = build_signature(img, 8, 8, 2, {0.0, false}, f.table, 10.0);
    REQUIRE(sig.has_value());
    REQUIRE(sig->clusters.size() == 2);
    CHECK(sig->clusters[0].weight == 0.5);
    CHECK(sig->clusters[1].weight == 0.5);
}

TEST_CASE("noisy half-discs stay valid signatures") {
    Fixture f;
    std::mt19937 rng(89);
    std::uniform_int_distribution<int> ch(0, 255), pos(8, 24);
    RgbImage img(32, 32);
    for (auto& px : img.pixels)
        px = {static_cast<std::uint8_t>(ch(rng)), static_cast<std::uint8_t>(ch(rng)),
              static_cast<std::uint8_t>(ch(rng))};
    for (int it = 0; it < 20; ++it) {
        const double angle = it * M_PI / 20.0;
        const auto sig =
            build_signature(img, pos(rng), pos(rng), 6, {angle, it % 2 == 0}, f.table, 10.0);
        REQUIRE(sig.has_value());
        double sum = 0.0;
        for (const auto& c : sig->clusters) {
            CHECK(c.weight > 0.0);
            sum += c.weight;
        }
        CHECK(std::fabs(sum - 1.0) < 1e-6);
        CHECK(sig->clusters.size() <= 113u);  // pixel count of a radius-6 disc
    }
}

TEST_CASE("empty half-disc is signaled at a corner") {
    Fixture f;
    RgbImage img(16, 16, kColorA);
    // At (0,0) the negative half of the horizontal diameter (dy < 0) is
    // entirely outside the image.
    const auto sig = build_signature(img, 0, 0, 2, {0.0, false}, f.table, 10.0);
    CHECK(!sig.has_value());
    const auto nonempty = build_signature(img, 0, 0, 2, {0.0, true}, f.table, 10.0);
    CHECK(nonempty.has_value());
}

TEST_CASE("compass response is exactly zero inside a uniform region") {
    Fixture f;
    RgbImage img(40, 40, kColorA);
    const auto r = compass_response(img, 20, 20, {8, 12, 10.0}, f.metric, f.table);
    CHECK(r.strength == 0.0);
    CHECK(r.orientation == 0.0);
}

TEST_CASE("ideal vertical step edge: aligned orientation and full strength") {
    Fixture f;
    const RgbImage img = vertical_step(48, 24);
    // x = 23 has pure halves under the vertical split (the on-line column
    // joins the positive half).
    const auto r = compass_response(img, 23, 24, {8, 12, 10.0}, f.metric, f.table);
    CHECK(r.orientation == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
    const double direct = f.metric(represent(kColorA, f.table), represent(kColorB, f.table)) -
                          f.metric.self_distance();
    CHECK(std::fabs(r.strength - direct) < 0.05);
}

TEST_CASE("edge map peaks at the boundary column; NE and COL_DIST agree on it") {
    Fixture f;
    const RgbImage img = vertical_step(40, 20);
    const CompassParams cp{6, 12, 10.0};

    const EdgeMap cd = detect_edges(img, cp, f.metric, f.table);
    NeMetric ne(14.0);
    const EdgeMap nm = detect_edges(img, cp, ne, f.table);

    auto peak_column = [](const EdgeMap& m, int row) {
        int best = 0;
        for (int x = 1; x < m.width; ++x)
            if (m.strength[row * m.width + x] > m.strength[row * m.width + best]) best = x;
        return best;
    };
    for (int row : {10, 20, 29}) {
        const int pc = peak_column(cd, row);
        CHECK(pc >= 19);
        CHECK(pc <= 20);
        CHECK(peak_column(nm, row) == pc);
    }

    // Strength must die off away from the boundary.
    CHECK(cd.strength[20 * cd.width + 5] == 0.0);
    CHECK(cd.strength[20 * cd.width + 35] == 0.0);
}

TEST_CASE("swapping the two region colors leaves strengths unchanged") {
    Fixture f;
    const CompassParams cp{5, 8, 10.0};
    const EdgeMap ab = detect_edges(vertical_step(28, 14, kColorA, kColorB), cp, f.metric, f.table);
    const EdgeMap ba = detect_edges(vertical_step(28, 14, kColorB, kColorA), cp, f.metric, f.table);
    REQUIRE(ab.strength.size() == ba.strength.size());
    for (std::size_t i = 0; i < ab.strength.size(); ++i)
        CHECK(std::fabs(ab.strength[i] - ba.strength[i]) < 1e-9);
}

TEST_CASE("rotating the image by 90 degrees rotates the winning orientation") {
    Fixture f;
    const CompassParams cp{6, 12, 10.0};
    const RgbImage img = vertical_step(36, 18);
    const RgbImage rot = rotate90(img);

    const EdgeMap em = detect_edges(img, cp, f.metric, f.table);
    const EdgeMap rm = detect_edges(rot, cp, f.metric, f.table);

    auto global_peak = [](const EdgeMap& m) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < m.strength.size(); ++i)
            if (m.strength[i] > m.strength[best]) best = i;
        return best;
    };
    const double o1 = em.orientation[global_peak(em)];
    const double o2 = rm.orientation[global_peak(rm)];
    double diff = std::fabs(o1 - o2);
    diff = std::min(diff, M_PI - diff);  // orientations live on [0, pi)
    const double step = M_PI / cp.orientations;
    CHECK(std::fabs(diff - M_PI / 2.0) <= step + 1e-12);
}

TEST_CASE("detect_edges is deterministic across runs") {
    Fixture f;
    std::mt19937 rng(97);
    std::uniform_int_distribution<int> ch(0, 255);
    RgbImage img(30, 30);
    for (auto& px : img.pixels)
        px = {static_cast<std::uint8_t>(ch(rng)), static_cast<std::uint8_t>(ch(rng)),
              static_cast<std::uint8_t>(ch(rng))};
    const CompassParams cp{5, 6, 10.0};
    const EdgeMap a = detect_edges(img, cp, f.metric, f.table);
    const EdgeMap b = detect_edges(img, cp, f.metric, f.table);
    CHECK(a.strength == b.strength);
    CHECK(a.orientation == b.orientation);
}

TEST_CASE("constant image gives an identically zero edge map") {
    Fixture f;
    const EdgeMap m = detect_edges(RgbImage(24, 24, kColorB), {5, 8, 10.0}, f.metric, f.table);
    for (double s : m.strength) CHECK(s == 0.0);
}

TEST_CASE("strength under COL_DIST stays below its supremum") {
    Fixture f;
    const EdgeMap m = detect_edges(vertical_step(28, 14), {5, 8, 10.0}, f.metric, f.table);
    for (double s : m.strength) {
        CHECK(s >= 0.0);
        CHECK(s < 1.0);
    }
}

TEST_CASE("thin_edges keeps only the across-edge maxima") {
    Fixture f;
    const CompassParams cp{5, 12, 10.0};
    const RgbImage img = vertical_step(28, 14);
    const EdgeMap raw = detect_edges(img, cp, f.metric, f.table);
    const EdgeMap thinned = thin_edges(raw);

    // On rows with full discs the step ridge collapses to a single column;
    // clipped border rows may keep a few diagonal responses.
    for (int y = cp.radius; y < thinned.height - cp.radius; ++y) {
        int nonzero = 0, best = 0;
        for (int x = 0; x < thinned.width; ++x) {
            if (thinned.strength[y * thinned.width + x] > 0.0) ++nonzero;
            if (thinned.strength[y * thinned.width + x] >
                thinned.strength[y * thinned.width + best])
                best = x;
        }
        CHECK(nonzero == 1);
        CHECK(best == 13);
    }
    int raw_nonzero = 0, thin_nonzero = 0;
    for (std::size_t i = 0; i < raw.strength.size(); ++i) {
        if (raw.strength[i] > 0.0) ++raw_nonzero;
        if (thinned.strength[i] > 0.0) ++thin_nonzero;
    }
    CHECK(thin_nonzero * 3 < raw_nonzero);

    const EdgeMap flat = thin_edges(detect_edges(RgbImage(24, 24, kColorA), cp, f.metric, f.table));
    for (double s : flat.strength) CHECK(s == 0.0);
}

TEST_CASE("parameter validation") {
    Fixture f;
    RgbImage img(20, 20, kColorA);
    CHECK_THROWS_AS(compass_response(img, 5, 5, {1, 12, 10.0}, f.metric, f.table),
                    std::invalid_argument);
    CHECK_THROWS_AS(compass_response(img, 5, 5, {8, 1, 10.0}, f.metric, f.table),
                    std::invalid_argument);
    CHECK_THROWS_AS(compass_response(img, 50, 5, {8, 12, 10.0}, f.metric, f.table),
                    std::invalid_argument);
    CHECK_THROWS_AS(detect_edges(img, {10, 12, 10.0}, f.metric, f.table), std::invalid_argument);
    CHECK_THROWS_AS(build_signature(img, 5, 5, 1, {0.0, true}, f.table, 10.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_signature(img, 5, 5, 4, {0.0, true}, f.table, 0.0),
                    std::invalid_argument);
}
