#include "coldist/image_io.hpp"
#include "coldist/metric.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace coldist;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

// Command-line misuse (bad hex literal, missing table flag, ...), as opposed
// to broken input data.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::optional<RgbColor> try_parse_hex(std::string s) {
    if (!s.empty() && s[0] == '#') s.erase(0, 1);
    if (s.size() != 6) return std::nullopt;
    int v[6];
    for (int i = 0; i < 6; ++i) {
        v[i] = hex_nibble(s[i]);
        if (v[i] < 0) return std::nullopt;
    }
    return RgbColor{static_cast<std::uint8_t>(v[0] * 16 + v[1]),
                    static_cast<std::uint8_t>(v[2] * 16 + v[3]),
                    static_cast<std::uint8_t>(v[4] * 16 + v[5])};
}

RgbColor parse_hex_arg(const std::string& s) {
    auto c = try_parse_hex(s);
    if (!c) throw UsageError("malformed color '" + s + "' (expected RRGGBB hex)");
    return *c;
}

std::string to_hex(RgbColor c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

struct CliConfig {
    std::string metric_name = "coldist";
    std::string table_path;
    bool synthetic_table = false;
    std::string ground_path;
    MetricParams params;
    CompassParams compass;
    bool thin = false;
    std::string out;
};

MetricKind metric_kind(const CliConfig& cfg) {
    auto kind = parse_metric_kind(cfg.metric_name);
    if (!kind)
        throw UsageError("unknown metric '" + cfg.metric_name +
                         "' (expected coldist, tc, ne or ciede2000)");
    return *kind;
}

// `required` commands always need term probabilities; the rest only when the
// selected metric is coldist (the baselines ignore the term vectors, so the
// built-in fallback is good enough for their plumbing).
NamingTable resolve_table(const CliConfig& cfg, bool required) {
    if (cfg.synthetic_table) return synthetic_naming_table();
    if (!cfg.table_path.empty()) return load_naming_table_csv(cfg.table_path);
    if (required || metric_kind(cfg) == MetricKind::coldist)
        throw UsageError(
            "no naming table: pass --table <csv>, set COLDIST_TABLE, or use "
            "--synthetic-table; see README section 'Naming table' for converting "
            "the published table to CSV");
    return synthetic_naming_table();
}

GroundMatrix resolve_ground(const CliConfig& cfg, const NamingTable& table) {
    if (!cfg.ground_path.empty()) return load_ground_matrix(cfg.ground_path);
    return learn_ground_distance(table, cfg.params.t);
}

std::vector<RgbColor> load_palette(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<RgbColor> palette;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        auto c = try_parse_hex(line);
        if (!c)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed color '" + line + "'");
        palette.push_back(*c);
    }
    return palette;
}

int cmd_dist(const CliConfig& cfg, const std::string& hex_a, const std::string& hex_b) {
    metric_kind(cfg);  // reject unknown --metric even though dist prints all four
    const RgbColor a = parse_hex_arg(hex_a);
    const RgbColor b = parse_hex_arg(hex_b);
    cfg.params.validate();
    const NamingTable table = resolve_table(cfg, /*required=*/true);
    const GroundMatrix ground = resolve_ground(cfg, table);
    const ColorRepr va = represent(a, table);
    const ColorRepr vb = represent(b, table);
    std::cout << "coldist,tc,ne,ciede2000\n"
              << fmt(col_dist(va, vb, cfg.params, ground)) << ","
              << fmt(tc_dist(va.s, vb.s, cfg.params.T)) << ","
              << fmt(ne_dist(va.s, vb.s, cfg.params.gamma)) << ","
              << fmt(ciede2000(va.s, vb.s)) << "\n";
    return 0;
}

int cmd_strip(const CliConfig& cfg, const std::string& reference_hex,
              const std::string& palette_path) {
    const RgbColor reference = parse_hex_arg(reference_hex);
    cfg.params.validate();
    const std::vector<RgbColor> palette = load_palette(palette_path);
    if (palette.size() < 2)
        throw std::runtime_error(palette_path + ": palette needs at least 2 colors");

    const NamingTable table = resolve_table(cfg, /*required=*/false);
    GroundMatrix ground;
    if (metric_kind(cfg) == MetricKind::coldist) ground = resolve_ground(cfg, table);
    const auto metric = make_metric(metric_kind(cfg), cfg.params, std::move(ground));

    const ColorRepr ref = represent(reference, table);
    struct Entry {
        RgbColor color;
        double distance;
    };
    std::vector<Entry> entries;
    entries.reserve(palette.size());
    for (RgbColor c : palette) entries.push_back({c, (*metric)(ref, represent(c, table))});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& x, const Entry& y) { return x.distance < y.distance; });

    std::cout << "hex,distance\n";
    for (const auto& e : entries) std::cout << to_hex(e.color) << "," << fmt(e.distance) << "\n";

    // Rendered strip: the reference swatch on the left, then the palette in
    // ascending distance order.
    constexpr int kSwatchW = 24, kSwatchH = 32;
    RgbImage strip(kSwatchW * static_cast<int>(entries.size() + 1), kSwatchH);
    auto fill = [&](int slot, RgbColor c) {
        for (int y = 0; y < kSwatchH; ++y)
            for (int x = 0; x < kSwatchW; ++x) strip.at(slot * kSwatchW + x, y) = c;
    };
    fill(0, reference);
    for (std::size_t i = 0; i < entries.size(); ++i) fill(static_cast<int>(i + 1), entries[i].color);
    write_png_rgb(strip, cfg.out.empty() ? "strip.png" : cfg.out);
    return 0;
}

int cmd_learn_d(const CliConfig& cfg) {
    cfg.params.validate();
    const NamingTable table = resolve_table(cfg, /*required=*/true);
    const GroundMatrix ground = learn_ground_distance(table, cfg.params.t);
    save_ground_matrix(ground, cfg.out.empty() ? "ground-matrix.csv" : cfg.out);

    std::vector<double> offdiag;
    for (int i = 0; i < ground.size(); ++i)
        for (int j = i + 1; j < ground.size(); ++j) offdiag.push_back(ground.at(i, j));
    std::sort(offdiag.begin(), offdiag.end());
    const std::size_t n = offdiag.size();
    const double median =
        n % 2 ? offdiag[n / 2] : (offdiag[n / 2 - 1] + offdiag[n / 2]) / 2.0;
    std::cout << "offdiag_min,offdiag_median,offdiag_max\n"
              << fmt(offdiag.front()) << "," << fmt(median) << "," << fmt(offdiag.back()) << "\n";
    return 0;
}

int cmd_edge(const CliConfig& cfg, const std::string& input_path) {
    cfg.params.validate();
    const RgbImage image = read_image(input_path);
    const NamingTable table = resolve_table(cfg, /*required=*/false);
    GroundMatrix ground;
    if (metric_kind(cfg) == MetricKind::coldist) ground = resolve_ground(cfg, table);
    const auto metric = make_metric(metric_kind(cfg), cfg.params, std::move(ground));

    EdgeMap map = detect_edges(image, cfg.compass, *metric, table);
    if (cfg.thin) map = thin_edges(map);
    write_png_gray(map.width, map.height, edge_map_to_gray(map),
                   cfg.out.empty() ? "edge.png" : cfg.out);
    double max_strength = 0.0;
    for (double s : map.strength) max_strength = std::max(max_strength, s);
    std::cout << "max_strength\n" << fmt(max_strength) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"COL_DIST perceptual color difference and compass color edge detection"};
    app.require_subcommand(1);
    app.fallthrough();

    CliConfig cfg;
    app.add_option("--metric", cfg.metric_name, "coldist | tc | ne | ciede2000")
        ->capture_default_str();
    app.add_option("--table", cfg.table_path, "naming table CSV (32768 rows)")
        ->envname("COLDIST_TABLE");
    app.add_flag("--synthetic-table", cfg.synthetic_table,
                 "use the built-in delta-prototype naming table");
    app.add_option("--ground", cfg.ground_path, "precomputed ground matrix CSV");
    app.add_option("--T", cfg.params.T, "CIEDE2000 saturation threshold")->capture_default_str();
    app.add_option("--alpha", cfg.params.alpha, "blend weight of d1 vs d2")->capture_default_str();
    app.add_option("--Z", cfg.params.Z, "sigmoid scale")->capture_default_str();
    app.add_option("--gamma", cfg.params.gamma, "NE decay")->capture_default_str();
    app.add_option("--t", cfg.params.t, "ground-distance threshold")->capture_default_str();
    app.add_option("--radius", cfg.compass.radius, "compass disc radius (px)")
        ->capture_default_str();
    app.add_option("--orientations", cfg.compass.orientations, "compass orientation count")
        ->capture_default_str();
    app.add_option("--quant-step", cfg.compass.quant_step, "Lab signature bucket size")
        ->capture_default_str();
    app.add_option("--out", cfg.out, "output path");

    std::string hex_a, hex_b, reference_hex, palette_path, input_path;

    auto* dist = app.add_subcommand("dist", "print all four metrics for a color pair");
    dist->add_option("colorA", hex_a, "RRGGBB hex")->required();
    dist->add_option("colorB", hex_b, "RRGGBB hex")->required();

    auto* strip = app.add_subcommand(
        "strip", "sort a palette by distance to a reference; PNG strip + CSV ordering");
    strip->add_option("reference", reference_hex, "RRGGBB hex")->required();
    strip->add_option("palette", palette_path, "one hex color per line")->required();

    auto* learn = app.add_subcommand("learn-d", "learn the term ground-distance matrix");

    auto* edge = app.add_subcommand("edge", "compass edge detection, grayscale PNG output");
    edge->add_option("input", input_path, "PNG or PPM image")->required();
    edge->add_flag("--thin", cfg.thin, "non-maximum suppression across the edge direction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (dist->parsed()) return cmd_dist(cfg, hex_a, hex_b);
        if (strip->parsed()) return cmd_strip(cfg, reference_hex, palette_path);
        if (learn->parsed()) return cmd_learn_d(cfg);
        if (edge->parsed()) return cmd_edge(cfg, input_path);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
