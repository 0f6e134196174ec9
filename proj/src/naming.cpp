#include "coldist/naming.hpp"

#include "coldist/colorspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace coldist {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' '))
            field.pop_back();
        std::size_t start = 0;
        while (start < field.size() && field[start] == ' ') ++start;
        out.push_back(field.substr(start));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(where + ": not a number: '" + s + "'");
    }
}

int parse_channel(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(where + ": not an integer: '" + s + "'");
    }
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

constexpr double kRowSumTol = 1e-3;

}  // namespace

const std::vector<std::string>& basic_color_terms() {
    static const std::vector<std::string> terms = {
        "black", "blue", "brown",  "grey", "green", "orange",
        "pink",  "purple", "red", "white", "yellow"};
    return terms;
}

int NamingTable::cell_index(RgbColor c) {
    return (c.r / kRgbQuantStep) * kCellsPerAxis * kCellsPerAxis +
           (c.g / kRgbQuantStep) * kCellsPerAxis + (c.b / kRgbQuantStep);
}

NamingTable load_naming_table_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("naming table: empty input");
    auto header = split_csv(line);
    if (header.size() < 4 || header[0] != "r" || header[1] != "g" || header[2] != "b")
        throw std::runtime_error("naming table: header must start with r,g,b followed by term names");
    NamingTable table;
    table.term_names.assign(header.begin() + 3, header.end());
    const int k = static_cast<int>(table.term_names.size());
    table.probs = Matrix(kCellCount, k);
    std::vector<char> seen(kCellCount, 0);

    int row_index = 0;  // 1-based index of the data row being parsed
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row_index;
        const std::string where = "naming table row " + std::to_string(row_index);
        auto fields = split_csv(line);
        if (static_cast<int>(fields.size()) != k + 3)
            throw std::runtime_error(where + ": expected " + std::to_string(k + 3) +
                                     " columns, got " + std::to_string(fields.size()));
        const int r = parse_channel(fields[0], where);
        const int g = parse_channel(fields[1], where);
        const int b = parse_channel(fields[2], where);
        for (int ch : {r, g, b})
            if (ch < 0 || ch > 255 - kRgbQuantStep + 1 || ch % kRgbQuantStep != 0)
                throw std::runtime_error(where + ": r,g,b must be cell base values (0,8,...,248)");
        const int cell = NamingTable::cell_index(
            {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)});
        if (seen[cell])
            throw std::runtime_error(where + ": duplicate cell (" + std::to_string(r) + "," +
                                     std::to_string(g) + "," + std::to_string(b) + ")");
        seen[cell] = 1;
        double sum = 0.0;
        for (int i = 0; i < k; ++i) {
            const double p = parse_double(fields[3 + i], where);
            if (p < 0.0)
                throw std::runtime_error(where + ": negative probability for term '" +
                                         table.term_names[i] + "'");
            table.probs.at(cell, i) = p;
            sum += p;
        }
        if (std::fabs(sum - 1.0) > kRowSumTol)
            throw std::runtime_error(where + ": probabilities sum to " + std::to_string(sum) +
                                     ", outside [1-1e-3, 1+1e-3]");
        for (int i = 0; i < k; ++i) table.probs.at(cell, i) /= sum;
    }
    if (row_index != kCellCount)
        throw std::runtime_error("naming table: expected " + std::to_string(kCellCount) +
                                 " data rows, got " + std::to_string(row_index));
    return table;
}

NamingTable load_naming_table_csv(const std::string& path) {
    auto in = open_input(path);
    try {
        return load_naming_table_csv(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

NamingTable synthetic_naming_table() {
    // One prototype color per term; cells take a delta distribution on the
    // nearest prototype.
    static const RgbColor prototypes[] = {
        {0, 0, 0},        // black
        {0, 0, 255},      // blue
        {139, 69, 19},    // brown
        {128, 128, 128},  // grey
        {0, 128, 0},      // green
        {255, 165, 0},    // orange
        {255, 192, 203},  // pink
        {128, 0, 128},    // purple
        {255, 0, 0},      // red
        {255, 255, 255},  // white
        {255, 255, 0},    // yellow
    };
    const int k = static_cast<int>(basic_color_terms().size());
    LabColor proto_lab[11];
    for (int i = 0; i < k; ++i) proto_lab[i] = rgb_to_lab(prototypes[i]);

    NamingTable table;
    table.term_names = basic_color_terms();
    table.probs = Matrix(kCellCount, k);
    for (int cell = 0; cell < kCellCount; ++cell) {
        const int r = (cell / (kCellsPerAxis * kCellsPerAxis)) * kRgbQuantStep + kRgbQuantStep / 2;
        const int g = ((cell / kCellsPerAxis) % kCellsPerAxis) * kRgbQuantStep + kRgbQuantStep / 2;
        const int b = (cell % kCellsPerAxis) * kRgbQuantStep + kRgbQuantStep / 2;
        const LabColor lab = rgb_to_lab({static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                         static_cast<std::uint8_t>(b)});
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int i = 0; i < k; ++i) {
            const double d = lab_euclidean(lab, proto_lab[i]);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        table.probs.at(cell, best) = 1.0;
    }
    return table;
}

TermProbabilities term_probabilities(const NamingTable& table, RgbColor c) {
    const auto row = table.row(NamingTable::cell_index(c));
    return {row.begin(), row.end()};
}

GroundMatrix learn_ground_distance(const Matrix& table, std::vector<std::string> names, double t) {
    if (!(t > 0.0 && t <= 1.0))
        throw std::invalid_argument("learn_ground_distance: t must be in (0, 1]");
    const int k = table.cols;
    if (static_cast<int>(names.size()) != k)
        throw std::invalid_argument("learn_ground_distance: name count does not match columns");

    std::vector<double> column_sum(k, 0.0);
    for (int n = 0; n < table.rows; ++n)
        for (int j = 0; j < k; ++j) column_sum[j] += table.at(n, j);
    for (int j = 0; j < k; ++j)
        if (column_sum[j] <= 0.0)
            throw std::runtime_error("learn_ground_distance: term '" + names[j] +
                                     "' has zero probability everywhere");

    GroundMatrix gm;
    gm.term_names = std::move(names);
    gm.d = Matrix(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            double min_sum = 0.0;
            for (int n = 0; n < table.rows; ++n)
                min_sum += std::min(table.at(n, i), table.at(n, j));
            const double denom = column_sum[i] + column_sum[j];
            double dhat = 1.0 - 2.0 * (min_sum / denom);
            dhat = std::clamp(dhat, 0.0, 1.0);
            const double d = std::min(dhat, t) / t;
            gm.d.at(i, j) = d;
            gm.d.at(j, i) = d;
        }
        gm.d.at(i, i) = 0.0;
    }
    return gm;
}

GroundMatrix learn_ground_distance(const NamingTable& table, double t) {
    return learn_ground_distance(table.probs, table.term_names, t);
}

void save_ground_matrix(const GroundMatrix& D, std::ostream& out) {
    const int k = D.size();
    for (int i = 0; i < k; ++i) out << (i ? "," : "") << D.term_names[i];
    out << "\n";
    char buf[32];
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            std::snprintf(buf, sizeof buf, "%.15g", D.at(i, j));
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
}

void save_ground_matrix(const GroundMatrix& D, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    save_ground_matrix(D, out);
    if (!out) throw std::runtime_error("failed to write " + path);
}

GroundMatrix load_ground_matrix(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("ground matrix: empty input");
    GroundMatrix gm;
    gm.term_names = split_csv(line);
    const int k = static_cast<int>(gm.term_names.size());
    if (k == 0) throw std::runtime_error("ground matrix: empty header");
    gm.d = Matrix(k, k);
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (row >= k) throw std::runtime_error("ground matrix: more than " + std::to_string(k) + " rows");
        const std::string where = "ground matrix row " + std::to_string(row + 1);
        auto fields = split_csv(line);
        if (static_cast<int>(fields.size()) != k)
            throw std::runtime_error(where + ": expected " + std::to_string(k) + " values, got " +
                                     std::to_string(fields.size()));
        for (int j = 0; j < k; ++j) {
            const double v = parse_double(fields[j], where);
            if (v < 0.0 || v > 1.0)
                throw std::runtime_error(where + ": entry " + std::to_string(v) + " outside [0, 1]");
            gm.d.at(row, j) = v;
        }
        ++row;
    }
    if (row != k)
        throw std::runtime_error("ground matrix: expected " + std::to_string(k) + " rows, got " +
                                 std::to_string(row));
    for (int i = 0; i < k; ++i) {
        if (std::fabs(gm.d.at(i, i)) > 1e-9)
            throw std::runtime_error("ground matrix: nonzero diagonal at " + gm.term_names[i]);
        for (int j = i + 1; j < k; ++j)
            if (std::fabs(gm.d.at(i, j) - gm.d.at(j, i)) > 1e-9)
                throw std::runtime_error("ground matrix: asymmetry between '" + gm.term_names[i] +
                                         "' and '" + gm.term_names[j] + "'");
    }
    return gm;
}

GroundMatrix load_ground_matrix(const std::string& path) {
    auto in = open_input(path);
    try {
        return load_ground_matrix(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace coldist
