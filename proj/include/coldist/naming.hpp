#pragma once

#include "coldist/color.hpp"
#include "coldist/emd.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace coldist {

// Probability distribution over the basic color terms, indexed in the fixed
// order given by the table's term_names.
using TermProbabilities = std::vector<double>;

inline constexpr int kRgbQuantStep = 8;
inline constexpr int kCellsPerAxis = 32;
inline constexpr int kCellCount = kCellsPerAxis * kCellsPerAxis * kCellsPerAxis;

// The eleven English basic color terms in the library-wide order.
const std::vector<std::string>& basic_color_terms();

// Quantized-RGB-cell -> term-probability table (one row per 8x8x8 RGB cell).
struct NamingTable {
    std::vector<std::string> term_names;
    Matrix probs;  // kCellCount rows, one normalized distribution each

    int term_count() const { return probs.cols; }
    static int cell_index(RgbColor c);
    std::span<const double> row(int cell) const {
        return {probs.v.data() + static_cast<std::size_t>(cell) * probs.cols,
                static_cast<std::size_t>(probs.cols)};
    }
};

// CSV ingestion. Header: r,g,b then the term names; 32768 data rows keyed by
// the cell's lowest channel values. Rows whose probabilities sum within 1e-3
// of 1 are renormalized; anything else is an error (reported with its data
// row index). Throws std::runtime_error.
NamingTable load_naming_table_csv(std::istream& in);
NamingTable load_naming_table_csv(const std::string& path);

// Built-in fallback: every cell gets a delta distribution on the term whose
// prototype color is nearest (Lab Euclidean) to the cell center. Lets the
// whole suite run without the externally converted table.
NamingTable synthetic_naming_table();

// Row lookup for the cell containing c (floor division by 8, no interpolation).
TermProbabilities term_probabilities(const NamingTable& table, RgbColor c);

// Term-to-term ground distance matrix.
struct GroundMatrix {
    std::vector<std::string> term_names;
    Matrix d;  // K x K, symmetric, zero diagonal, entries in [0, 1]

    int size() const { return d.rows; }
    double at(int i, int j) const { return d.at(i, j); }
};

// Dhat_ij = 1 - 2 * sum_n min(M_ni, M_nj) / sum_n (M_ni + M_nj), then
// D_ij = min(Dhat_ij, t) / t with the diagonal forced to exactly 0.
// Requires t in (0, 1]; a term column with no mass at all is an error.
GroundMatrix learn_ground_distance(const Matrix& table, std::vector<std::string> names, double t);
GroundMatrix learn_ground_distance(const NamingTable& table, double t);

// Lossless CSV round-trip: header of term names, then K rows of K values.
// load_ground_matrix re-validates symmetry (1e-9), range and zero diagonal.
void save_ground_matrix(const GroundMatrix& D, std::ostream& out);
void save_ground_matrix(const GroundMatrix& D, const std::string& path);
GroundMatrix load_ground_matrix(std::istream& in);
GroundMatrix load_ground_matrix(const std::string& path);

}  // namespace coldist
