#pragma once

#include "coldist/color.hpp"

namespace coldist {

// sRGB (IEC 61966-2-1 transfer curve) -> linear RGB -> XYZ (D65) ->
// Bradford chromatic adaptation -> CIELAB under the D50 white point.
LabColor rgb_to_lab(RgbColor c);

// CIEDE2000 color difference with parametric factors kL = kC = kH = 1.
double ciede2000(const LabColor& s1, const LabColor& s2);

// Thresholded and scaled CIEDE2000: min(dE00, threshold) / threshold.
// Result is in [0, 1]. Throws std::invalid_argument unless threshold > 0.
double d1(const LabColor& s1, const LabColor& s2, double threshold);

// Plain Euclidean distance in Lab coordinates.
double lab_euclidean(const LabColor& s1, const LabColor& s2);

}  // namespace coldist
