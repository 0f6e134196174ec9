#pragma once

#include <cstdint>

namespace coldist {

// 8-bit sRGB-encoded color.
struct RgbColor {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const RgbColor&, const RgbColor&) = default;
};

// A point in CIELAB space. Everything in this library that produces LabColor
// uses illuminant D50 (Bradford-adapted), 2 degree observer.
struct LabColor {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;

    friend bool operator==(const LabColor&, const LabColor&) = default;
};

}  // namespace coldist
