#pragma once

#include "coldist/compass.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace coldist {

// Decodes PNG or PPM (P6/P3, maxval 255) by sniffing the file's magic bytes.
// Throws std::runtime_error on unreadable or undecodable input.
RgbImage read_image(const std::string& path);

void write_png_rgb(const RgbImage& image, const std::string& path);
void write_png_gray(int width, int height, const std::vector<std::uint8_t>& gray,
                    const std::string& path);

// Linear map of strengths from [0, max strength] to [0, 255]; an all-zero
// map stays black.
std::vector<std::uint8_t> edge_map_to_gray(const EdgeMap& map);

}  // namespace coldist
