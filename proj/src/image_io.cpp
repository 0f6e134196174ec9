#include "coldist/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace coldist {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

RgbImage read_png(const std::string& path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) throw std::runtime_error("cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("failed to decode PNG: " + path);
    }
    png_init_io(png, file.get());
    png_read_info(png, info);

    // Normalize everything to 8-bit RGB (expand covers palette and tRNS).
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    if (!(png_get_color_type(png, info) & PNG_COLOR_MASK_COLOR))
        png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    if (png_get_rowbytes(png, info) != static_cast<std::size_t>(width) * 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("failed to decode PNG: " + path);
    }

    RgbImage image(width, height);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * 3);
    for (int y = 0; y < height; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (int x = 0; x < width; ++x)
            image.at(x, y) = {row[3 * x], row[3 * x + 1], row[3 * x + 2]};
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

int next_ppm_token(std::istream& in) {
    // Skips whitespace and '#' comments, then reads one non-negative int.
    for (;;) {
        const int c = in.peek();
        if (c == '#') {
            std::string dummy;
            std::getline(in, dummy);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int value = -1;
    in >> value;
    return in ? value : -1;
}

RgbImage read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[2] = {};
    in.read(magic, 2);
    const bool binary = magic[0] == 'P' && magic[1] == '6';
    const bool ascii = magic[0] == 'P' && magic[1] == '3';
    if (!binary && !ascii) throw std::runtime_error("not a P6/P3 PPM: " + path);
    const int width = next_ppm_token(in);
    const int height = next_ppm_token(in);
    const int maxval = next_ppm_token(in);
    if (width <= 0 || height <= 0 || maxval != 255)
        throw std::runtime_error("unsupported PPM header in " + path + " (need maxval 255)");
    RgbImage image(width, height);
    if (binary) {
        in.get();  // single whitespace after maxval
        std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * 3);
        in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
        if (in.gcount() != static_cast<std::streamsize>(data.size()))
            throw std::runtime_error("truncated PPM: " + path);
        for (std::size_t i = 0; i < image.pixels.size(); ++i)
            image.pixels[i] = {data[3 * i], data[3 * i + 1], data[3 * i + 2]};
    } else {
        for (auto& px : image.pixels) {
            const int r = next_ppm_token(in);
            const int g = next_ppm_token(in);
            const int b = next_ppm_token(in);
            if (r < 0 || g < 0 || b < 0 || r > 255 || g > 255 || b > 255)
                throw std::runtime_error("bad sample in PPM: " + path);
            px = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                  static_cast<std::uint8_t>(b)};
        }
    }
    return image;
}

void write_png(const std::string& path, int width, int height, int color_type,
               const std::uint8_t* data, std::size_t stride) {
    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("failed to write PNG: " + path);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y)
        png_write_row(png, const_cast<png_bytep>(data + y * stride));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

RgbImage read_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw std::runtime_error("cannot open " + path);
    unsigned char magic[8] = {};
    probe.read(reinterpret_cast<char*>(magic), 8);
    probe.close();
    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (std::memcmp(magic, png_sig, 8) == 0) return read_png(path);
    if (magic[0] == 'P' && (magic[1] == '6' || magic[1] == '3')) return read_ppm(path);
    throw std::runtime_error("unrecognized image format: " + path);
}

void write_png_rgb(const RgbImage& image, const std::string& path) {
    std::vector<std::uint8_t> data(image.pixels.size() * 3);
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        data[3 * i] = image.pixels[i].r;
        data[3 * i + 1] = image.pixels[i].g;
        data[3 * i + 2] = image.pixels[i].b;
    }
    write_png(path, image.width, image.height, PNG_COLOR_TYPE_RGB, data.data(),
              static_cast<std::size_t>(image.width) * 3);
}

void write_png_gray(int width, int height, const std::vector<std::uint8_t>& gray,
                    const std::string& path) {
    if (gray.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("write_png_gray: buffer size mismatch");
    write_png(path, width, height, PNG_COLOR_TYPE_GRAY, gray.data(),
              static_cast<std::size_t>(width));
}

std::vector<std::uint8_t> edge_map_to_gray(const EdgeMap& map) {
    double max_strength = 0.0;
    for (double s : map.strength) max_strength = std::max(max_strength, s);
    std::vector<std::uint8_t> gray(map.strength.size(), 0);
    if (max_strength > 0.0) {
        for (std::size_t i = 0; i < gray.size(); ++i) {
            const long v = std::lround(255.0 * map.strength[i] / max_strength);
            gray[i] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
        }
    }
    return gray;
}

}  // namespace coldist
