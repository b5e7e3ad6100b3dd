#include <png.h>

#include <cstring>

#include "trailroute/error.hpp"
#include "trailroute/raster.hpp"

namespace trailroute {

namespace {

struct Rgba {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> pixels;  // 4 bytes per pixel
};

Rgba read_rgba(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw IoError("cannot open image " + path.string());

    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
        throw MalformedImage(path.string() + ": " + image.message);
    }
    image.format = PNG_FORMAT_RGBA;
    Rgba out;
    out.height = static_cast<int>(image.height);
    out.width = static_cast<int>(image.width);
    out.pixels.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw MalformedImage(path.string() + ": " + msg);
    }
    if (out.height < 1 || out.width < 1) throw MalformedImage(path.string() + ": empty image");
    return out;
}

void write_png(const std::filesystem::path& path, int height, int width, png_uint_32 format,
               const std::uint8_t* data) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, data, 0, nullptr)) {
        throw IoError("cannot write " + path.string() + ": " + image.message);
    }
}

}  // namespace

MapImage load_image(const std::filesystem::path& path) {
    const Rgba src = read_rgba(path);
    MapImage img(src.height, src.width);
    for (int r = 0; r < src.height; ++r) {
        for (int c = 0; c < src.width; ++c) {
            const std::size_t i = (static_cast<std::size_t>(r) * src.width + c) * 4;
            img.set(r, c, {src.pixels[i], src.pixels[i + 1], src.pixels[i + 2]});
        }
    }
    return img;
}

void save_image(const MapImage& image, const std::filesystem::path& path) {
    write_png(path, image.height(), image.width(), PNG_FORMAT_RGB, image.data().data());
}

TrailMask load_mask(const std::filesystem::path& path) {
    const Rgba src = read_rgba(path);
    TrailMask mask(src.height, src.width);
    for (int r = 0; r < src.height; ++r) {
        for (int c = 0; c < src.width; ++c) {
            const std::size_t i = (static_cast<std::size_t>(r) * src.width + c) * 4;
            const double luma = 0.299 * src.pixels[i] + 0.587 * src.pixels[i + 1] + 0.114 * src.pixels[i + 2];
            mask.set(r, c, luma > 127.0);
        }
    }
    return mask;
}

void save_mask(const BinaryRaster& mask, const std::filesystem::path& path) {
    std::vector<std::uint8_t> gray(mask.bits().size());
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask.bits()[i] ? 255 : 0;
    write_png(path, mask.height(), mask.width(), PNG_FORMAT_GRAY, gray.data());
}

}  // namespace trailroute
