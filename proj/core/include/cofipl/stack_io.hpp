#pragma once

#include "cofipl/image.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cofipl::io {

/// Raised for malformed files and failed reads/writes.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Complex stack file: magic "COFI1\0", u32 p, rows, cols (little-endian),
/// then rows*cols*p pairs of f32 (re, im), row-major with time fastest.
inline constexpr char kStackMagic[6] = {'C', 'O', 'F', 'I', '1', '\0'};
/// Real raster file, same layout: magic "COFR1\0", u32 channels, rows, cols,
/// then rows*cols*channels f32, channel fastest.
inline constexpr char kRasterMagic[6] = {'C', 'O', 'F', 'R', '1', '\0'};

std::vector<std::uint8_t> encode_stack(const ImageStack& stack);
ImageStack decode_stack(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> encode_raster(const RealRaster& raster);
RealRaster decode_raster(const std::vector<std::uint8_t>& bytes);

void write_stack(const std::filesystem::path& path, const ImageStack& stack);
ImageStack read_stack(const std::filesystem::path& path);

void write_raster(const std::filesystem::path& path, const RealRaster& raster);
RealRaster read_raster(const std::filesystem::path& path);

/// Binary PGM (P5), 8-bit grayscale.
void write_pgm(const std::filesystem::path& path, Index rows, Index cols,
               const std::vector<std::uint8_t>& pixels);

/// Linear map of wrapped phase (-pi, pi] to 0..255.
std::vector<std::uint8_t> render_phase(const std::vector<float>& phase);

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

}  // namespace cofipl::io
