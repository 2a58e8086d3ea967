#include "cofipl/stack_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

namespace cofipl::io {

namespace {

constexpr std::size_t kHeaderSize = 6 + 3 * 4;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f32(std::vector<std::uint8_t>& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }

std::uint32_t checked_dim(Index v, const char* what) {
  if (v < 1 || v > static_cast<Index>(UINT32_MAX)) {
    throw IoError(std::string("dimension out of range: ") + what);
  }
  return static_cast<std::uint32_t>(v);
}

struct Header {
  std::uint32_t a, rows, cols;
};

Header read_header(const std::vector<std::uint8_t>& bytes, const char (&magic)[6],
                   std::size_t value_size) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), magic, 6) != 0) {
    throw IoError(std::string("bad magic, expected ") + magic);
  }
  Header h{get_u32(bytes.data() + 6), get_u32(bytes.data() + 10), get_u32(bytes.data() + 14)};
  if (h.a == 0 || h.rows == 0 || h.cols == 0) {
    throw IoError("zero dimension in header");
  }
  const unsigned long long count =
      static_cast<unsigned long long>(h.a) * h.rows * h.cols * value_size;
  if (bytes.size() - kHeaderSize != count) {
    throw IoError("payload size does not match header");
  }
  return h;
}

}  // namespace

std::vector<std::uint8_t> encode_stack(const ImageStack& stack) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + stack.data().size() * 8);
  out.insert(out.end(), kStackMagic, kStackMagic + 6);
  put_u32(out, checked_dim(stack.p(), "p"));
  put_u32(out, checked_dim(stack.rows(), "rows"));
  put_u32(out, checked_dim(stack.cols(), "cols"));
  for (const std::complex<float>& v : stack.data()) {
    put_f32(out, v.real());
    put_f32(out, v.imag());
  }
  return out;
}

ImageStack decode_stack(const std::vector<std::uint8_t>& bytes) {
  const Header h = read_header(bytes, kStackMagic, 8);
  const std::size_t count = static_cast<std::size_t>(h.a) * h.rows * h.cols;
  std::vector<std::complex<float>> data(count);
  const std::uint8_t* p = bytes.data() + kHeaderSize;
  for (std::size_t i = 0; i < count; ++i, p += 8) {
    data[i] = {get_f32(p), get_f32(p + 4)};
  }
  return ImageStack(h.a, h.rows, h.cols, std::move(data));
}

std::vector<std::uint8_t> encode_raster(const RealRaster& raster) {
  if (raster.values.size() != static_cast<std::size_t>(raster.channels * raster.rows * raster.cols)) {
    throw IoError("raster payload size does not match dimensions");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + raster.values.size() * 4);
  out.insert(out.end(), kRasterMagic, kRasterMagic + 6);
  put_u32(out, checked_dim(raster.channels, "channels"));
  put_u32(out, checked_dim(raster.rows, "rows"));
  put_u32(out, checked_dim(raster.cols, "cols"));
  for (float v : raster.values) put_f32(out, v);
  return out;
}

RealRaster decode_raster(const std::vector<std::uint8_t>& bytes) {
  const Header h = read_header(bytes, kRasterMagic, 4);
  RealRaster r{h.a, h.rows, h.cols, {}};
  const std::size_t count = static_cast<std::size_t>(h.a) * h.rows * h.cols;
  r.values.resize(count);
  const std::uint8_t* p = bytes.data() + kHeaderSize;
  for (std::size_t i = 0; i < count; ++i, p += 4) r.values[i] = get_f32(p);
  return r;
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

void write_stack(const std::filesystem::path& path, const ImageStack& stack) {
  write_bytes(path, encode_stack(stack));
}

ImageStack read_stack(const std::filesystem::path& path) { return decode_stack(read_bytes(path)); }

void write_raster(const std::filesystem::path& path, const RealRaster& raster) {
  write_bytes(path, encode_raster(raster));
}

RealRaster read_raster(const std::filesystem::path& path) { return decode_raster(read_bytes(path)); }

void write_pgm(const std::filesystem::path& path, Index rows, Index cols,
               const std::vector<std::uint8_t>& pixels) {
  if (pixels.size() != static_cast<std::size_t>(rows * cols)) {
    throw IoError("pgm: pixel count does not match dimensions");
  }
  const std::string header = "P5\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.insert(bytes.end(), pixels.begin(), pixels.end());
  write_bytes(path, bytes);
}

std::vector<std::uint8_t> render_phase(const std::vector<float>& phase) {
  std::vector<std::uint8_t> out(phase.size());
  for (std::size_t i = 0; i < phase.size(); ++i) {
    const double v = std::isfinite(phase[i]) ? phase[i] : 0.0;
    const double u = (v + std::numbers::pi) / (2.0 * std::numbers::pi);
    out[i] = static_cast<std::uint8_t>(std::lround(std::clamp(u, 0.0, 1.0) * 255.0));
  }
  return out;
}

}  // namespace cofipl::io
