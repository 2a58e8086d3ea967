#include "cofipl/stack_io.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>

using namespace cofipl;
using namespace cofipl::io;

namespace {

ImageStack random_stack(Index p, Index rows, Index cols, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<std::complex<float>> data(static_cast<std::size_t>(p * rows * cols));
  for (auto& z : data) z = {std::bit_cast<float>(static_cast<std::uint32_t>(rng() & 0x7F7FFFFFu)),
                            std::bit_cast<float>(static_cast<std::uint32_t>(rng()) & 0xFF7FFFFFu)};
  return ImageStack(p, rows, cols, std::move(data));
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string("cofipl_test_") + name);
}

}  // namespace

TEST(StackFormat, HeaderLayout) {
  ImageStack s(3, 2, 5);
  s.at(0, 1, 2) = {1.0f, -2.0f};
  const auto bytes = encode_stack(s);
  ASSERT_EQ(bytes.size(), 6u + 12u + 3u * 2u * 5u * 8u);
  EXPECT_EQ(std::memcmp(bytes.data(), "COFI1\0", 6), 0);
  const std::uint8_t dims[12] = {3, 0, 0, 0, 2, 0, 0, 0, 5, 0, 0, 0};
  EXPECT_EQ(std::memcmp(bytes.data() + 6, dims, 12), 0);
  // (row 0, col 1, t 2) sits at sample index (0*5 + 1)*3 + 2 = 5
  float re, im;
  std::memcpy(&re, bytes.data() + 18 + 5 * 8, 4);
  std::memcpy(&im, bytes.data() + 18 + 5 * 8 + 4, 4);
  EXPECT_EQ(re, 1.0f);
  EXPECT_EQ(im, -2.0f);
}

TEST(StackFormat, BitExactRoundTrip) {
  ImageStack s = random_stack(4, 3, 6, 1);
  s.at(0, 0, 0) = {-0.0f, std::numeric_limits<float>::denorm_min()};
  s.at(1, 1, 1) = {std::numeric_limits<float>::infinity(), std::numeric_limits<float>::quiet_NaN()};
  const auto bytes = encode_stack(s);
  const ImageStack back = decode_stack(bytes);
  EXPECT_EQ(encode_stack(back), bytes);
  EXPECT_EQ(back.p(), 4);
  EXPECT_EQ(back.rows(), 3);
  EXPECT_EQ(back.cols(), 6);

  const auto path = temp_file("stack.cofi");
  write_stack(path, s);
  EXPECT_EQ(read_bytes(path), bytes);
  EXPECT_EQ(encode_stack(read_stack(path)), bytes);
  std::filesystem::remove(path);
}

TEST(StackFormat, MalformedInputs) {
  auto bytes = encode_stack(random_stack(2, 2, 2, 2));
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(decode_stack(truncated), IoError);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_stack(bad_magic), IoError);
  auto longer = bytes;
  longer.push_back(0);
  EXPECT_THROW(decode_stack(longer), IoError);
  EXPECT_THROW(decode_stack(std::vector<std::uint8_t>(5, 0)), IoError);
  EXPECT_THROW(read_stack("/nonexistent/dir/file.cofi"), IoError);
}

TEST(RasterFormat, RoundTrip) {
  RealRaster r{2, 3, 4, {}};
  for (int i = 0; i < 24; ++i) r.values.push_back(static_cast<float>(i) * 0.25f - 1.0f);
  const auto bytes = encode_raster(r);
  EXPECT_EQ(std::memcmp(bytes.data(), "COFR1\0", 6), 0);
  EXPECT_EQ(decode_raster(bytes), r);
  EXPECT_THROW(decode_stack(bytes), IoError);
}

TEST(Render, PgmAndPhaseMapping) {
  const auto px = render_phase({-3.14159265f, 0.0f, 3.14159265f});
  EXPECT_LE(px[0], 1);
  EXPECT_NEAR(px[1], 128, 1);
  EXPECT_EQ(px[2], 255);
  const auto path = temp_file("img.pgm");
  write_pgm(path, 1, 3, px);
  const auto bytes = read_bytes(path);
  const std::string header(bytes.begin(), bytes.begin() + 11);
  EXPECT_EQ(header, "P5\n3 1\n255\n");
  EXPECT_EQ(bytes.size(), 11u + 3u);
  std::filesystem::remove(path);
  EXPECT_THROW(write_pgm(path, 2, 2, px), IoError);
}
