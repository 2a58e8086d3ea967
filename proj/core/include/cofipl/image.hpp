#pragma once

#include "cofipl/types.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace cofipl {

/// p co-registered complex images, stored as single-precision samples in
/// (row, col, time) order with time fastest.
class ImageStack {
 public:
  ImageStack(Index p, Index rows, Index cols);
  ImageStack(Index p, Index rows, Index cols, std::vector<std::complex<float>> data);

  Index p() const noexcept { return p_; }
  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }

  std::complex<float>& at(Index row, Index col, Index t) { return data_[offset(row, col) + t]; }
  std::complex<float> at(Index row, Index col, Index t) const {
    return data_[offset(row, col) + t];
  }
  /// Time series of one pixel, promoted to double precision.
  CVector pixel(Index row, Index col) const;
  void set_pixel(Index row, Index col, const CVector& x);

  const std::vector<std::complex<float>>& data() const noexcept { return data_; }

  friend bool operator==(const ImageStack&, const ImageStack&) = default;

 private:
  std::size_t offset(Index row, Index col) const {
    return static_cast<std::size_t>((row * cols_ + col) * p_);
  }

  Index p_;
  Index rows_;
  Index cols_;
  std::vector<std::complex<float>> data_;
};

/// Per-pixel phase vectors (radians), time fastest.
struct PhaseImage {
  Index p = 0;
  Index rows = 0;
  Index cols = 0;
  std::vector<double> phases;

  PhaseImage() = default;
  PhaseImage(Index p_, Index rows_, Index cols_)
      : p(p_), rows(rows_), cols(cols_),
        phases(static_cast<std::size_t>(p_ * rows_ * cols_), 0.0) {}

  double& at(Index row, Index col, Index t) {
    return phases[static_cast<std::size_t>((row * cols + col) * p + t)];
  }
  double at(Index row, Index col, Index t) const {
    return phases[static_cast<std::size_t>((row * cols + col) * p + t)];
  }
  RVector pixel(Index row, Index col) const;
  void set_pixel(Index row, Index col, const RVector& theta);
};

/// Real single-channel or multi-channel raster (float), channel fastest.
struct RealRaster {
  Index channels = 1;
  Index rows = 0;
  Index cols = 0;
  std::vector<float> values;

  friend bool operator==(const RealRaster&, const RealRaster&) = default;
};

}  // namespace cofipl
