#include "cofipl/image.hpp"

namespace cofipl {

ImageStack::ImageStack(Index p, Index rows, Index cols)
    : ImageStack(p, rows, cols,
                 std::vector<std::complex<float>>(static_cast<std::size_t>(p * rows * cols))) {}

ImageStack::ImageStack(Index p, Index rows, Index cols, std::vector<std::complex<float>> data)
    : p_(p), rows_(rows), cols_(cols), data_(std::move(data)) {
  if (p < 1 || rows < 1 || cols < 1) {
    throw InvalidArgument("ImageStack: dimensions must be positive");
  }
  if (data_.size() != static_cast<std::size_t>(p * rows * cols)) {
    throw InvalidArgument("ImageStack: payload size does not match dimensions");
  }
}

CVector ImageStack::pixel(Index row, Index col) const {
  CVector x(p_);
  const std::size_t base = offset(row, col);
  for (Index t = 0; t < p_; ++t) {
    const std::complex<float> v = data_[base + t];
    x[t] = Complex(v.real(), v.imag());
  }
  return x;
}

void ImageStack::set_pixel(Index row, Index col, const CVector& x) {
  if (x.size() != p_) throw InvalidArgument("ImageStack: pixel has the wrong length");
  const std::size_t base = offset(row, col);
  for (Index t = 0; t < p_; ++t) {
    data_[base + t] = {static_cast<float>(x[t].real()), static_cast<float>(x[t].imag())};
  }
}

RVector PhaseImage::pixel(Index row, Index col) const {
  RVector theta(p);
  for (Index t = 0; t < p; ++t) theta[t] = at(row, col, t);
  return theta;
}

void PhaseImage::set_pixel(Index row, Index col, const RVector& theta) {
  if (theta.size() != p) throw InvalidArgument("PhaseImage: pixel has the wrong length");
  for (Index t = 0; t < p; ++t) at(row, col, t) = theta[t];
}

}  // namespace cofipl
