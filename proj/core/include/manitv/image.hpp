// Grid of manifold-valued pixels with flat row-major storage.
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "manitv/manifold.hpp"

namespace manitv {

/// An N x M grid of points (M = 1 for signals). Pixels are stored
/// contiguously in row-major order, each occupying ambient_size doubles.
class ManifoldImage {
 public:
  ManifoldImage(std::shared_ptr<const Manifold> manifold, int rows, int cols);

  /// Grid filled with copies of one point.
  static ManifoldImage filled(std::shared_ptr<const Manifold> manifold, int rows,
                              int cols, const Point& value);

  const Manifold& manifold() const { return *manifold_; }
  std::shared_ptr<const Manifold> manifold_ptr() const { return manifold_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long pixel_count() const { return static_cast<long>(rows_) * cols_; }

  std::span<double> pixel(int i, int j) {
    return {data_.data() + offset(i, j), static_cast<size_t>(ambient_)};
  }
  std::span<const double> pixel(int i, int j) const {
    return {data_.data() + offset(i, j), static_cast<size_t>(ambient_)};
  }
  std::span<double> pixel(long flat) {
    return {data_.data() + flat * ambient_, static_cast<size_t>(ambient_)};
  }
  std::span<const double> pixel(long flat) const {
    return {data_.data() + flat * ambient_, static_cast<size_t>(ambient_)};
  }

  Point point_at(int i, int j) const;
  void set(int i, int j, const Point& p);

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const ManifoldImage& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ &&
           manifold_->descriptor() == other.manifold_->descriptor();
  }

  /// Validates every pixel against the manifold's point invariants.
  void validate() const;

 private:
  long offset(int i, int j) const {
    return (static_cast<long>(i) * cols_ + j) * ambient_;
  }
  std::shared_ptr<const Manifold> manifold_;
  int rows_, cols_, ambient_;
  std::vector<double> data_;
};

}  // namespace manitv
