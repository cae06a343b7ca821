#include "manitv/image.hpp"

#include <cstring>
#include <string>

namespace manitv {

ManifoldImage::ManifoldImage(std::shared_ptr<const Manifold> manifold, int rows, int cols)
    : manifold_(std::move(manifold)), rows_(rows), cols_(cols),
      ambient_(manifold_->ambient()) {
  if (rows_ < 1 || cols_ < 1)
    throw ValidationError("image shape must be at least 1x1");
  data_.assign(static_cast<size_t>(rows_) * cols_ * ambient_, 0.0);
}

ManifoldImage ManifoldImage::filled(std::shared_ptr<const Manifold> manifold, int rows,
                                    int cols, const Point& value) {
  ManifoldImage img(std::move(manifold), rows, cols);
  if (value.coords.size() != static_cast<size_t>(img.ambient_))
    throw ValidationError("fill value has wrong ambient size");
  img.manifold_->validate_point(value.coords);
  for (long p = 0; p < img.pixel_count(); ++p)
    std::memcpy(img.pixel(p).data(), value.coords.data(),
                static_cast<size_t>(img.ambient_) * sizeof(double));
  return img;
}

Point ManifoldImage::point_at(int i, int j) const {
  auto px = pixel(i, j);
  return Point{std::vector<double>(px.begin(), px.end())};
}

void ManifoldImage::set(int i, int j, const Point& p) {
  if (p.coords.size() != static_cast<size_t>(ambient_))
    throw ValidationError("point has wrong ambient size for this image");
  std::memcpy(pixel(i, j).data(), p.coords.data(),
              static_cast<size_t>(ambient_) * sizeof(double));
}

void ManifoldImage::validate() const {
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      try {
        manifold_->validate_point(pixel(i, j));
      } catch (const ValidationError& e) {
        throw ValidationError("pixel (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + "): " + e.what());
      }
    }
  }
}

}  // namespace manitv
