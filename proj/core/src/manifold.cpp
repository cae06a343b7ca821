// Descriptors, the manifold base class, the factory, and the value-level API.
#include "manitv/manifold.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "manifolds_internal.hpp"

namespace manitv {

ManifoldDescriptor ManifoldDescriptor::euclidean(int m) {
  if (m < 1) throw ValidationError("euclidean manifold needs m >= 1");
  return ManifoldDescriptor(ManifoldKind::Euclidean, m);
}

ManifoldDescriptor ManifoldDescriptor::circle() {
  return ManifoldDescriptor(ManifoldKind::Circle, 0);
}

ManifoldDescriptor ManifoldDescriptor::sphere(int n) {
  if (n < 1) throw ValidationError("sphere manifold needs n >= 1");
  return ManifoldDescriptor(ManifoldKind::Sphere, n);
}

ManifoldDescriptor ManifoldDescriptor::spd(int r) {
  if (r < 2 || r > 8) throw ValidationError("spd manifold supports 2 <= r <= 8");
  return ManifoldDescriptor(ManifoldKind::Spd, r);
}

ManifoldDescriptor ManifoldDescriptor::product(std::vector<ManifoldDescriptor> factors) {
  if (factors.empty()) throw ValidationError("product manifold needs at least one factor");
  ManifoldDescriptor d(ManifoldKind::Product, 0);
  d.factors_ = std::move(factors);
  return d;
}

int ManifoldDescriptor::dimension() const {
  switch (kind_) {
    case ManifoldKind::Euclidean: return param_;
    case ManifoldKind::Circle: return 1;
    case ManifoldKind::Sphere: return param_;
    case ManifoldKind::Spd: return param_ * (param_ + 1) / 2;
    case ManifoldKind::Product: {
      int d = 0;
      for (const auto& f : factors_) d += f.dimension();
      return d;
    }
  }
  return 0;
}

int ManifoldDescriptor::ambient_size() const {
  switch (kind_) {
    case ManifoldKind::Euclidean: return param_;
    case ManifoldKind::Circle: return 1;
    case ManifoldKind::Sphere: return param_ + 1;
    case ManifoldKind::Spd: return param_ * param_;
    case ManifoldKind::Product: {
      int a = 0;
      for (const auto& f : factors_) a += f.ambient_size();
      return a;
    }
  }
  return 0;
}

std::string ManifoldDescriptor::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case ManifoldKind::Euclidean: os << "euclidean(" << param_ << ")"; break;
    case ManifoldKind::Circle: os << "circle"; break;
    case ManifoldKind::Sphere: os << "sphere(" << param_ << ")"; break;
    case ManifoldKind::Spd: os << "spd(" << param_ << ")"; break;
    case ManifoldKind::Product: {
      os << "product(";
      for (size_t i = 0; i < factors_.size(); ++i) {
        if (i) os << ", ";
        os << factors_[i].to_string();
      }
      os << ")";
      break;
    }
  }
  return os.str();
}

bool ManifoldDescriptor::operator==(const ManifoldDescriptor& other) const {
  if (kind_ != other.kind_ || param_ != other.param_) return false;
  if (factors_.size() != other.factors_.size()) return false;
  for (size_t i = 0; i < factors_.size(); ++i)
    if (!(factors_[i] == other.factors_[i])) return false;
  return true;
}

Manifold::Manifold(ManifoldDescriptor desc)
    : desc_(std::move(desc)), dim_(desc_.dimension()), ambient_(desc_.ambient_size()) {}

void Manifold::validate_tangent(std::span<const double> x,
                                std::span<const double> v) const {
  validate_point(x);
  if (v.size() != static_cast<size_t>(ambient_))
    throw ValidationError("tangent has wrong ambient size for " + desc_.to_string());
}

double Manifold::norm(std::span<const double> x, std::span<const double> v) const {
  return std::sqrt(inner(x, v, v));
}

void Manifold::geodesic(std::span<const double> x, std::span<const double> y,
                        double t, std::span<double> out) const {
  if (t == 0.0 || detail::bitwise_equal(x, y)) {
    if (out.data() != x.data()) std::memcpy(out.data(), x.data(), x.size() * sizeof(double));
    return;
  }
  if (t == 1.0) {
    std::memcpy(out.data(), y.data(), y.size() * sizeof(double));
    return;
  }
  detail::SmallBuf<64> buf;
  auto v = buf.get(ambient_);
  log(x, y, v);
  for (auto& c : v) c *= t;
  exp(x, v, out);
}

void Manifold::midpoint_diff_adjoint(std::span<const double> x,
                                     std::span<const double> z,
                                     std::span<const double> v,
                                     std::span<double> out) const {
  if (dist(x, z) <= kDegenerateT)
    throw GeometryDomainError("midpoint differential: degenerate geodesic on " +
                              desc_.to_string());
  midpoint_diff_adjoint_limit(x, z, v, out);
}

void Manifold::midpoint_diff_adjoint_limit(std::span<const double> x,
                                           std::span<const double> z,
                                           std::span<const double> v,
                                           std::span<double> out) const {
  adjoint_via_frame(x, z, v, out);
}

void Manifold::adjoint_via_frame(std::span<const double> x, std::span<const double> z,
                                 std::span<const double> v, std::span<double> out) const {
  if (dist(x, z) <= kDegenerateT) {
    for (size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * v[i];
    return;
  }
  detail::SmallBuf<64> cbuf, tbuf;
  auto c = cbuf.get(ambient_);
  auto vt = tbuf.get(ambient_);
  midpoint(x, z, c);
  transport(c, x, v, vt);  // pull v back to x along the geodesic

  MidpointFrame frame;
  midpoint_frame(x, z, frame);
  std::fill(out.begin(), out.end(), 0.0);
  for (int k = 0; k < frame.count; ++k) {
    std::span<const double> xi(frame.vectors.data() + static_cast<size_t>(k) * ambient_,
                               static_cast<size_t>(ambient_));
    const double coeff = frame.weights[static_cast<size_t>(k)] * inner(x, vt, xi);
    for (int i = 0; i < ambient_; ++i) out[static_cast<size_t>(i)] += coeff * xi[static_cast<size_t>(i)];
  }
}

std::shared_ptr<const Manifold> make_manifold(const ManifoldDescriptor& desc) {
  switch (desc.kind()) {
    case ManifoldKind::Euclidean:
      return std::make_shared<detail::EuclideanManifold>(desc.param());
    case ManifoldKind::Circle:
      return std::make_shared<detail::CircleManifold>();
    case ManifoldKind::Sphere:
      return std::make_shared<detail::SphereManifold>(desc.param());
    case ManifoldKind::Spd:
      return std::make_shared<detail::SpdManifold>(desc.param());
    case ManifoldKind::Product:
      return std::make_shared<detail::ProductManifold>(desc);
  }
  throw ValidationError("unknown manifold kind");
}

namespace {

void check_point(const Manifold& m, const Point& p, const char* what) {
  if (p.coords.size() != static_cast<size_t>(m.ambient()))
    throw ValidationError(std::string(what) + ": wrong ambient size for " +
                          m.descriptor().to_string());
  m.validate_point(p.coords);
}

void check_tangent(const Manifold& m, const Point& at, const Tangent& t, const char* what) {
  check_point(m, at, what);
  if (t.base.coords != at.coords)
    throw ValidationError(std::string(what) + ": tangent base does not match the point");
  m.validate_tangent(at.coords, t.vec);
}

}  // namespace

double dist(const Manifold& m, const Point& x, const Point& y) {
  check_point(m, x, "dist");
  check_point(m, y, "dist");
  return m.dist(x.coords, y.coords);
}

Point exp(const Manifold& m, const Point& x, const Tangent& xi) {
  check_tangent(m, x, xi, "exp");
  Point out;
  out.coords.resize(static_cast<size_t>(m.ambient()));
  m.exp(x.coords, xi.vec, out.coords);
  return out;
}

Tangent log(const Manifold& m, const Point& x, const Point& y) {
  check_point(m, x, "log");
  check_point(m, y, "log");
  Tangent t;
  t.base = x;
  t.vec.resize(static_cast<size_t>(m.ambient()));
  m.log(x.coords, y.coords, t.vec);
  return t;
}

Point geodesic_point(const Manifold& m, const Point& x, const Point& y, double t) {
  check_point(m, x, "geodesic_point");
  check_point(m, y, "geodesic_point");
  Point out;
  out.coords.resize(static_cast<size_t>(m.ambient()));
  m.geodesic(x.coords, y.coords, t, out.coords);
  return out;
}

Point midpoint(const Manifold& m, const Point& x, const Point& y) {
  return geodesic_point(m, x, y, 0.5);
}

Tangent parallel_transport(const Manifold& m, const Point& x, const Point& y,
                           const Tangent& xi) {
  check_tangent(m, x, xi, "parallel_transport");
  check_point(m, y, "parallel_transport");
  Tangent out;
  out.base = y;
  out.vec.resize(static_cast<size_t>(m.ambient()));
  m.transport(x.coords, y.coords, xi.vec, out.vec);
  return out;
}

double inner(const Manifold& m, const Point& x, const Tangent& xi, const Tangent& eta) {
  check_tangent(m, x, xi, "inner");
  check_tangent(m, x, eta, "inner");
  return m.inner(x.coords, xi.vec, eta.vec);
}

Point make_point(const Manifold& m, std::vector<double> coords) {
  Point p{std::move(coords)};
  check_point(m, p, "make_point");
  return p;
}

Tangent make_tangent(const Manifold& m, Point base, std::vector<double> vec) {
  Tangent t{std::move(base), std::move(vec)};
  check_tangent(m, t.base, t, "make_tangent");
  return t;
}

Tangent zero_tangent(const Manifold& m, Point base) {
  Tangent t;
  t.base = std::move(base);
  t.vec.assign(static_cast<size_t>(m.ambient()), 0.0);
  return t;
}

}  // namespace manitv
