#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "manitv/datagen.hpp"
#include "manitv/io.hpp"
#include "support.hpp"

using namespace manitv;

namespace {
constexpr double kPi = std::numbers::pi;

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}
}  // namespace

TEST_CASE("lemniscate signal") {
  const ManifoldImage sig = gen_lemniscate(512);
  CHECK(sig.rows() == 512);
  CHECK(sig.cols() == 1);
  sig.validate();

  // t = 0 maps to exp_p((pi/2) e1): an equator point.
  auto p0 = sig.pixel(0, 0);
  CHECK(p0[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p0[2] == doctest::Approx(0.0).epsilon(1e-12));

  // Extremal samples t = 0 and t = pi are antipodal. With 512 samples
  // t_i = 2 pi i / 511, so evaluate the generator where t is closest to pi
  // via a denser signal containing t = pi exactly.
  const ManifoldImage dense = gen_lemniscate(513);  // t_256 = pi exactly
  auto a = dense.pixel(0, 0);
  auto b = dense.pixel(256, 0);
  CHECK(a[0] == doctest::Approx(-b[0]).epsilon(1e-9));
  CHECK(a[1] == doctest::Approx(-b[1]).epsilon(1e-9));
  CHECK(a[2] == doctest::Approx(-b[2]).epsilon(1e-9));

  // First and last points coincide.
  auto first = sig.pixel(0, 0);
  auto last = sig.pixel(511, 0);
  for (int c = 0; c < 3; ++c)
    CHECK(first[static_cast<size_t>(c)] ==
          doctest::Approx(last[static_cast<size_t>(c)]).epsilon(1e-9));
}

TEST_CASE("s2 vector field") {
  const ManifoldImage field = gen_s2_field(64);
  CHECK(field.rows() == 64);
  CHECK(field.cols() == 64);
  field.validate();  // unit vectors everywhere

  auto origin = field.pixel(0, 0);
  CHECK(origin[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(origin[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(origin[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("artificial spd image") {
  const ManifoldImage img = gen_spd_image(25);
  CHECK(img.rows() == 25);
  CHECK(img.cols() == 25);
  img.validate();  // SPD invariants everywhere

  // Jumps across the center line: adjacent-pixel distances straddling
  // s = 1/2 dominate the within-region median.
  const Manifold& m = img.manifold();
  std::vector<double> straddle, within;
  for (int j = 0; j < 25; ++j)
    straddle.push_back(m.dist(img.pixel(12, j), img.pixel(13, j)));
  for (int i = 0; i < 24; ++i) {
    if (i == 12) continue;  // the straddling row pair
    for (int j = 0; j < 25; ++j) {
      const double si = static_cast<double>(i) / 24.0;
      const double sj = static_cast<double>(j) / 24.0;
      const double si1 = static_cast<double>(i + 1) / 24.0;
      // Keep pairs on one side of every jump line.
      if ((si - 0.5) * (si1 - 0.5) <= 0) continue;
      if ((si + sj - 1.0) * (si1 + sj - 1.0) <= 0) continue;
      within.push_back(m.dist(img.pixel(i, j), img.pixel(i + 1, j)));
    }
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(median(straddle) > median(within));
}

TEST_CASE("gaussian tangent noise") {
  const ManifoldImage sig = gen_lemniscate(100);

  // Tiny sigma recovers the input.
  const ManifoldImage tiny = add_noise(sig, {NoiseModel::GaussianTangent, 1e-12, 1});
  for (long q = 0; q < sig.pixel_count(); ++q)
    for (int c = 0; c < 3; ++c)
      CHECK(tiny.pixel(q)[static_cast<size_t>(c)] ==
            doctest::Approx(sig.pixel(q)[static_cast<size_t>(c)]).epsilon(1e-9));

  // Same seed, same noise; different seed, different noise.
  const NoiseSpec spec{NoiseModel::GaussianTangent, kPi / 30.0, 42};
  const ManifoldImage n1 = add_noise(sig, spec);
  const ManifoldImage n2 = add_noise(sig, spec);
  CHECK(n1.data() == n2.data());
  const ManifoldImage n3 = add_noise(sig, {NoiseModel::GaussianTangent, kPi / 30.0, 43});
  CHECK(n1.data() != n3.data());

  // Monte-Carlo estimate of the mean displacement: E||eta|| for a 2D
  // Gaussian step with std sigma per component is sigma sqrt(pi/2).
  const ManifoldImage big = gen_s2_field(100);  // 10^4 pixels
  const double sigma = kPi / 30.0;
  const ManifoldImage noisy = add_noise(big, {NoiseModel::GaussianTangent, sigma, 7});
  const double e = mean_error(noisy, big);
  CHECK(e > 0.8 * sigma * std::sqrt(2.0));
  CHECK(e < 1.5 * sigma * std::sqrt(2.0));

  CHECK_THROWS_AS(add_noise(sig, {NoiseModel::GaussianTangent, 0.0, 1}), ValidationError);
}

TEST_CASE("rician noise is SPD-only and deterministic") {
  const ManifoldImage img = gen_spd_image(8);
  const NoiseSpec spec{NoiseModel::RicianEntrywise, 0.03, 11};
  const ManifoldImage noisy = add_noise(img, spec);
  noisy.validate();
  CHECK(add_noise(img, spec).data() == noisy.data());
  CHECK(mean_error(noisy, img) > 0.0);

  const ManifoldImage sig = gen_lemniscate(8);
  CHECK_THROWS_AS(add_noise(sig, spec), ValidationError);
}

TEST_CASE("mean_error") {
  auto e1 = make_manifold(ManifoldDescriptor::euclidean(1));
  ManifoldImage a(e1, 2, 1), b(e1, 2, 1);
  a.pixel(0, 0)[0] = 0;
  a.pixel(1, 0)[0] = 0;
  b.pixel(0, 0)[0] = 1;
  b.pixel(1, 0)[0] = 3;
  CHECK(mean_error(a, b) == doctest::Approx(2.0));
  CHECK(mean_error(a, a) == 0.0);

  ManifoldImage c(e1, 3, 1);
  CHECK_THROWS_AS(mean_error(a, c), ValidationError);

  // Metric properties on random triples.
  std::mt19937_64 rng(3);
  auto s2 = make_manifold(ManifoldDescriptor::sphere(2));
  ManifoldImage x(s2, 4, 2), y(s2, 4, 2), z(s2, 4, 2);
  for (long q = 0; q < x.pixel_count(); ++q) {
    auto put = [&](ManifoldImage& img) {
      const Point p = testsupport::random_point(*s2, rng);
      std::copy(p.coords.begin(), p.coords.end(), img.pixel(q).begin());
    };
    put(x);
    put(y);
    put(z);
  }
  CHECK(mean_error(x, y) == doctest::Approx(mean_error(y, x)).epsilon(1e-12));
  CHECK(mean_error(x, z) <= mean_error(x, y) + mean_error(y, z) + 1e-12);
}

TEST_CASE("image files round trip losslessly") {
  const auto path = temp_file("manitv_roundtrip.mimg");
  for (const auto& img :
       {gen_lemniscate(32), gen_s2_field(8), gen_spd_image(5)}) {
    write_image(path, img);
    const ManifoldImage back = read_image(path);
    CHECK(back.rows() == img.rows());
    CHECK(back.cols() == img.cols());
    CHECK(back.manifold().descriptor() == img.manifold().descriptor());
    CHECK(back.data() == img.data());  // bit-exact payload
  }

  // Product-manifold pixels use the concatenated layout.
  auto prod = make_manifold(ManifoldDescriptor::product(
      {ManifoldDescriptor::circle(), ManifoldDescriptor::euclidean(2)}));
  ManifoldImage pimg =
      ManifoldImage::filled(prod, 3, 2, Point{{0.25, -1.5, 4.0}});
  pimg.pixel(2, 1)[0] = -3.0;
  write_image(path, pimg);
  const ManifoldImage pback = read_image(path);
  CHECK(pback.manifold().descriptor() == pimg.manifold().descriptor());
  CHECK(pback.data() == pimg.data());
  std::filesystem::remove(path);
}

TEST_CASE("image files reject invariant violations and malformed input") {
  const auto path = temp_file("manitv_bad.mimg");

  // A sphere point with norm 2.
  {
    auto s2 = make_manifold(ManifoldDescriptor::sphere(2));
    ManifoldImage img = ManifoldImage::filled(s2, 2, 1, Point{{0, 0, 1}});
    img.pixel(1, 0)[2] = 2.0;
    write_image(path, img);
    CHECK_THROWS_AS(read_image(path), ParseError);
  }
  // An SPD pixel with a negative eigenvalue.
  {
    auto p2 = make_manifold(ManifoldDescriptor::spd(2));
    ManifoldImage img = ManifoldImage::filled(p2, 1, 2, Point{{1, 0, 0, 1}});
    auto px = img.pixel(0, 1);
    px[0] = 1;
    px[1] = 2;
    px[2] = 2;
    px[3] = 1;
    write_image(path, img);
    CHECK_THROWS_AS(read_image(path), ParseError);
  }
  // Malformed header.
  {
    std::ofstream out(path, std::ios::binary);
    out << "{not json\n";
  }
  CHECK_THROWS_AS(read_image(path), ParseError);
  {
    std::ofstream out(path, std::ios::binary);
    out << R"({"version":1,"manifold":{"kind":"warp"},"shape":[2,1]})" << "\n";
  }
  CHECK_THROWS_AS(read_image(path), ParseError);
  // Truncated payload.
  {
    ManifoldImage img = gen_lemniscate(16);
    write_image(path, img);
    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 9);
    CHECK_THROWS_AS(read_image(path), ParseError);
  }
  // Dimension mismatch between shape and payload (trailing bytes).
  {
    ManifoldImage img = gen_lemniscate(16);
    write_image(path, img);
    std::ofstream out(path, std::ios::binary | std::ios::app);
    const double extra = 0.0;
    out.write(reinterpret_cast<const char*>(&extra), sizeof extra);
    out.close();
    CHECK_THROWS_AS(read_image(path), ParseError);
  }
  CHECK_THROWS_AS(read_image(temp_file("missing_file.mimg")), IoError);
  std::filesystem::remove(path);
}

TEST_CASE("csv export carries coordinates and the anisotropy column") {
  const auto path = temp_file("manitv_export.csv");
  const ManifoldImage img = gen_spd_image(4);
  export_csv(path, img);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "i,j,c0,c1,c2,c3,c4,c5,c6,c7,c8,ga");
  int lines = 0;
  std::string row;
  while (std::getline(in, row)) ++lines;
  CHECK(lines == 16);
  std::filesystem::remove(path);

  // Identity pixels have zero anisotropy.
  auto p2 = make_manifold(ManifoldDescriptor::spd(2));
  ManifoldImage eye = ManifoldImage::filled(p2, 1, 1, Point{{1, 0, 0, 1}});
  export_csv(path, eye);
  std::ifstream in2(path);
  std::getline(in2, row);  // header
  std::getline(in2, row);
  CHECK(row.substr(row.rfind(',') + 1) == "0");
  std::filesystem::remove(path);
}

TEST_CASE("descriptor json round trip") {
  const auto desc = ManifoldDescriptor::product(
      {ManifoldDescriptor::circle(), ManifoldDescriptor::sphere(2),
       ManifoldDescriptor::spd(3), ManifoldDescriptor::euclidean(4)});
  const std::string text = descriptor_to_json(desc);
  CHECK(descriptor_from_json(text) == desc);
  CHECK_THROWS_AS(descriptor_from_json("{\"kind\":\"nope\"}"), ParseError);
}
