// Binary image files (JSON header + little-endian payload) and CSV export.
#include "manitv/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "manitv/spd.hpp"

namespace manitv {

namespace {

using nlohmann::json;

json descriptor_json(const ManifoldDescriptor& d) {
  switch (d.kind()) {
    case ManifoldKind::Euclidean: return {{"kind", "euclidean"}, {"m", d.param()}};
    case ManifoldKind::Circle: return {{"kind", "circle"}};
    case ManifoldKind::Sphere: return {{"kind", "sphere"}, {"n", d.param()}};
    case ManifoldKind::Spd: return {{"kind", "spd"}, {"r", d.param()}};
    case ManifoldKind::Product: {
      json factors = json::array();
      for (const auto& f : d.factors()) factors.push_back(descriptor_json(f));
      return {{"kind", "product"}, {"factors", factors}};
    }
  }
  throw IoError("unknown manifold kind");
}

ManifoldDescriptor descriptor_parse(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ParseError("line 1: manifold descriptor needs a \"kind\" string");
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "euclidean") return ManifoldDescriptor::euclidean(j.at("m").get<int>());
    if (kind == "circle") return ManifoldDescriptor::circle();
    if (kind == "sphere") return ManifoldDescriptor::sphere(j.at("n").get<int>());
    if (kind == "spd") return ManifoldDescriptor::spd(j.at("r").get<int>());
    if (kind == "product") {
      std::vector<ManifoldDescriptor> factors;
      for (const auto& f : j.at("factors")) factors.push_back(descriptor_parse(f));
      return ManifoldDescriptor::product(std::move(factors));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("line 1: bad manifold descriptor: ") + e.what());
  }
  throw ParseError("line 1: unknown manifold kind \"" + kind + "\"");
}

void check_little_endian() {
  if constexpr (std::endian::native != std::endian::little)
    throw IoError("image files require a little-endian host");
}

}  // namespace

std::string descriptor_to_json(const ManifoldDescriptor& desc) {
  return descriptor_json(desc).dump();
}

ManifoldDescriptor descriptor_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("line 1: invalid JSON: ") + e.what());
  }
  return descriptor_parse(j);
}

void write_image(const std::filesystem::path& path, const ManifoldImage& image) {
  check_little_endian();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());

  json header = {{"version", 1},
                 {"manifold", descriptor_json(image.manifold().descriptor())},
                 {"shape", {image.rows(), image.cols()}}};
  const std::string line = header.dump() + "\n";
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.write(reinterpret_cast<const char*>(image.data().data()),
            static_cast<std::streamsize>(image.data().size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path.string());
}

ManifoldImage read_image(const std::filesystem::path& path) {
  check_little_endian();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());

  std::string line;
  if (!std::getline(in, line))
    throw ParseError("line 1: missing header in " + path.string());

  json header;
  try {
    header = json::parse(line);
  } catch (const std::exception& e) {
    throw ParseError(std::string("line 1: invalid JSON header: ") + e.what());
  }
  if (!header.contains("version") || !header["version"].is_number_integer() ||
      header["version"].get<int>() != 1)
    throw ParseError("line 1: unsupported or missing version (expected 1)");
  if (!header.contains("manifold"))
    throw ParseError("line 1: missing \"manifold\" field");
  if (!header.contains("shape") || !header["shape"].is_array() ||
      header["shape"].size() != 2)
    throw ParseError("line 1: \"shape\" must be [rows, cols]");

  int rows = 0, cols = 0;
  try {
    rows = header["shape"][0].get<int>();
    cols = header["shape"][1].get<int>();
  } catch (const std::exception&) {
    throw ParseError("line 1: shape entries must be integers");
  }
  if (rows < 1 || cols < 1) throw ParseError("line 1: shape entries must be positive");

  const ManifoldDescriptor desc = descriptor_parse(header["manifold"]);
  ManifoldImage image(make_manifold(desc), rows, cols);

  const size_t header_bytes = line.size() + 1;
  const size_t payload_bytes = image.data().size() * sizeof(double);
  in.read(reinterpret_cast<char*>(image.data().data()),
          static_cast<std::streamsize>(payload_bytes));
  const size_t got = static_cast<size_t>(in.gcount());
  if (got != payload_bytes)
    throw ParseError("payload truncated at byte offset " +
                     std::to_string(header_bytes + got) + " (expected " +
                     std::to_string(header_bytes + payload_bytes) + " bytes total)");
  if (in.peek() != std::char_traits<char>::eof())
    throw ParseError("trailing data at byte offset " +
                     std::to_string(header_bytes + payload_bytes));

  try {
    image.validate();
  } catch (const ValidationError& e) {
    throw ParseError(std::string("invalid point payload: ") + e.what());
  }
  return image;
}

void export_csv(const std::filesystem::path& path, const ManifoldImage& image) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());

  const Manifold& m = image.manifold();
  const bool spd = m.descriptor().kind() == ManifoldKind::Spd;
  const int a = m.ambient();

  out << "i,j";
  for (int c = 0; c < a; ++c) out << ",c" << c;
  if (spd) out << ",ga";
  out << "\n";

  char buf[32];
  const int r = spd ? m.descriptor().param() : 0;
  for (int i = 0; i < image.rows(); ++i) {
    for (int j = 0; j < image.cols(); ++j) {
      out << (i + 1) << "," << (j + 1);
      const auto px = image.pixel(i, j);
      for (int c = 0; c < a; ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", px[static_cast<size_t>(c)]);
        out << "," << buf;
      }
      if (spd) {
        // Geodesic anisotropy: spread of the log-eigenvalues.
        SmallMatrix mat(r, r);
        for (int ri = 0; ri < r; ++ri)
          for (int ci = 0; ci < r; ++ci) mat(ri, ci) = px[static_cast<size_t>(r * ri + ci)];
        const SymEigen e = sym_eig(mat);
        double mean = 0.0;
        for (int k = 0; k < r; ++k) mean += std::log(e.eigenvalues(k));
        mean /= r;
        double ga = 0.0;
        for (int k = 0; k < r; ++k) {
          const double d = std::log(e.eigenvalues(k)) - mean;
          ga += d * d;
        }
        std::snprintf(buf, sizeof buf, "%.17g", std::sqrt(ga));
        out << "," << buf;
      }
      out << "\n";
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace manitv
