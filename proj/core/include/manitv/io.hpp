// On-disk image format and CSV export.
//
// Image files carry one UTF-8 JSON header line
//   {"version":1,"manifold":<descriptor>,"shape":[rows,cols]}
// terminated by '\n', followed by rows*cols*ambient_size little-endian
// 8-byte doubles in row-major pixel order (ambient layout per point).
// Descriptors serialize as {"kind":"euclidean","m":2}, {"kind":"circle"},
// {"kind":"sphere","n":2}, {"kind":"spd","r":3} or
// {"kind":"product","factors":[...]}.
#pragma once

#include <filesystem>
#include <string>

#include "manitv/image.hpp"

namespace manitv {

/// Lossless at full binary double precision.
void write_image(const std::filesystem::path& path, const ManifoldImage& image);

/// Validates the header, payload length, and every pixel invariant; parse
/// errors name the offending line or byte offset.
ManifoldImage read_image(const std::filesystem::path& path);

/// One pixel per row: i, j, the ambient coordinates, and for SPD images a
/// trailing geodesic-anisotropy column.
void export_csv(const std::filesystem::path& path, const ManifoldImage& image);

std::string descriptor_to_json(const ManifoldDescriptor& desc);
ManifoldDescriptor descriptor_from_json(const std::string& text);

}  // namespace manitv
