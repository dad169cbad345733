#pragma once

#include <filesystem>

#include "mpgi/simulate.hpp"

namespace mpgi {

/// Read a PGM scene (P2 ASCII or P5 binary, maxval <= 255), normalize to
/// [0,1] and pad to the next power-of-two side, centered.
Scene load_scene_pgm(const std::filesystem::path& path);

/// 8-bit binary PGM; input values are clamped to [0,1].
void write_pgm_p5(const std::filesystem::path& path, const Image& img);

/// Full-precision CSV sidecar (one row of the image per line).
void write_image_csv(const std::filesystem::path& path, const Image& img);

/// Measurement CSV: commented metadata header, then `m,bucket_value` rows
/// at full double precision.
void write_record_csv(const std::filesystem::path& path, const BucketRecord& record);
BucketRecord read_record_csv(const std::filesystem::path& path);

}  // namespace mpgi
