#pragma once

#include <filesystem>

#include "negmine/core_types.hpp"

namespace negmine {

// EMB1 layout, all little-endian:
//   0..3   magic "EMB1"
//   4..7   u32 version (1)
//   8..11  u32 row count
//   12..15 u32 dim
//   16..   rows*dim f32, row-major
// Labels live in a sidecar next to the file with the extension replaced by
// ".labels", one UTF-8 label per '\n'-terminated line.

std::filesystem::path labels_path_for(const std::filesystem::path& emb_path);

/// Values are rounded to f32 on write. Labels are written when present.
void write_emb(const std::filesystem::path& path, const EmbeddingMatrixd& m);
void write_emb(const std::filesystem::path& path, const EmbeddingMatrixf& m);

/// Reads the matrix and its sidecar if one exists. Throws Io or Format on a
/// malformed file; does not run validate().
EmbeddingMatrixf read_emb_f32(const std::filesystem::path& path);
EmbeddingMatrixd read_emb(const std::filesystem::path& path);

}  // namespace negmine
