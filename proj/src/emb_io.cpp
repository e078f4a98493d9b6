#include "negmine/emb_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace negmine {

namespace {

constexpr std::array<char, 4> kMagic{'E', 'M', 'B', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_labels(const std::filesystem::path& path, const std::vector<std::string>& labels) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  for (const auto& l : labels) {
    if (l.find('\n') != std::string::npos)
      throw Error(ErrorCode::Format, "label contains a newline: " + l);
    out << l << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::vector<std::string> read_labels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) labels.push_back(line);
  return labels;
}

}  // namespace

std::filesystem::path labels_path_for(const std::filesystem::path& emb_path) {
  auto p = emb_path;
  p.replace_extension(".labels");
  return p;
}

void write_emb(const std::filesystem::path& path, const EmbeddingMatrixf& m) {
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (m.rows() > kMax || m.dim() > kMax) throw Error(ErrorCode::Format, "matrix too large for EMB1");
  if (m.has_labels() && static_cast<Index>(m.labels().size()) != m.rows())
    throw Error(ErrorCode::LabelCountMismatch, "refusing to write mismatched labels");

  std::string buf;
  buf.reserve(16 + static_cast<std::size_t>(m.rows() * m.dim()) * 4);
  buf.append(kMagic.data(), kMagic.size());
  put_u32(buf, kVersion);
  put_u32(buf, static_cast<std::uint32_t>(m.rows()));
  put_u32(buf, static_cast<std::uint32_t>(m.dim()));
  const float* data = m.data().data();
  for (Index k = 0; k < m.rows() * m.dim(); ++k) put_u32(buf, std::bit_cast<std::uint32_t>(data[k]));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());

  if (m.has_labels()) write_labels(labels_path_for(path), m.labels());
}

void write_emb(const std::filesystem::path& path, const EmbeddingMatrixd& m) {
  write_emb(path, m.cast<float>());
}

EmbeddingMatrixf read_emb_f32(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 16) throw Error(ErrorCode::Format, path.string() + ": truncated header");
  if (std::memcmp(buf.data(), kMagic.data(), 4) != 0)
    throw Error(ErrorCode::Format, path.string() + ": bad magic");
  const auto* bytes = reinterpret_cast<const unsigned char*>(buf.data());
  const std::uint32_t version = get_u32(bytes + 4);
  if (version != kVersion)
    throw Error(ErrorCode::Format, path.string() + ": unsupported version " + std::to_string(version));
  const std::uint64_t rows = get_u32(bytes + 8);
  const std::uint64_t dim = get_u32(bytes + 12);
  if (buf.size() != 16 + rows * dim * 4)
    throw Error(ErrorCode::Format, path.string() + ": payload size does not match " +
                                       std::to_string(rows) + "x" + std::to_string(dim));

  RowMatrix<float> data(static_cast<Index>(rows), static_cast<Index>(dim));
  float* out = data.data();
  for (std::uint64_t k = 0; k < rows * dim; ++k)
    out[k] = std::bit_cast<float>(get_u32(bytes + 16 + 4 * k));

  std::vector<std::string> labels;
  const auto lp = labels_path_for(path);
  if (std::filesystem::exists(lp)) labels = read_labels(lp);
  return EmbeddingMatrixf(std::move(data), std::move(labels));
}

EmbeddingMatrixd read_emb(const std::filesystem::path& path) {
  return read_emb_f32(path).cast<double>();
}

}  // namespace negmine
