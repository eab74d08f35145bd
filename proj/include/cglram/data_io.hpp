// Copyright 2026 The CGLRAM Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dataset ingestion and the seeded clustered-low-rank generator.
//
// IDX3 images: big-endian magic 0x00000803, counts N, rows, cols, then
//   N*rows*cols unsigned bytes (row-major per image).
// IDX1 labels: big-endian magic 0x00000801, count N, then N bytes.
// MSTK1 stack: "MSTK1\n", little-endian u64 N, r, c, a u8 label flag,
//   N*r*c little-endian f64 (row-major per sample), then N i32 labels
//   when the flag is 1.
// CSV stack: a header line "rows,cols" or "rows,cols,labeled", then one
//   block per sample. A labeled block starts with "label,<int>"; the block
//   body is `rows` lines of `cols` comma-separated reals. Blank lines and
//   lines starting with '#' are ignored.

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cglram/glram.hpp"
#include "cglram/stack.hpp"

namespace cglram {

namespace io {

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::IoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::IoFailure, "cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorCode::IoFailure, "short write to " + path.string());
}

inline std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

inline void append_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

template <typename T>
void append_le(std::vector<std::uint8_t>& out, T value) {
  std::array<std::uint8_t, sizeof(T)> raw;
  std::memcpy(raw.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
  out.insert(out.end(), raw.begin(), raw.end());
}

template <typename T>
T read_le(const std::uint8_t* p) {
  std::array<std::uint8_t, sizeof(T)> raw;
  std::memcpy(raw.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
  T value;
  std::memcpy(&value, raw.data(), sizeof(T));
  return value;
}

// a*b*c, or nullopt when it does not fit in 64 bits.
inline std::optional<std::uint64_t> checked_volume(std::uint64_t a, std::uint64_t b,
                                                   std::uint64_t c) {
  std::uint64_t ab = 0;
  std::uint64_t abc = 0;
  if (__builtin_mul_overflow(a, b, &ab) || __builtin_mul_overflow(ab, c, &abc)) return std::nullopt;
  return abc;
}

}  // namespace io

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;
inline constexpr std::string_view kStackMagic = "MSTK1\n";

/// Parses IDX1 label bytes.
inline std::vector<Label> parse_idx_labels(const std::vector<std::uint8_t>& bytes) {
  require(bytes.size() >= 8, ErrorCode::TruncatedFile, "IDX1 header needs 8 bytes");
  require(io::read_be32(bytes.data()) == kIdxLabelMagic, ErrorCode::BadMagic,
          "not an IDX1 label file");
  const std::uint32_t n = io::read_be32(bytes.data() + 4);
  require(bytes.size() - 8 >= n, ErrorCode::TruncatedFile,
          "IDX1 header claims " + std::to_string(n) + " labels");
  return std::vector<Label>(bytes.begin() + 8, bytes.begin() + 8 + n);
}

/// Parses IDX3 image bytes. Pixels are divided by 255 unless `raw_scale`.
inline MatrixStack parse_idx_images(const std::vector<std::uint8_t>& bytes,
                                    std::optional<std::vector<Label>> labels = std::nullopt,
                                    bool raw_scale = false) {
  require(bytes.size() >= 4, ErrorCode::TruncatedFile, "IDX3 header needs 16 bytes");
  require(io::read_be32(bytes.data()) == kIdxImageMagic, ErrorCode::BadMagic,
          "not an IDX3 image file");
  require(bytes.size() >= 16, ErrorCode::TruncatedFile, "IDX3 header needs 16 bytes");
  const std::uint32_t n = io::read_be32(bytes.data() + 4);
  const std::uint32_t rows = io::read_be32(bytes.data() + 8);
  const std::uint32_t cols = io::read_be32(bytes.data() + 12);
  require(n > 0, ErrorCode::EmptyStack, "IDX3 file holds no images");
  require(rows > 0 && cols > 0, ErrorCode::DimensionOverflow, "IDX3 image has a zero dimension");
  const auto volume = io::checked_volume(n, rows, cols);
  require(volume.has_value() && *volume <= static_cast<std::uint64_t>(
                                               std::numeric_limits<std::ptrdiff_t>::max()),
          ErrorCode::DimensionOverflow, "IDX3 payload size overflows");
  require(bytes.size() - 16 >= *volume, ErrorCode::TruncatedFile,
          "IDX3 header claims " + std::to_string(n) + " images of " + std::to_string(rows) + "x" +
              std::to_string(cols));
  if (labels) {
    require(labels->size() == n, ErrorCode::ShapeMismatch, "label count differs from image count");
  }

  const double scale = raw_scale ? 1.0 : 1.0 / 255.0;
  std::vector<Matrix> samples;
  samples.reserve(n);
  const std::uint8_t* p = bytes.data() + 16;
  for (std::uint32_t s = 0; s < n; ++s) {
    Matrix A(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
      for (std::uint32_t j = 0; j < cols; ++j) A(i, j) = static_cast<double>(*p++) * scale;
    samples.push_back(std::move(A));
  }
  return MatrixStack(std::move(samples), std::move(labels));
}

inline MatrixStack load_idx_images(const std::filesystem::path& images,
                                   const std::optional<std::filesystem::path>& labels = std::nullopt,
                                   bool raw_scale = false) {
  std::optional<std::vector<Label>> parsed;
  if (labels) parsed = parse_idx_labels(io::read_bytes(*labels));
  return parse_idx_images(io::read_bytes(images), std::move(parsed), raw_scale);
}

/// Encodes images whose entries are byte values in [0, 255] as IDX3.
inline std::vector<std::uint8_t> encode_idx_images(const std::vector<Matrix>& images) {
  std::vector<std::uint8_t> out;
  io::append_be32(out, kIdxImageMagic);
  io::append_be32(out, static_cast<std::uint32_t>(images.size()));
  io::append_be32(out, static_cast<std::uint32_t>(images.empty() ? 0 : images[0].rows()));
  io::append_be32(out, static_cast<std::uint32_t>(images.empty() ? 0 : images[0].cols()));
  for (const auto& A : images)
    for (Index i = 0; i < A.rows(); ++i)
      for (Index j = 0; j < A.cols(); ++j) out.push_back(static_cast<std::uint8_t>(A(i, j)));
  return out;
}

inline std::vector<std::uint8_t> encode_idx_labels(const std::vector<Label>& labels) {
  std::vector<std::uint8_t> out;
  io::append_be32(out, kIdxLabelMagic);
  io::append_be32(out, static_cast<std::uint32_t>(labels.size()));
  for (Label l : labels) out.push_back(static_cast<std::uint8_t>(l));
  return out;
}

inline std::vector<std::uint8_t> encode_stack(const MatrixStack& stack) {
  std::vector<std::uint8_t> out(kStackMagic.begin(), kStackMagic.end());
  io::append_le<std::uint64_t>(out, stack.size());
  io::append_le<std::uint64_t>(out, static_cast<std::uint64_t>(stack.rows()));
  io::append_le<std::uint64_t>(out, static_cast<std::uint64_t>(stack.cols()));
  out.push_back(stack.labels() ? 1 : 0);
  for (const auto& A : stack.samples())
    for (Index i = 0; i < A.rows(); ++i)
      for (Index j = 0; j < A.cols(); ++j) io::append_le<double>(out, A(i, j));
  if (stack.labels()) {
    for (Label l : *stack.labels()) io::append_le<std::int32_t>(out, l);
  }
  return out;
}

inline MatrixStack decode_stack(const std::vector<std::uint8_t>& bytes) {
  const std::size_t header = kStackMagic.size() + 3 * 8 + 1;
  require(bytes.size() >= kStackMagic.size() &&
              std::memcmp(bytes.data(), kStackMagic.data(), kStackMagic.size()) == 0,
          ErrorCode::BadMagic, "not an MSTK1 stack file");
  require(bytes.size() >= header, ErrorCode::TruncatedFile, "MSTK1 header is incomplete");
  const std::uint8_t* p = bytes.data() + kStackMagic.size();
  const auto n = io::read_le<std::uint64_t>(p);
  const auto rows = io::read_le<std::uint64_t>(p + 8);
  const auto cols = io::read_le<std::uint64_t>(p + 16);
  const std::uint8_t flag = p[24];
  require(flag <= 1, ErrorCode::BadMagic, "MSTK1 label flag must be 0 or 1");
  require(n > 0, ErrorCode::EmptyStack, "MSTK1 file holds no samples");
  require(rows > 0 && cols > 0, ErrorCode::DimensionOverflow, "MSTK1 sample has a zero dimension");
  const auto volume = io::checked_volume(n, rows, cols);
  std::uint64_t payload = 0;
  require(volume && !__builtin_mul_overflow(*volume, std::uint64_t{8}, &payload) &&
              payload <= std::numeric_limits<std::uint64_t>::max() - 4 * n,
          ErrorCode::DimensionOverflow, "MSTK1 payload size overflows");
  const std::uint64_t needed = payload + (flag ? 4 * n : 0);
  require(bytes.size() - header >= needed, ErrorCode::TruncatedFile,
          "MSTK1 header claims " + std::to_string(n) + " samples of " + std::to_string(rows) + "x" +
              std::to_string(cols));

  p = bytes.data() + header;
  std::vector<Matrix> samples;
  samples.reserve(n);
  for (std::uint64_t s = 0; s < n; ++s) {
    Matrix A(static_cast<Index>(rows), static_cast<Index>(cols));
    for (Index i = 0; i < A.rows(); ++i)
      for (Index j = 0; j < A.cols(); ++j, p += 8) A(i, j) = io::read_le<double>(p);
    samples.push_back(std::move(A));
  }
  std::optional<std::vector<Label>> labels;
  if (flag) {
    labels.emplace();
    for (std::uint64_t s = 0; s < n; ++s, p += 4) labels->push_back(io::read_le<std::int32_t>(p));
  }
  return MatrixStack(std::move(samples), std::move(labels));
}

inline void save_stack(const MatrixStack& stack, const std::filesystem::path& path) {
  io::write_bytes(path, encode_stack(stack));
}

inline MatrixStack load_stack(const std::filesystem::path& path) {
  return decode_stack(io::read_bytes(path));
}

/// Parses the CSV stack layout described at the top of this header.
inline MatrixStack parse_csv_stack(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  require(!lines.empty(), ErrorCode::EmptyStack, "CSV stack has no header");

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    return cells;
  };
  auto to_double = [](const std::string& cell) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidSpec, "CSV cell '" + cell + "' is not a number");
    }
    const bool rest_blank = std::all_of(cell.begin() + static_cast<std::ptrdiff_t>(used), cell.end(),
                                        [](unsigned char ch) { return std::isspace(ch) != 0; });
    require(rest_blank, ErrorCode::InvalidSpec, "CSV cell '" + cell + "' is not a number");
    return v;
  };

  const auto header = split(lines[0]);
  require(header.size() == 2 || (header.size() == 3 && header[2] == "labeled"),
          ErrorCode::InvalidSpec, "CSV header must be 'rows,cols' or 'rows,cols,labeled'");
  const auto rows = static_cast<Index>(to_double(header[0]));
  const auto cols = static_cast<Index>(to_double(header[1]));
  require(rows > 0 && cols > 0, ErrorCode::DimensionOverflow, "CSV header has a zero dimension");
  const bool labeled = header.size() == 3;
  const std::size_t block = static_cast<std::size_t>(rows) + (labeled ? 1 : 0);
  require((lines.size() - 1) % block == 0, ErrorCode::TruncatedFile,
          "CSV body is not a whole number of sample blocks");

  std::vector<Matrix> samples;
  std::optional<std::vector<Label>> labels;
  if (labeled) labels.emplace();
  for (std::size_t pos = 1; pos < lines.size(); pos += block) {
    std::size_t line = pos;
    if (labeled) {
      const auto cells = split(lines[line++]);
      require(cells.size() == 2 && cells[0] == "label", ErrorCode::InvalidSpec,
              "labeled CSV block must start with 'label,<int>'");
      labels->push_back(static_cast<Label>(to_double(cells[1])));
    }
    Matrix A(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      const auto cells = split(lines[line++]);
      require(static_cast<Index>(cells.size()) == cols, ErrorCode::ShapeMismatch,
              "CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                  std::to_string(cols));
      for (Index j = 0; j < cols; ++j) A(i, j) = to_double(cells[static_cast<std::size_t>(j)]);
    }
    samples.push_back(std::move(A));
  }
  return MatrixStack(std::move(samples), std::move(labels));
}

inline MatrixStack load_csv_stack(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoFailure, "cannot open " + path.string());
  return parse_csv_stack(in);
}

struct SynthSpec {
  std::size_t K_true = 2;
  std::vector<std::size_t> per_cluster{10, 10};
  Index rows = 20;
  Index cols = 20;
  Index k_true = 3;
  double noise_sigma = 0.0;
  double middle_scale = 1.0;
  std::uint64_t seed = 0;
};

inline void require_valid(const SynthSpec& spec) {
  require(spec.K_true >= 1, ErrorCode::InvalidSpec, "K_true must be >= 1");
  require(spec.per_cluster.size() == spec.K_true, ErrorCode::InvalidSpec,
          "per_cluster needs one count per cluster");
  for (std::size_t count : spec.per_cluster) {
    require(count >= 1, ErrorCode::InvalidSpec, "every cluster needs at least one sample");
  }
  require(spec.rows >= 1 && spec.cols >= 1, ErrorCode::InvalidSpec, "rows and cols must be >= 1");
  require(spec.k_true >= 1 && spec.k_true <= std::min(spec.rows, spec.cols), ErrorCode::InvalidSpec,
          "k_true must lie in [1, min(rows, cols)]");
  require(spec.noise_sigma >= 0.0 && std::isfinite(spec.noise_sigma), ErrorCode::InvalidSpec,
          "noise_sigma must be finite and non-negative");
  require(spec.middle_scale > 0.0 && std::isfinite(spec.middle_scale), ErrorCode::InvalidSpec,
          "middle_scale must be finite and positive");
}

/// Samples A_i = L_j M_i R_j^T + sigma G_i, cluster by cluster, with a
/// random orthonormal pair per cluster. Labels hold the cluster index.
inline MatrixStack synth_generate(const SynthSpec& spec) {
  require_valid(spec);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&](Index rows, Index cols) {
    Matrix G(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) G(i, j) = gauss(rng);
    return G;
  };

  std::vector<Matrix> samples;
  std::vector<Label> labels;
  for (std::size_t j = 0; j < spec.K_true; ++j) {
    const Matrix left = orthonormalize(draw(spec.rows, spec.k_true));
    const Matrix right = orthonormalize(draw(spec.cols, spec.k_true));
    for (std::size_t s = 0; s < spec.per_cluster[j]; ++s) {
      const Matrix middle = spec.middle_scale * draw(spec.k_true, spec.k_true);
      Matrix A = left * middle * right.transpose();
      if (spec.noise_sigma > 0.0) A += spec.noise_sigma * draw(spec.rows, spec.cols);
      samples.push_back(std::move(A));
      labels.push_back(static_cast<Label>(j));
    }
  }
  return MatrixStack(std::move(samples), std::move(labels));
}

}  // namespace cglram
