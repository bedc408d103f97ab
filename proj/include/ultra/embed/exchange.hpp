#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "ultra/embed/matrix.hpp"
#include "ultra/error.hpp"

// Token-embedding exchange file, little-endian:
//   "ULTE" | version u32 | dim u32 | entry count u64
//   per entry: id length u32 | id bytes | token count u32 | has_cls u8 |
//              token count x dim float32, row-major

namespace ultra::embed {

inline constexpr char kExchangeMagic[4] = {'U', 'L', 'T', 'E'};
inline constexpr std::uint32_t kExchangeVersion = 1;

struct ExchangeEntry {
  std::string text_id;
  TokenEmbeddingMatrix matrix;
};

class ExchangeWriter {
 public:
  ExchangeWriter(const std::filesystem::path& path, std::uint32_t dim = kModelDim)
      : out_(path, std::ios::binary | std::ios::trunc), path_(path), dim_(dim) {
    if (!out_) fail(ErrorKind::io, "cannot create exchange file: " + path.string());
    out_.write(kExchangeMagic, 4);
    put(kExchangeVersion);
    put(dim_);
    put(std::uint64_t{0});  // patched in close()
  }

  ExchangeWriter(const ExchangeWriter&) = delete;
  ExchangeWriter& operator=(const ExchangeWriter&) = delete;

  ~ExchangeWriter() {
    try {
      close();
    } catch (...) {
    }
  }

  void write(std::string_view text_id, const TokenEmbeddingMatrix& m) {
    require(m.width == dim_, ErrorKind::dimension_mismatch,
            "exchange entry width " + std::to_string(m.width) + " != file dim " + std::to_string(dim_));
    m.validate();
    put(static_cast<std::uint32_t>(text_id.size()));
    out_.write(text_id.data(), static_cast<std::streamsize>(text_id.size()));
    put(static_cast<std::uint32_t>(m.rows));
    put(static_cast<std::uint8_t>(m.has_cls ? 1 : 0));
    out_.write(reinterpret_cast<const char*>(m.values.data()),
               static_cast<std::streamsize>(m.values.size() * sizeof(float)));
    ++count_;
  }

  void close() {
    if (!out_.is_open()) return;
    out_.seekp(12);
    put(count_);
    out_.close();
    if (out_.fail()) fail(ErrorKind::io, "write failed: " + path_.string());
  }

 private:
  template <typename T>
  void put(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }

  std::ofstream out_;
  std::filesystem::path path_;
  std::uint32_t dim_;
  std::uint64_t count_ = 0;
};

/// Streams entries in file order, validating structure and values.
class ExchangeReader {
 public:
  explicit ExchangeReader(const std::filesystem::path& path,
                          std::optional<std::uint32_t> expected_dim = kModelDim)
      : in_(path, std::ios::binary), path_(path) {
    if (!in_) fail(ErrorKind::not_found, "cannot open exchange file: " + path.string());
    file_size_ = std::filesystem::file_size(path);
    char magic[4] = {};
    if (!in_.read(magic, 4) || std::memcmp(magic, kExchangeMagic, 4) != 0) {
      fail(ErrorKind::format, "not an exchange file (bad magic): " + path.string());
    }
    const auto version = get<std::uint32_t>();
    require(version == kExchangeVersion, ErrorKind::version_mismatch,
            "unsupported exchange version " + std::to_string(version) + ": " + path.string());
    dim_ = get<std::uint32_t>();
    if (expected_dim && dim_ != *expected_dim) {
      fail(ErrorKind::dimension_mismatch, "exchange dim " + std::to_string(dim_) + " != expected " +
                                              std::to_string(*expected_dim) + ": " + path.string());
    }
    require(dim_ > 0, ErrorKind::dimension_mismatch, "exchange dim is zero: " + path.string());
    count_ = get<std::uint64_t>();
  }

  std::uint32_t dim() const noexcept { return dim_; }
  std::uint64_t count() const noexcept { return count_; }

  /// Offset of the next entry; usable with seek() for random access.
  std::uint64_t tell() { return static_cast<std::uint64_t>(in_.tellg()); }
  void seek(std::uint64_t offset) {
    in_.clear();
    in_.seekg(static_cast<std::streamoff>(offset));
  }

  std::optional<ExchangeEntry> next() {
    if (read_ >= count_) return std::nullopt;
    ExchangeEntry e;
    e.text_id = read_id();
    e.matrix = read_matrix();
    ++read_;
    return e;
  }

  /// Reads only the id and skips the values; returns the entry offset.
  std::optional<std::pair<std::string, std::uint64_t>> skip_next() {
    if (read_ >= count_) return std::nullopt;
    const std::uint64_t offset = tell();
    std::string id = read_id();
    const auto rows = get<std::uint32_t>();
    get<std::uint8_t>();
    const std::uint64_t bytes = std::uint64_t{rows} * dim_ * sizeof(float);
    const std::uint64_t here = tell();
    if (here + bytes > file_size_) truncated();
    seek(here + bytes);
    ++read_;
    return std::make_pair(std::move(id), offset);
  }

  /// Random-access read of the entry at `offset` (from skip_next()).
  ExchangeEntry read_at(std::uint64_t offset) {
    seek(offset);
    ExchangeEntry e;
    e.text_id = read_id();
    e.matrix = read_matrix();
    return e;
  }

 private:
  [[noreturn]] void truncated() const {
    fail(ErrorKind::truncated, "truncated exchange file: " + path_.string());
  }

  template <typename T>
  T get() {
    T v;
    if (!in_.read(reinterpret_cast<char*>(&v), sizeof(T))) truncated();
    return v;
  }

  std::string read_id() {
    const auto len = get<std::uint32_t>();
    if (tell() + len > file_size_) truncated();
    std::string id(len, '\0');
    if (len > 0 && !in_.read(id.data(), len)) truncated();
    return id;
  }

  TokenEmbeddingMatrix read_matrix() {
    const auto rows = get<std::uint32_t>();
    const auto cls = get<std::uint8_t>();
    require(cls <= 1, ErrorKind::format, "bad has_cls flag in exchange file: " + path_.string());
    const std::uint64_t bytes = std::uint64_t{rows} * dim_ * sizeof(float);
    if (tell() + bytes > file_size_) truncated();
    TokenEmbeddingMatrix m(rows, dim_, cls == 1);
    if (bytes > 0 && !in_.read(reinterpret_cast<char*>(m.values.data()), static_cast<std::streamsize>(bytes))) {
      truncated();
    }
    for (float v : m.values) {
      require(std::isfinite(v), ErrorKind::non_finite, "non-finite value in exchange file: " + path_.string());
    }
    return m;
  }

  std::ifstream in_;
  std::filesystem::path path_;
  std::uint64_t file_size_ = 0;
  std::uint32_t dim_ = 0;
  std::uint64_t count_ = 0;
  std::uint64_t read_ = 0;
};

}  // namespace ultra::embed
