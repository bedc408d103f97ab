#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <zlib.h>

#include "ultra/error.hpp"

namespace ultra::io {

static_assert(std::endian::native == std::endian::little,
              "binary formats are little-endian; big-endian hosts need byte swapping");

/// Appends little-endian fields to a byte buffer; the whole buffer is written
/// at once so the trailing CRC32 covers every preceding byte.
class BinaryWriter {
 public:
  template <typename T>
    requires std::is_arithmetic_v<T>
  void put(T value) {
    const auto* p = reinterpret_cast<const char*>(&value);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }

  template <typename T>
    requires std::is_arithmetic_v<T>
  void put_array(std::span<const T> values) {
    const auto* p = reinterpret_cast<const char*>(values.data());
    buf_.insert(buf_.end(), p, p + values.size_bytes());
  }

  void put_bytes(std::string_view bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }

  void put_string(std::string_view s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    put_bytes(s);
  }

  std::uint32_t crc() const {
    return static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(buf_.data()), static_cast<uInt>(buf_.size())));
  }

  void put_checksum() { put<std::uint32_t>(crc()); }

  const std::vector<char>& bytes() const noexcept { return buf_; }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot open for writing: " + path.string());
    out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (!out) fail(ErrorKind::io, "write failed: " + path.string());
  }

 private:
  std::vector<char> buf_;
};

/// Cursor over an in-memory file image. Reading past the end raises
/// ErrorKind::truncated.
class BinaryReader {
 public:
  explicit BinaryReader(std::vector<char> data, std::string label = {})
      : data_(std::move(data)), label_(std::move(label)) {}

  static BinaryReader from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::not_found, "cannot open: " + path.string());
    std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return BinaryReader(std::move(data), path.string());
  }

  template <typename T>
    requires std::is_arithmetic_v<T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  template <typename T>
    requires std::is_arithmetic_v<T>
  std::vector<T> get_array(std::size_t count) {
    need_elements(count, sizeof(T));
    std::vector<T> out(count);
    std::memcpy(out.data(), data_.data() + pos_, count * sizeof(T));
    pos_ += count * sizeof(T);
    return out;
  }

  std::string get_bytes(std::size_t n) {
    need(n);
    std::string s(data_.data() + pos_, n);
    pos_ += n;
    return s;
  }

  std::string get_string() { return get_bytes(get<std::uint32_t>()); }

  void expect_magic(std::string_view magic, const char* what) {
    if (remaining() < magic.size() || std::string_view(data_.data(), magic.size()) != magic) {
      fail(ErrorKind::format, std::string("not a ") + what + " file (bad magic): " + label_);
    }
    pos_ += magic.size();
  }

  /// Verifies the trailing CRC32 over [0, size-4). Call before parsing so a
  /// damaged body reports corruption rather than a structural error.
  void verify_checksum() const {
    if (data_.size() < 4) fail(ErrorKind::truncated, "file too short for checksum: " + label_);
    const std::size_t body = data_.size() - 4;
    std::uint32_t stored;
    std::memcpy(&stored, data_.data() + body, 4);
    const auto actual = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(data_.data()), static_cast<uInt>(body)));
    if (stored != actual) fail(ErrorKind::corrupt, "checksum mismatch: " + label_);
  }

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  std::size_t size() const noexcept { return data_.size(); }
  const std::string& label() const noexcept { return label_; }

 private:
  void need(std::size_t n) const {
    if (n > remaining()) fail(ErrorKind::truncated, "unexpected end of file: " + label_);
  }
  void need_elements(std::size_t count, std::size_t elem) const {
    if (elem != 0 && count > remaining() / elem) {
      fail(ErrorKind::truncated, "unexpected end of file: " + label_);
    }
  }

  std::vector<char> data_;
  std::size_t pos_ = 0;
  std::string label_;
};

}  // namespace ultra::io
