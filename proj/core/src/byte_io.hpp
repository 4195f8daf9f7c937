#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace lav::detail {

// Little-endian encode/decode independent of host byte order.
class ByteWriter {
 public:
  void tag(std::string_view four_cc) {
    for (char ch : four_cc) bytes_.push_back(static_cast<std::uint8_t>(ch));
  }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void i16(std::int16_t v) { put(static_cast<std::uint16_t>(v), 2); }
  void f32(float v) { put(std::bit_cast<std::uint32_t>(v), 4); }
  void reserve(std::size_t n) { bytes_.reserve(n); }

  std::vector<std::uint8_t> take() && { return std::move(bytes_); }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  std::size_t position() const noexcept { return pos_; }
  bool has(std::size_t n) const noexcept { return remaining() >= n; }

  // Callers check has() first; these do not bounds-check.
  bool tag_is(std::string_view four_cc) const {
    for (std::size_t i = 0; i < four_cc.size(); ++i)
      if (bytes_[pos_ + i] != static_cast<std::uint8_t>(four_cc[i])) return false;
    return true;
  }
  void skip(std::size_t n) { pos_ += n; }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::int16_t i16() { return static_cast<std::int16_t>(u16()); }
  float f32() { return std::bit_cast<float>(u32()); }

 private:
  std::uint64_t get(int width) {
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace lav::detail
