#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cryptacc {

using Bytes = std::vector<std::uint8_t>;

std::string to_hex(std::span<const std::uint8_t> bytes);
Bytes from_hex(std::string_view hex);

// An arbitrary non-empty byte string to be accumulated.
class Element {
 public:
  static constexpr std::size_t kMaxSize = std::size_t{1} << 16;

  explicit Element(Bytes bytes);
  explicit Element(std::string_view text);

  static Element from_hex(std::string_view hex) { return Element(cryptacc::from_hex(hex)); }

  const Bytes& bytes() const noexcept { return bytes_; }
  std::span<const std::uint8_t> view() const noexcept { return bytes_; }
  std::size_t size() const noexcept { return bytes_.size(); }
  std::string hex() const { return to_hex(bytes_); }

  auto operator<=>(const Element&) const = default;

 private:
  Bytes bytes_;
};

}  // namespace cryptacc
