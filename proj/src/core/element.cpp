#include "cryptacc/element.hpp"

#include "cryptacc/error.hpp"

namespace cryptacc {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw AccumulatorError(ErrorCode::parse_error, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw AccumulatorError(ErrorCode::parse_error, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Element::Element(Bytes bytes) : bytes_(std::move(bytes)) {
  if (bytes_.empty()) throw AccumulatorError(ErrorCode::domain_error, "element must be non-empty");
  if (bytes_.size() > kMaxSize) throw AccumulatorError(ErrorCode::domain_error, "element exceeds 65536 bytes");
}

Element::Element(std::string_view text) : Element(Bytes(text.begin(), text.end())) {}

}  // namespace cryptacc
