#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace cryptacc {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);
// Hash of the concatenation of all parts.
Digest sha256(std::initializer_list<std::span<const std::uint8_t>> parts);

}  // namespace cryptacc
