#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "cryptacc/element.hpp"

namespace cryptacc {

using BigInt = mpz_class;

std::string to_hex(const BigInt& v);  // lowercase, no prefix, "-" for negatives
BigInt bigint_from_hex(std::string_view hex);
BigInt bigint_from_bytes(std::span<const std::uint8_t> big_endian);
std::size_t byte_length(const BigInt& v);

// base^exp mod modulus for any sign of exp. A negative exponent needs base
// to be a unit; a non-unit base shares a factor with the modulus and is
// reported as key_compromise.
BigInt pow_mod(const BigInt& base, const BigInt& exp, const BigInt& modulus);
BigInt inverse_mod(const BigInt& v, const BigInt& modulus);

struct Bezout {
  BigInt a;
  BigInt b;
};

// a*x + b*y = 1; throws not_coprime otherwise.
Bezout bezout(const BigInt& x, const BigInt& y);

// Probable prime after 64 rounds.
bool is_probable_prime(const BigInt& v);

// Uniform value with exactly `bits` significant bits drawn from rng.
BigInt random_bits(std::mt19937_64& rng, unsigned bits);

}  // namespace cryptacc
