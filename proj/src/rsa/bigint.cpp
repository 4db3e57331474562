#include "cryptacc/bigint.hpp"

#include "cryptacc/error.hpp"

namespace cryptacc {

std::string to_hex(const BigInt& v) { return v.get_str(16); }

BigInt bigint_from_hex(std::string_view hex) {
  std::string_view digits = hex;
  if (!digits.empty() && digits.front() == '-') digits.remove_prefix(1);
  if (digits.empty()) throw AccumulatorError(ErrorCode::parse_error, "empty big integer");
  for (char c : digits) {
    bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!ok) throw AccumulatorError(ErrorCode::parse_error, "big integers are lowercase hex");
  }
  return BigInt(std::string(hex), 16);
}

BigInt bigint_from_bytes(std::span<const std::uint8_t> big_endian) {
  BigInt out;
  if (!big_endian.empty()) mpz_import(out.get_mpz_t(), big_endian.size(), 1, 1, 1, 0, big_endian.data());
  return out;
}

std::size_t byte_length(const BigInt& v) {
  if (v == 0) return 1;
  return (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
}

BigInt inverse_mod(const BigInt& v, const BigInt& modulus) {
  BigInt out;
  if (mpz_invert(out.get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t()) == 0)
    throw AccumulatorError(ErrorCode::key_compromise, "value is not a unit modulo N");
  return out;
}

BigInt pow_mod(const BigInt& base, const BigInt& exp, const BigInt& modulus) {
  BigInt out;
  if (exp >= 0) {
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
    return out;
  }
  BigInt inv = inverse_mod(base, modulus);
  BigInt pos = -exp;
  mpz_powm(out.get_mpz_t(), inv.get_mpz_t(), pos.get_mpz_t(), modulus.get_mpz_t());
  return out;
}

Bezout bezout(const BigInt& x, const BigInt& y) {
  BigInt g, a, b;
  mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  if (g != 1) throw AccumulatorError(ErrorCode::not_coprime, "gcd is " + g.get_str());
  return Bezout{a, b};
}

bool is_probable_prime(const BigInt& v) { return mpz_probab_prime_p(v.get_mpz_t(), 64) > 0; }

BigInt random_bits(std::mt19937_64& rng, unsigned bits) {
  Bytes raw((bits + 7) / 8);
  for (auto& b : raw) b = static_cast<std::uint8_t>(rng() >> 56);
  BigInt v = bigint_from_bytes(raw);
  unsigned excess = static_cast<unsigned>(raw.size() * 8 - bits);
  if (excess) v >>= excess;
  mpz_setbit(v.get_mpz_t(), bits - 1);
  return v;
}

}  // namespace cryptacc
