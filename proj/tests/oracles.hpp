#pragma once

// Reference implementations used to check the library. They share nothing
// with the code under test beyond GMP's plain integer arithmetic.

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <set>

namespace oracle {

inline mpz_class modpow(mpz_class base, mpz_class exp, const mpz_class& mod) {
  mpz_class result = 1;
  base %= mod;
  if (base < 0) base += mod;
  while (exp > 0) {
    if (mpz_odd_p(exp.get_mpz_t())) result = result * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return result;
}

// Miller-Rabin. The fixed bases are deterministic below 3.3e24; larger
// inputs get 32 extra pseudo-random bases.
inline bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  static const int small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (int p : small) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  mpz_class d = n - 1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  auto witness = [&](const mpz_class& a) {
    mpz_class x = modpow(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (unsigned r = 1; r < s; ++r) {
      x = x * x % n;
      if (x == n - 1) return false;
    }
    return true;
  };
  for (int p : small)
    if (witness(p)) return false;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > 81) {
    std::mt19937_64 rng(0x5eed);
    for (int i = 0; i < 32; ++i) {
      mpz_class a = mpz_class(std::to_string(rng())) % (n - 3) + 2;
      if (witness(a)) return false;
    }
  }
  return true;
}

inline mpz_class accumulate(const mpz_class& g, const std::set<mpz_class>& primes, const mpz_class& n) {
  mpz_class e = 1;
  for (const auto& p : primes) e *= p;
  return modpow(g, e, n);
}

inline mpz_class witness_except(const mpz_class& g, const std::set<mpz_class>& primes, const mpz_class& self,
                                const mpz_class& n) {
  mpz_class e = 1;
  for (const auto& p : primes)
    if (p != self) e *= p;
  return modpow(g, e, n);
}

// (1 - (1 - 1/m)^(kn))^k at 50 significant digits.
inline double bloom_fpr(std::uint64_t m, std::uint64_t k, std::uint64_t n) {
  using boost::multiprecision::cpp_dec_float_50;
  cpp_dec_float_50 one = 1;
  cpp_dec_float_50 miss = pow(one - one / cpp_dec_float_50(m), cpp_dec_float_50(k * n));
  return static_cast<double>(pow(one - miss, cpp_dec_float_50(k)));
}

}  // namespace oracle
