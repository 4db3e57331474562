#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "cryptacc/bigint.hpp"
#include "cryptacc/element.hpp"
#include "cryptacc/scheme.hpp"

namespace cryptacc::rsa {

// Sophie Germain primes p', q' with p = 2p'+1, q = 2q'+1.
struct Trapdoor {
  BigInt p_prime;
  BigInt q_prime;

  BigInt phi() const { return 4 * p_prime * q_prime; }
  bool operator==(const Trapdoor&) const = default;
};

struct RsaKey {
  std::uint32_t lambda = 0;
  BigInt modulus;
  BigInt generator;
  std::optional<Trapdoor> trapdoor;

  // Toy/test constructor: N = (2p'+1)(2q'+1), g = 4.
  static RsaKey from_trapdoor(const BigInt& p_prime, const BigInt& q_prime);

  const Trapdoor& require_trapdoor() const;
  bool operator==(const RsaKey&) const = default;
};

// Safe-prime modulus of lambda bits (N has lambda-1 or lambda bits),
// deterministic under a seed. Any lambda >= 32 is accepted here; profile
// checks happen at the scheme layer.
RsaKey generate_key(std::uint32_t lambda, std::optional<std::uint64_t> seed);

struct PrimeRepresentative {
  BigInt prime;
  Element source;
  std::uint64_t nonce = 0;
};

inline constexpr std::uint64_t kPrimeSearchCap = std::uint64_t{1} << 20;

// Deterministic lambda/2-bit odd prime derived from SHA-256(e || nonce).
PrimeRepresentative hash_to_prime(const Element& e, std::uint32_t lambda);
// Candidate before the primality test; exposed for regression checks.
BigInt prime_candidate(const Element& e, std::uint32_t lambda, std::uint64_t nonce);

bool verify_membership(const RsaKey& key, const BigInt& value, const BigInt& x, const BigInt& witness);

// Holder-side additive update: w^y.
BigInt update_on_add(const RsaKey& key, const BigInt& witness, const BigInt& added);
// Holder-side Bezout update after a deletion (also the CL-RSA-B update
// rule): with a*x_self + b*y_deleted = 1, returns w^b * acc_new^a.
BigInt update_on_delete(const RsaKey& key, const BigInt& witness, const BigInt& x_self,
                        const BigInt& y_deleted, const BigInt& acc_new);

struct NonMemWitness {
  BigInt a;  // signed
  BigInt B;

  bool operator==(const NonMemWitness&) const = default;
};

// value^a == B^x * g (mod N)
bool verify_nonmembership(const RsaKey& key, const BigInt& value, const BigInt& x, const NonMemWitness& w);

// Dynamic universal RSA accumulator; value = g^(product of members) mod N.
//
// The manager tracks member primes. Additions need no trapdoor, deletions do.
class RsaAccumulator {
 public:
  explicit RsaAccumulator(RsaKey key);

  const RsaKey& key() const noexcept { return key_; }
  const BigInt& value() const noexcept { return value_; }
  const std::set<BigInt>& members() const noexcept { return members_; }
  bool contains(const BigInt& x) const { return members_.count(x) != 0; }

  // Returns the new member's witness (the previous value).
  BigInt add(const BigInt& x);
  void remove(const BigInt& x);

  // From-scratch membership witness g^(product of other members).
  BigInt membership_witness(const BigInt& x) const;
  NonMemWitness nonmembership_witness(const BigInt& x) const;

  // Replaces value/members, e.g. when restoring persisted state.
  void restore(BigInt value, std::set<BigInt> members);

 private:
  RsaKey key_;
  BigInt value_;
  std::set<BigInt> members_;
};

// CL-RSA-B: additions leave the value untouched and mint the witness with
// the trapdoor; only deletions change the value and require a broadcast.
class ClRsaBAccumulator {
 public:
  struct DeleteBroadcast {
    BigInt deleted;
    BigInt value;
  };

  explicit ClRsaBAccumulator(RsaKey key);

  const RsaKey& key() const noexcept { return key_; }
  const BigInt& value() const noexcept { return value_; }
  const std::set<BigInt>& members() const noexcept { return members_; }
  bool contains(const BigInt& x) const { return members_.count(x) != 0; }

  BigInt add(const BigInt& x);
  DeleteBroadcast remove(const BigInt& x);
  // value^(x^-1 mod phi); requires the trapdoor.
  BigInt membership_witness(const BigInt& x) const;

  void restore(BigInt value, std::set<BigInt> members);

 private:
  RsaKey key_;
  BigInt value_;
  std::set<BigInt> members_;
};

// Conversions to and from the generic key used by the "rsa" and "clrsab"
// schemes.
SchemeKey scheme_key(const RsaKey& key, std::string_view scheme, std::uint64_t threshold = 0);
RsaKey rsa_key(const SchemeKey& key);

// Brute-force g^(product) mod N; used as the from-scratch reference.
BigInt accumulate(const RsaKey& key, const std::set<BigInt>& primes);

}  // namespace cryptacc::rsa
