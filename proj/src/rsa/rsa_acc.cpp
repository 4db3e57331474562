#include <array>

#include "cryptacc/error.hpp"
#include "cryptacc/hash.hpp"
#include "cryptacc/rsa.hpp"

namespace cryptacc::rsa {

namespace {

BigInt safe_prime_seed(std::mt19937_64& rng, unsigned bits) {
  // p' = 5 mod 6 keeps both p' and 2p'+1 clear of 2 and 3.
  BigInt c = random_bits(rng, bits);
  BigInt r = c % 6;
  c += (5 - r + 6) % 6;
  return c;
}

// p' has bits-1 bits so that p = 2p'+1 has exactly `bits` bits.
BigInt find_sophie_germain(std::mt19937_64& rng, unsigned bits) {
  while (true) {
    BigInt candidate = safe_prime_seed(rng, bits - 1);
    while (mpz_sizeinbase(candidate.get_mpz_t(), 2) == bits - 1) {
      if (is_probable_prime(candidate) && is_probable_prime(2 * candidate + 1)) return candidate;
      candidate += 6;
    }
  }
}

const BigInt& checked_trapdoor_inverse(const RsaKey& key, const BigInt& x, BigInt& out) {
  BigInt phi = key.require_trapdoor().phi();
  if (mpz_invert(out.get_mpz_t(), x.get_mpz_t(), phi.get_mpz_t()) == 0)
    throw AccumulatorError(ErrorCode::not_invertible, "gcd(x, phi(N)) != 1 for x=" + x.get_str(16));
  return out;
}

}  // namespace

RsaKey RsaKey::from_trapdoor(const BigInt& p_prime, const BigInt& q_prime) {
  RsaKey key;
  key.modulus = (2 * p_prime + 1) * (2 * q_prime + 1);
  key.lambda = static_cast<std::uint32_t>(mpz_sizeinbase(key.modulus.get_mpz_t(), 2));
  key.generator = 4;
  key.trapdoor = Trapdoor{p_prime, q_prime};
  return key;
}

const Trapdoor& RsaKey::require_trapdoor() const {
  if (!trapdoor) throw AccumulatorError(ErrorCode::trapdoor_missing, "operation needs the RSA trapdoor");
  return *trapdoor;
}

RsaKey generate_key(std::uint32_t lambda, std::optional<std::uint64_t> seed) {
  if (lambda < 32 || lambda % 2 != 0)
    throw AccumulatorError(ErrorCode::unsupported_lambda, "RSA modulus size must be even and >= 32");
  std::mt19937_64 rng(seed ? *seed : std::random_device{}());
  unsigned half = lambda / 2;
  BigInt p_prime = find_sophie_germain(rng, half);
  BigInt q_prime;
  do {
    q_prime = find_sophie_germain(rng, half);
  } while (q_prime == p_prime);
  RsaKey key = RsaKey::from_trapdoor(p_prime, q_prime);
  key.lambda = lambda;
  return key;
}

BigInt prime_candidate(const Element& e, std::uint32_t lambda, std::uint64_t nonce) {
  unsigned bits = lambda / 2;
  std::size_t need = (bits + 7) / 8;
  std::array<std::uint8_t, 8> nonce_be{};
  for (int i = 0; i < 8; ++i) nonce_be[i] = static_cast<std::uint8_t>(nonce >> (56 - 8 * i));
  Bytes stream;
  for (std::uint32_t block = 0; stream.size() < need; ++block) {
    std::array<std::uint8_t, 4> block_be{static_cast<std::uint8_t>(block >> 24), static_cast<std::uint8_t>(block >> 16),
                                         static_cast<std::uint8_t>(block >> 8), static_cast<std::uint8_t>(block)};
    Digest d = sha256({e.view(), nonce_be, block_be});
    stream.insert(stream.end(), d.begin(), d.end());
  }
  stream.resize(need);
  BigInt v = bigint_from_bytes(stream);
  if (unsigned excess = static_cast<unsigned>(need * 8 - bits)) v >>= excess;
  mpz_setbit(v.get_mpz_t(), bits - 1);
  mpz_setbit(v.get_mpz_t(), 0);
  return v;
}

PrimeRepresentative hash_to_prime(const Element& e, std::uint32_t lambda) {
  if (lambda < 32) throw AccumulatorError(ErrorCode::unsupported_lambda, "hash_to_prime needs lambda >= 32");
  for (std::uint64_t nonce = 0; nonce < kPrimeSearchCap; ++nonce) {
    BigInt candidate = prime_candidate(e, lambda, nonce);
    if (is_probable_prime(candidate)) return PrimeRepresentative{candidate, e, nonce};
  }
  throw AccumulatorError(ErrorCode::search_exhausted, "no prime within 2^20 nonces");
}

bool verify_membership(const RsaKey& key, const BigInt& value, const BigInt& x, const BigInt& witness) {
  if (witness <= 0 || witness >= key.modulus || x <= 1) return false;
  return pow_mod(witness, x, key.modulus) == value;
}

BigInt update_on_add(const RsaKey& key, const BigInt& witness, const BigInt& added) {
  return pow_mod(witness, added, key.modulus);
}

BigInt update_on_delete(const RsaKey& key, const BigInt& witness, const BigInt& x_self, const BigInt& y_deleted,
                        const BigInt& acc_new) {
  Bezout c = bezout(x_self, y_deleted);
  BigInt out = pow_mod(witness, c.b, key.modulus) * pow_mod(acc_new, c.a, key.modulus);
  return out % key.modulus;
}

bool verify_nonmembership(const RsaKey& key, const BigInt& value, const BigInt& x, const NonMemWitness& w) {
  if (w.B <= 0 || w.B >= key.modulus || x <= 1) return false;
  BigInt lhs = pow_mod(value, w.a, key.modulus);
  BigInt rhs = pow_mod(w.B, x, key.modulus) * key.generator % key.modulus;
  return lhs == rhs;
}

BigInt accumulate(const RsaKey& key, const std::set<BigInt>& primes) {
  BigInt exponent = 1;
  for (const auto& p : primes) exponent *= p;
  return pow_mod(key.generator, exponent, key.modulus);
}

// ---------------------------------------------------------------------------

RsaAccumulator::RsaAccumulator(RsaKey key) : key_(std::move(key)), value_(key_.generator) {}

BigInt RsaAccumulator::add(const BigInt& x) {
  if (contains(x)) throw AccumulatorError(ErrorCode::duplicate_element, "prime " + x.get_str(16) + " already accumulated");
  BigInt witness = value_;
  value_ = pow_mod(value_, x, key_.modulus);
  members_.insert(x);
  return witness;
}

void RsaAccumulator::remove(const BigInt& x) {
  key_.require_trapdoor();
  if (!contains(x)) throw AccumulatorError(ErrorCode::not_a_member, "prime " + x.get_str(16));
  BigInt inv;
  checked_trapdoor_inverse(key_, x, inv);
  value_ = pow_mod(value_, inv, key_.modulus);
  members_.erase(x);
}

BigInt RsaAccumulator::membership_witness(const BigInt& x) const {
  if (!contains(x)) throw AccumulatorError(ErrorCode::not_a_member, "prime " + x.get_str(16));
  BigInt exponent = 1;
  for (const auto& p : members_)
    if (p != x) exponent *= p;
  return pow_mod(key_.generator, exponent, key_.modulus);
}

NonMemWitness RsaAccumulator::nonmembership_witness(const BigInt& x) const {
  if (contains(x)) throw AccumulatorError(ErrorCode::element_is_member, "prime " + x.get_str(16));
  BigInt product = 1;
  for (const auto& p : members_) product *= p;
  Bezout c = bezout(product, x);
  return NonMemWitness{c.a, pow_mod(key_.generator, -c.b, key_.modulus)};
}

void RsaAccumulator::restore(BigInt value, std::set<BigInt> members) {
  value_ = std::move(value);
  members_ = std::move(members);
}

// ---------------------------------------------------------------------------

ClRsaBAccumulator::ClRsaBAccumulator(RsaKey key) : key_(std::move(key)), value_(key_.generator) {}

BigInt ClRsaBAccumulator::add(const BigInt& x) {
  key_.require_trapdoor();
  if (contains(x)) throw AccumulatorError(ErrorCode::duplicate_element, "prime " + x.get_str(16) + " already accumulated");
  BigInt witness = membership_witness(x);
  members_.insert(x);
  return witness;
}

ClRsaBAccumulator::DeleteBroadcast ClRsaBAccumulator::remove(const BigInt& x) {
  key_.require_trapdoor();
  if (!contains(x)) throw AccumulatorError(ErrorCode::not_a_member, "prime " + x.get_str(16));
  value_ = membership_witness(x);
  members_.erase(x);
  return DeleteBroadcast{x, value_};
}

BigInt ClRsaBAccumulator::membership_witness(const BigInt& x) const {
  BigInt inv;
  checked_trapdoor_inverse(key_, x, inv);
  return pow_mod(value_, inv, key_.modulus);
}

void ClRsaBAccumulator::restore(BigInt value, std::set<BigInt> members) {
  value_ = std::move(value);
  members_ = std::move(members);
}

}  // namespace cryptacc::rsa
