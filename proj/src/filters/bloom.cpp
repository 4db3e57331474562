#include <array>
#include <bit>
#include <cmath>

#include "cryptacc/error.hpp"
#include "cryptacc/filters.hpp"
#include "cryptacc/hash.hpp"

namespace cryptacc::filters {

namespace {

std::array<std::uint8_t, 8> le64(std::uint64_t v) {
  std::array<std::uint8_t, 8> out{};
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return out;
}

std::uint64_t read_le64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

double bloom_fpr_estimate(std::uint64_t m, std::uint64_t k, std::uint64_t n) {
  if (m == 0 || k == 0) throw AccumulatorError(ErrorCode::domain_error, "Bloom filter needs m >= 1 and k >= 1");
  // (1 - 1/m)^(kn) via log1p keeps precision for large m.
  double unset = std::exp(static_cast<double>(k) * static_cast<double>(n) * std::log1p(-1.0 / static_cast<double>(m)));
  return std::pow(1.0 - unset, static_cast<double>(k));
}

std::vector<std::uint64_t> bloom_indices(std::uint64_t h_a, std::uint64_t h_b, std::uint64_t m, std::uint32_t k) {
  std::vector<std::uint64_t> out(k);
  std::uint64_t pos = h_a % m;
  std::uint64_t step = h_b % m;
  for (std::uint32_t i = 0; i < k; ++i) {
    out[i] = pos;
    pos = (pos + step) % m;
  }
  return out;
}

std::uint32_t optimal_hash_count(double bits_per_element) {
  auto k = static_cast<std::uint32_t>(std::lround(bits_per_element * std::log(2.0)));
  return k == 0 ? 1 : k;
}

BloomFilter::BloomFilter(std::uint64_t m, std::uint32_t k, std::uint64_t seed)
    : m_(m), k_(k), seed_(seed) {
  if (m == 0 || k == 0) throw AccumulatorError(ErrorCode::domain_error, "Bloom filter needs m >= 1 and k >= 1");
  words_.assign((m + 63) / 64, 0);
}

std::vector<std::uint64_t> BloomFilter::indices(const Element& e) const {
  Digest d = sha256({le64(seed_), e.view()});
  return bloom_indices(read_le64(d.data()), read_le64(d.data() + 8), m_, k_);
}

void BloomFilter::insert(const Element& e) {
  for (auto i : indices(e)) words_[i / 64] |= std::uint64_t{1} << (i % 64);
  ++n_;
}

bool BloomFilter::query(const Element& e) const {
  for (auto i : indices(e))
    if (!bit(i)) return false;
  return true;
}

std::uint64_t BloomFilter::popcount() const {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

Document BloomFilter::dump() const {
  Document doc("bloom-filter");
  doc.set_u64("m", m_);
  doc.set_u64("k", k_);
  doc.set_u64("n", n_);
  doc.set_u64("seed", seed_);
  Bytes bits(byte_size());
  for (std::uint64_t i = 0; i < m_; ++i)
    if (bit(i)) bits[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  doc.set("bits", to_hex(bits));
  return doc;
}

BloomFilter BloomFilter::load(const Document& doc) {
  if (doc.get("kind") != "bloom-filter") throw AccumulatorError(ErrorCode::parse_error, "not a bloom-filter dump");
  BloomFilter f(doc.get_u64("m"), static_cast<std::uint32_t>(doc.get_u64("k")), doc.get_u64("seed"));
  f.n_ = doc.get_u64("n");
  Bytes bits = from_hex(doc.get("bits"));
  if (bits.size() != f.byte_size()) throw AccumulatorError(ErrorCode::parse_error, "bit array size mismatch");
  for (std::uint64_t i = 0; i < f.m_; ++i)
    if ((bits[i / 8] >> (i % 8)) & 1u) f.words_[i / 64] |= std::uint64_t{1} << (i % 64);
  return f;
}

}  // namespace cryptacc::filters
