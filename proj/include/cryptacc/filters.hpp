#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cryptacc/document.hpp"
#include "cryptacc/element.hpp"

namespace cryptacc::filters {

// Exact false-positive rate (1 - (1 - 1/m)^(kn))^k of a Bloom filter with
// m bits, k hash functions and n inserted elements.
double bloom_fpr_estimate(std::uint64_t m, std::uint64_t k, std::uint64_t n);

// Bit positions h_a + i*h_b mod m for i in [0, k).
std::vector<std::uint64_t> bloom_indices(std::uint64_t h_a, std::uint64_t h_b, std::uint64_t m, std::uint32_t k);

// Optimal k for a given bits-per-element ratio (round(ratio * ln 2), at least 1).
std::uint32_t optimal_hash_count(double bits_per_element);

class BloomFilter {
 public:
  BloomFilter(std::uint64_t m, std::uint32_t k, std::uint64_t seed = 0);

  void insert(const Element& e);
  bool query(const Element& e) const;

  std::uint64_t m() const noexcept { return m_; }
  std::uint32_t k() const noexcept { return k_; }
  std::uint64_t n() const noexcept { return n_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t popcount() const;
  bool bit(std::uint64_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  std::size_t byte_size() const { return (m_ + 7) / 8; }

  std::vector<std::uint64_t> indices(const Element& e) const;

  // Header (m, k, n, seed) plus the bit array as hex.
  Document dump() const;
  static BloomFilter load(const Document& doc);

  bool operator==(const BloomFilter&) const = default;

 private:
  std::uint64_t m_;
  std::uint32_t k_;
  std::uint64_t n_ = 0;
  std::uint64_t seed_;
  std::vector<std::uint64_t> words_;
};

// Cuckoo filter with 2^b buckets, partial-key relocation and deletion.
//
// A fingerprint f of element e lives in bucket i1 = H(e) mod 2^b or in
// i2 = i1 ^ (H(f) mod 2^b). Zero marks an empty slot, so a zero
// fingerprint is stored as 1.
class CuckooFilter {
 public:
  enum class InsertResult { ok, full };
  enum class DeleteResult { ok, not_found };

  struct Config {
    std::uint32_t bucket_bits = 10;
    std::uint32_t fingerprint_bits = 16;
    std::uint32_t slots_per_bucket = 4;
    std::uint32_t max_kicks = 500;
    std::uint64_t seed = 0;
  };

  explicit CuckooFilter(Config config);

  InsertResult insert(const Element& e);
  bool query(const Element& e) const;
  DeleteResult remove(const Element& e);

  std::uint64_t n() const noexcept { return n_; }
  std::uint64_t bucket_count() const noexcept { return std::uint64_t{1} << config_.bucket_bits; }
  std::uint64_t capacity() const noexcept { return bucket_count() * config_.slots_per_bucket; }
  double load_factor() const { return static_cast<double>(n_) / static_cast<double>(capacity()); }
  std::uint64_t table_bits() const { return capacity() * config_.fingerprint_bits; }
  const Config& config() const noexcept { return config_; }

  std::uint32_t fingerprint(const Element& e) const;
  std::uint64_t primary_index(const Element& e) const;
  std::uint64_t alt_index(std::uint64_t index, std::uint32_t fp) const;
  std::uint32_t slot(std::uint64_t bucket, std::uint32_t s) const {
    return table_[bucket * config_.slots_per_bucket + s];
  }

  Document dump() const;
  static CuckooFilter load(const Document& doc);

 private:
  struct Hashed {
    std::uint64_t index;
    std::uint32_t fp;
  };
  Hashed hash(const Element& e) const;
  bool place(std::uint64_t bucket, std::uint32_t fp);
  bool contains_in(std::uint64_t bucket, std::uint32_t fp) const;

  Config config_;
  std::uint64_t n_ = 0;
  std::vector<std::uint32_t> table_;
};

// Monte-Carlo experiments. Members and probes are random 16-byte strings
// from disjoint families, so every probe is a true non-member.
Element random_member(std::uint64_t& state);
Element random_probe(std::uint64_t& state);

struct FprMeasurement {
  double analytic;
  double empirical;
  double standard_error;  // binomial, around the analytic value
  std::uint64_t false_positives;
  std::uint64_t probes;

  bool within(double sigmas) const;
};

// The closed form is an expectation over hash functions, and one filter's
// fill fraction strays from it by several binomial errors when m is small.
// Probes are therefore spread over fresh filters, probes_per_filter each.
FprMeasurement measure_bloom_fpr(std::uint64_t m, std::uint32_t k, std::uint64_t n, std::uint64_t probes,
                                 std::uint64_t seed, std::uint64_t probes_per_filter = 100);

// Largest-fingerprint configuration within the bit budget: the smallest
// power-of-two table holding n at <= 95% load, then as many fingerprint bits
// as the budget allows (at most 32).
CuckooFilter::Config cuckoo_config_for_budget(std::uint64_t n, double bits_per_element, std::uint64_t seed = 0);

struct FilterComparison {
  std::uint64_t n;
  std::uint64_t probes;
  std::uint64_t bloom_m;
  std::uint32_t bloom_k;
  CuckooFilter::Config cuckoo;
  double bloom_bits_per_element;
  double cuckoo_bits_per_element;
  std::uint64_t cuckoo_rejected;  // inserts that returned full
  double bloom_fpr;
  double cuckoo_fpr;
};

FilterComparison compare_filters(std::uint64_t n, double bits_per_element, std::uint64_t probes, std::uint64_t seed);

}  // namespace cryptacc::filters
