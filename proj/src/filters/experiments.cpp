#include <algorithm>
#include <cmath>

#include "cryptacc/error.hpp"
#include "cryptacc/filters.hpp"

namespace cryptacc::filters {

namespace {

// splitmix64; cheap and fully determined by the caller's state.
std::uint64_t next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Element random_tagged(std::uint64_t& state, std::uint8_t tag) {
  Bytes b(16);
  std::uint64_t hi = next(state), lo = next(state);
  for (int i = 0; i < 8; ++i) {
    b[i] = static_cast<std::uint8_t>(hi >> (8 * i));
    b[8 + i] = static_cast<std::uint8_t>(lo >> (8 * i));
  }
  b[0] = tag;
  return Element(std::move(b));
}

}  // namespace

Element random_member(std::uint64_t& state) { return random_tagged(state, 0x4d); }
Element random_probe(std::uint64_t& state) { return random_tagged(state, 0x50); }

bool FprMeasurement::within(double sigmas) const {
  return std::abs(empirical - analytic) <= sigmas * standard_error;
}

FprMeasurement measure_bloom_fpr(std::uint64_t m, std::uint32_t k, std::uint64_t n, std::uint64_t probes,
                                 std::uint64_t seed, std::uint64_t probes_per_filter) {
  if (probes == 0 || probes_per_filter == 0)
    throw AccumulatorError(ErrorCode::domain_error, "probes must be positive");
  double analytic = bloom_fpr_estimate(m, k, n);
  std::uint64_t state = seed;
  std::uint64_t hits = 0, done = 0;
  for (std::uint64_t round = 0; done < probes; ++round) {
    BloomFilter filter(m, k, next(state));
    for (std::uint64_t i = 0; i < n; ++i) filter.insert(random_member(state));
    std::uint64_t batch = std::min(probes_per_filter, probes - done);
    for (std::uint64_t i = 0; i < batch; ++i) hits += filter.query(random_probe(state));
    done += batch;
  }
  double p = static_cast<double>(hits) / static_cast<double>(probes);
  double se = std::sqrt(analytic * (1 - analytic) / static_cast<double>(probes));
  return {analytic, p, se, hits, probes};
}

CuckooFilter::Config cuckoo_config_for_budget(std::uint64_t n, double bits_per_element, std::uint64_t seed) {
  if (n == 0 || !(bits_per_element > 0)) throw AccumulatorError(ErrorCode::domain_error, "need n > 0 and a bit budget");
  CuckooFilter::Config c;
  c.seed = seed;
  c.bucket_bits = 1;
  while (static_cast<double>(n) > 0.95 * c.slots_per_bucket * static_cast<double>(std::uint64_t{1} << c.bucket_bits))
    ++c.bucket_bits;
  double slots = static_cast<double>(c.slots_per_bucket) * static_cast<double>(std::uint64_t{1} << c.bucket_bits);
  auto f = static_cast<std::uint32_t>(std::floor(bits_per_element * static_cast<double>(n) / slots));
  if (f < 1) throw AccumulatorError(ErrorCode::domain_error, "bit budget too small for any fingerprint");
  c.fingerprint_bits = std::min<std::uint32_t>(f, 32);
  return c;
}

FilterComparison compare_filters(std::uint64_t n, double bits_per_element, std::uint64_t probes, std::uint64_t seed) {
  FilterComparison r{};
  r.n = n;
  r.probes = probes;
  r.bloom_m = static_cast<std::uint64_t>(std::floor(bits_per_element * static_cast<double>(n)));
  r.bloom_k = optimal_hash_count(bits_per_element);
  r.cuckoo = cuckoo_config_for_budget(n, bits_per_element, seed);

  BloomFilter bloom(r.bloom_m, r.bloom_k, seed);
  CuckooFilter cuckoo(r.cuckoo);
  std::uint64_t state = seed;
  for (std::uint64_t i = 0; i < n; ++i) {
    Element e = random_member(state);
    bloom.insert(e);
    if (cuckoo.insert(e) == CuckooFilter::InsertResult::full) ++r.cuckoo_rejected;
  }
  std::uint64_t bloom_hits = 0, cuckoo_hits = 0;
  for (std::uint64_t i = 0; i < probes; ++i) {
    Element e = random_probe(state);
    bloom_hits += bloom.query(e);
    cuckoo_hits += cuckoo.query(e);
  }
  r.bloom_bits_per_element = static_cast<double>(r.bloom_m) / static_cast<double>(n);
  r.cuckoo_bits_per_element = static_cast<double>(cuckoo.table_bits()) / static_cast<double>(n);
  r.bloom_fpr = static_cast<double>(bloom_hits) / static_cast<double>(probes);
  r.cuckoo_fpr = static_cast<double>(cuckoo_hits) / static_cast<double>(probes);
  return r;
}

}  // namespace cryptacc::filters
