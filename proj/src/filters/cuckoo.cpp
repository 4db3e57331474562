#include <array>
#include <random>

#include "cryptacc/error.hpp"
#include "cryptacc/filters.hpp"
#include "cryptacc/hash.hpp"

namespace cryptacc::filters {

namespace {

std::uint64_t fmix64(std::uint64_t k) {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

std::uint64_t read_le(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

CuckooFilter::CuckooFilter(Config config) : config_(config) {
  if (config_.bucket_bits == 0 || config_.bucket_bits > 40)
    throw AccumulatorError(ErrorCode::domain_error, "bucket_bits must be in [1, 40]");
  if (config_.fingerprint_bits == 0 || config_.fingerprint_bits > 32)
    throw AccumulatorError(ErrorCode::domain_error, "fingerprint_bits must be in [1, 32]");
  if (config_.slots_per_bucket == 0) throw AccumulatorError(ErrorCode::domain_error, "slots_per_bucket must be >= 1");
  table_.assign(capacity(), 0);
}

CuckooFilter::Hashed CuckooFilter::hash(const Element& e) const {
  std::array<std::uint8_t, 8> seed{};
  for (int i = 0; i < 8; ++i) seed[i] = static_cast<std::uint8_t>(config_.seed >> (8 * i));
  Digest d = sha256({seed, e.view()});
  std::uint64_t index = read_le(d.data(), 8) & (bucket_count() - 1);
  std::uint64_t mask = config_.fingerprint_bits == 32 ? 0xffffffffULL : ((std::uint64_t{1} << config_.fingerprint_bits) - 1);
  auto fp = static_cast<std::uint32_t>(read_le(d.data() + 8, 4) & mask);
  if (fp == 0) fp = 1;
  return Hashed{index, fp};
}

std::uint32_t CuckooFilter::fingerprint(const Element& e) const { return hash(e).fp; }
std::uint64_t CuckooFilter::primary_index(const Element& e) const { return hash(e).index; }

std::uint64_t CuckooFilter::alt_index(std::uint64_t index, std::uint32_t fp) const {
  return (index ^ fmix64(fp)) & (bucket_count() - 1);
}

bool CuckooFilter::place(std::uint64_t bucket, std::uint32_t fp) {
  for (std::uint32_t s = 0; s < config_.slots_per_bucket; ++s) {
    auto& cell = table_[bucket * config_.slots_per_bucket + s];
    if (cell == 0) {
      cell = fp;
      return true;
    }
  }
  return false;
}

bool CuckooFilter::contains_in(std::uint64_t bucket, std::uint32_t fp) const {
  for (std::uint32_t s = 0; s < config_.slots_per_bucket; ++s)
    if (table_[bucket * config_.slots_per_bucket + s] == fp) return true;
  return false;
}

CuckooFilter::InsertResult CuckooFilter::insert(const Element& e) {
  auto [i1, fp] = hash(e);
  std::uint64_t i2 = alt_index(i1, fp);
  if (place(i1, fp) || place(i2, fp)) {
    ++n_;
    return InsertResult::ok;
  }

  struct Swap {
    std::size_t cell;
    std::uint32_t previous;
  };
  std::vector<Swap> log;
  // Eviction choices depend only on filter state, so a reloaded dump
  // behaves exactly like the original.
  std::mt19937_64 rng(fmix64(config_.seed ^ fmix64(n_ + 1) ^ (i1 << 32) ^ fp));
  std::uint64_t bucket = (rng() & 1) ? i2 : i1;
  std::uint32_t carried = fp;
  for (std::uint32_t kick = 0; kick < config_.max_kicks; ++kick) {
    auto s = static_cast<std::uint32_t>(rng() % config_.slots_per_bucket);
    std::size_t cell = bucket * config_.slots_per_bucket + s;
    log.push_back({cell, table_[cell]});
    std::swap(carried, table_[cell]);
    bucket = alt_index(bucket, carried);
    if (place(bucket, carried)) {
      ++n_;
      return InsertResult::ok;
    }
  }
  // Undo the eviction chain so the table is exactly as before.
  for (auto it = log.rbegin(); it != log.rend(); ++it) table_[it->cell] = it->previous;
  return InsertResult::full;
}

bool CuckooFilter::query(const Element& e) const {
  auto [i1, fp] = hash(e);
  return contains_in(i1, fp) || contains_in(alt_index(i1, fp), fp);
}

CuckooFilter::DeleteResult CuckooFilter::remove(const Element& e) {
  auto [i1, fp] = hash(e);
  for (std::uint64_t bucket : {i1, alt_index(i1, fp)}) {
    for (std::uint32_t s = 0; s < config_.slots_per_bucket; ++s) {
      auto& cell = table_[bucket * config_.slots_per_bucket + s];
      if (cell == fp) {
        cell = 0;
        --n_;
        return DeleteResult::ok;
      }
    }
  }
  return DeleteResult::not_found;
}

Document CuckooFilter::dump() const {
  Document doc("cuckoo-filter");
  doc.set_u64("b", config_.bucket_bits);
  doc.set_u64("f", config_.fingerprint_bits);
  doc.set_u64("slots", config_.slots_per_bucket);
  doc.set_u64("max_kicks", config_.max_kicks);
  doc.set_u64("n", n_);
  doc.set_u64("seed", config_.seed);
  Bytes raw;
  raw.reserve(table_.size() * 4);
  for (auto fp : table_)
    for (int i = 0; i < 4; ++i) raw.push_back(static_cast<std::uint8_t>(fp >> (8 * i)));
  doc.set("fingerprints", to_hex(raw));
  return doc;
}

CuckooFilter CuckooFilter::load(const Document& doc) {
  if (doc.get("kind") != "cuckoo-filter") throw AccumulatorError(ErrorCode::parse_error, "not a cuckoo-filter dump");
  Config c;
  c.bucket_bits = static_cast<std::uint32_t>(doc.get_u64("b"));
  c.fingerprint_bits = static_cast<std::uint32_t>(doc.get_u64("f"));
  c.slots_per_bucket = static_cast<std::uint32_t>(doc.get_u64("slots"));
  c.max_kicks = static_cast<std::uint32_t>(doc.get_u64("max_kicks"));
  c.seed = doc.get_u64("seed");
  CuckooFilter f(c);
  f.n_ = doc.get_u64("n");
  Bytes raw = from_hex(doc.get("fingerprints"));
  if (raw.size() != f.table_.size() * 4) throw AccumulatorError(ErrorCode::parse_error, "fingerprint table size mismatch");
  for (std::size_t i = 0; i < f.table_.size(); ++i)
    f.table_[i] = static_cast<std::uint32_t>(read_le(raw.data() + 4 * i, 4));
  return f;
}

}  // namespace cryptacc::filters
