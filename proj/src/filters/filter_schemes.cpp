#include <algorithm>
#include <cmath>

#include "../schemes.hpp"
#include "cryptacc/filters.hpp"

namespace cryptacc::detail {

namespace {

using filters::BloomFilter;
using filters::CuckooFilter;

constexpr std::uint64_t kDefaultCapacity = 1024;
constexpr double kTargetFpr = 0.01;

std::uint64_t seed_or_zero(std::optional<std::uint64_t> seed) { return seed ? *seed : 0; }

// Symmetric filters verify without witness data; the "witness" only names
// the element so the generic interface stays uniform.
class FilterScheme : public Scheme {
 public:
  explicit FilterScheme(SchemeDescriptor d) : descriptor_(std::move(d)) {}
  const SchemeDescriptor& descriptor() const override { return descriptor_; }

  std::size_t witness_bytes(const SchemeKey&, const Witness&) const override { return 0; }
  std::size_t manager_bytes(const SchemeKey& key, const AccumulatorState& state) const override {
    return value_bytes(key, state.value);
  }

 protected:
  std::optional<Witness> do_wit(const SchemeKey&, const Element& y, const AuxInfo& aux,
                                const AccumulatorValue&) const override {
    if (std::find(aux.members.begin(), aux.members.end(), y) == aux.members.end()) return std::nullopt;
    return Witness{name(), WitnessKind::membership, y, aux.epoch, Document{}};
  }

 private:
  SchemeDescriptor descriptor_;
};

class BloomScheme final : public FilterScheme {
 public:
  BloomScheme()
      : FilterScheme(SchemeDescriptor{"bloom", true, Dynamism::additive, ProofKind::positive, true,
                                      UpdateModel::synchronous}) {}

  SchemeKey gen(const SchemeParams& params, std::optional<std::uint64_t> seed) const override {
    std::uint64_t capacity = params.threshold == SchemeParams::kUnbounded ? kDefaultCapacity : params.threshold;
    double ln2 = std::log(2.0);
    auto m = static_cast<std::uint64_t>(std::ceil(-static_cast<double>(capacity) * std::log(kTargetFpr) / (ln2 * ln2)));
    SchemeKey key{name(), Document{}, std::nullopt};
    key.pub.set_u64("threshold", capacity);
    key.pub.set_u64("m", m);
    key.pub.set_u64("k", filters::optimal_hash_count(static_cast<double>(m) / static_cast<double>(capacity)));
    key.pub.set_u64("seed", seed_or_zero(seed));
    return key;
  }

  std::size_t value_bytes(const SchemeKey& key, const AccumulatorValue&) const override {
    return (key.pub.get_u64("m") + 7) / 8;
  }

 protected:
  static BloomFilter empty_filter(const SchemeKey& key) {
    return BloomFilter(key.pub.get_u64("m"), static_cast<std::uint32_t>(key.pub.get_u64("k")), key.pub.get_u64("seed"));
  }

  AccumulatorState do_eval(const SchemeKey& key, std::span<const Element> set) const override {
    BloomFilter f = empty_filter(key);
    for (const auto& e : set) f.insert(e);
    AccumulatorState state;
    state.value = AccumulatorValue{name(), f.dump()};
    state.aux.members.assign(set.begin(), set.end());
    return state;
  }

  bool do_ver(const SchemeKey&, const AccumulatorValue& z, const Element& y, const Witness&) const override {
    return BloomFilter::load(z.fields).query(y);
  }

  AddResult do_add(const SchemeKey&, AccumulatorState& state, const Element& y) const override {
    BloomFilter f = BloomFilter::load(state.value.fields);
    f.insert(y);
    state.value.fields = f.dump();
    state.aux.members.push_back(y);
    return AddResult{Witness{name(), WitnessKind::membership, y, state.aux.epoch, Document{}}, {}};
  }
};

class CuckooScheme final : public FilterScheme {
 public:
  CuckooScheme()
      : FilterScheme(SchemeDescriptor{"cuckoo", true, Dynamism::dynamic, ProofKind::positive, true,
                                      UpdateModel::synchronous}) {}

  SchemeKey gen(const SchemeParams& params, std::optional<std::uint64_t> seed) const override {
    std::uint64_t capacity = params.threshold == SchemeParams::kUnbounded ? kDefaultCapacity : params.threshold;
    // Smallest power-of-two table that stays under 95% load at capacity.
    // Tiny tables do not reach that load in practice, hence the floor.
    std::uint32_t bits = 6;
    while (static_cast<double>(capacity) > 0.95 * 4.0 * static_cast<double>(std::uint64_t{1} << bits)) ++bits;
    SchemeKey key{name(), Document{}, std::nullopt};
    key.pub.set_u64("threshold", capacity);
    key.pub.set_u64("b", bits);
    key.pub.set_u64("f", 16);
    key.pub.set_u64("seed", seed_or_zero(seed));
    return key;
  }

  std::size_t value_bytes(const SchemeKey& key, const AccumulatorValue&) const override {
    return ((std::uint64_t{1} << key.pub.get_u64("b")) * 4 * key.pub.get_u64("f") + 7) / 8;
  }

 protected:
  static CuckooFilter empty_filter(const SchemeKey& key) {
    CuckooFilter::Config c;
    c.bucket_bits = static_cast<std::uint32_t>(key.pub.get_u64("b"));
    c.fingerprint_bits = static_cast<std::uint32_t>(key.pub.get_u64("f"));
    c.seed = key.pub.get_u64("seed");
    return CuckooFilter(c);
  }

  static void insert_or_throw(CuckooFilter& f, const Element& e) {
    if (f.insert(e) == CuckooFilter::InsertResult::full)
      throw AccumulatorError(ErrorCode::capacity_exceeded, "cuckoo filter is full");
  }

  AccumulatorState do_eval(const SchemeKey& key, std::span<const Element> set) const override {
    CuckooFilter f = empty_filter(key);
    for (const auto& e : set) insert_or_throw(f, e);
    AccumulatorState state;
    state.value = AccumulatorValue{name(), f.dump()};
    state.aux.members.assign(set.begin(), set.end());
    return state;
  }

  bool do_ver(const SchemeKey&, const AccumulatorValue& z, const Element& y, const Witness&) const override {
    return CuckooFilter::load(z.fields).query(y);
  }

  AddResult do_add(const SchemeKey&, AccumulatorState& state, const Element& y) const override {
    CuckooFilter f = CuckooFilter::load(state.value.fields);
    insert_or_throw(f, y);
    state.value.fields = f.dump();
    state.aux.members.push_back(y);
    return AddResult{Witness{name(), WitnessKind::membership, y, state.aux.epoch, Document{}}, {}};
  }

  std::vector<Broadcast> do_remove(const SchemeKey&, AccumulatorState& state, const Element& y) const override {
    CuckooFilter f = CuckooFilter::load(state.value.fields);
    f.remove(y);
    state.value.fields = f.dump();
    state.aux.members.erase(std::find(state.aux.members.begin(), state.aux.members.end(), y));
    return {};
  }
};

}  // namespace

std::unique_ptr<Scheme> make_bloom_scheme() { return std::make_unique<BloomScheme>(); }
std::unique_ptr<Scheme> make_cuckoo_scheme() { return std::make_unique<CuckooScheme>(); }

}  // namespace cryptacc::detail
