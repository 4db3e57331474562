#include <algorithm>
#include <bit>

#include "../schemes.hpp"
#include "cryptacc/forest.hpp"

namespace cryptacc::detail {

namespace {

using forest::ForestSnapshot;
using forest::ForestWitness;
using forest::MergeEvent;
using forest::MerkleForest;

Digest digest_from_hex(std::string_view hex) {
  Bytes raw = from_hex(hex);
  if (raw.size() != 32) throw AccumulatorError(ErrorCode::parse_error, "expected a 32-byte hash");
  Digest d{};
  std::copy(raw.begin(), raw.end(), d.begin());
  return d;
}

AccumulatorValue snapshot_value(const std::string& scheme, const MerkleForest& f) {
  Document doc = f.snapshot().encode();
  return AccumulatorValue{scheme, doc};
}

Document witness_payload(const ForestWitness& fw) {
  Document full = fw.encode();
  Document p;
  p.set("index", full.get("index"));
  p.set("path", full.get("path"));
  p.set("update_count", full.get("update_count"));
  return p;
}

ForestWitness forest_witness(const Witness& w) {
  Document doc = w.payload;
  doc.set_u64("epoch", w.epoch);
  return ForestWitness::decode(doc);
}

// Path for `index` when the forest holds exactly these leaves: trees follow
// the binary decomposition of n, largest first.
ForestWitness witness_from_leaves(const std::vector<Digest>& leaves, std::uint64_t index) {
  std::uint64_t start = 0;
  std::uint64_t remaining = leaves.size();
  while (remaining) {
    std::uint64_t size = std::bit_floor(remaining);
    if (index < start + size) {
      auto first = leaves.begin() + static_cast<std::ptrdiff_t>(start);
      auto tree = merkle::MerkleTree::from_leaf_hashes(
          std::vector<Digest>(first, first + static_cast<std::ptrdiff_t>(size)));
      ForestWitness w;
      w.index = index;
      w.path = tree.prove(index - start).siblings;
      return w;
    }
    start += size;
    remaining -= size;
  }
  throw AccumulatorError(ErrorCode::index_out_of_range, std::to_string(index));
}

class AsyncScheme final : public Scheme {
 public:
  const SchemeDescriptor& descriptor() const override {
    static const SchemeDescriptor d{"async", false, Dynamism::dynamic, ProofKind::positive, true,
                                    UpdateModel::asynchronous};
    return d;
  }

  SchemeKey gen(const SchemeParams& params, std::optional<std::uint64_t>) const override {
    SchemeKey key{name(), Document{}, std::nullopt};
    key.pub.set("hash", "sha256");
    key.pub.set_u64("threshold", params.threshold);
    return key;
  }

  std::size_t value_bytes(const SchemeKey&, const AccumulatorValue& z) const override {
    return 8 + 40 * ForestSnapshot::decode(z.fields).roots.size();
  }

  std::size_t witness_bytes(const SchemeKey&, const Witness& w) const override {
    return 8 + 33 * forest_witness(w).path.size();
  }

  std::size_t manager_bytes(const SchemeKey&, const AccumulatorState& state) const override {
    std::size_t total = 0;
    for (const auto& e : state.aux.members) total += e.size() + 32;
    return total;
  }

 protected:
  AccumulatorState do_eval(const SchemeKey&, std::span<const Element> set) const override {
    std::vector<Element> sorted(set.begin(), set.end());
    std::sort(sorted.begin(), sorted.end());
    MerkleForest f(sorted);
    AccumulatorState state{snapshot_value(name(), f), AuxInfo{}};
    state.aux.members = std::move(sorted);
    return state;
  }

  std::optional<Witness> do_wit(const SchemeKey&, const Element& y, const AuxInfo& aux,
                                const AccumulatorValue&) const override {
    auto it = std::find(aux.members.begin(), aux.members.end(), y);
    if (it == aux.members.end()) return std::nullopt;
    MerkleForest f(aux.members);
    ForestWitness fw = f.witness(static_cast<std::uint64_t>(it - aux.members.begin()));
    return Witness{name(), WitnessKind::membership, y, aux.epoch, witness_payload(fw)};
  }

  bool do_ver(const SchemeKey&, const AccumulatorValue& z, const Element& y, const Witness& w) const override {
    if (w.kind != WitnessKind::membership) return false;
    return forest::verify(ForestSnapshot::decode(z.fields), y, forest_witness(w));
  }

  AddResult do_add(const SchemeKey&, AccumulatorState& state, const Element& y) const override {
    MerkleForest f(state.aux.members);
    std::vector<MergeEvent> merges = f.add(y);
    state.aux.members.push_back(y);
    state.value = snapshot_value(name(), f);
    // All merges of one add travel together, so a holder refreshes once.
    std::vector<Broadcast> out;
    if (!merges.empty()) {
      Document payload;
      payload.set_u64("merges", merges.size());
      for (std::size_t i = 0; i < merges.size(); ++i) {
        Document ev = merges[i].encode();
        Document stripped;
        for (const auto& [k, v] : ev.fields())
          if (k != "kind" && k != "epoch") stripped.set(k, v);
        payload.embed("m" + std::to_string(i), stripped);
      }
      out.push_back(make_broadcast(state, "merge", payload));
    }
    ForestWitness fw = f.witness(f.size() - 1);
    return AddResult{Witness{name(), WitnessKind::membership, y, state.aux.epoch, witness_payload(fw)}, out};
  }

  std::vector<Broadcast> do_remove(const SchemeKey&, AccumulatorState& state, const Element& y) const override {
    MerkleForest f(state.aux.members);
    f.remove(y);
    state.aux.members = f.members();
    state.value = snapshot_value(name(), f);
    Document payload;
    std::vector<std::string> leaves;
    for (const auto& e : state.aux.members) leaves.push_back(to_hex(merkle::hash_leaf(e.view())));
    payload.set_list("leaves", leaves);
    return {make_broadcast(state, "rebuild", payload)};
  }

  WitnessUpdate do_apply(const SchemeKey&, const Witness& w, const Broadcast& b) const override {
    if (b.type == "merge") {
      // Merge epochs inside one broadcast are local: 1..count on top of a
      // witness rebased to 0. The broadcast epoch itself was already checked.
      std::uint64_t count = b.payload.get_u64("merges");
      if (count == 0 || count > 64) throw AccumulatorError(ErrorCode::parse_error, "bad merge count");
      std::vector<MergeEvent> events;
      for (std::uint64_t i = 0; i < count; ++i) {
        Document doc = b.payload.extract("m" + std::to_string(i));
        doc.set_u64("epoch", i + 1);
        events.push_back(MergeEvent::decode(doc));
      }
      ForestWitness before = forest_witness(w);
      before.epoch = 0;
      ForestWitness after = forest::refresh(before, events);
      Witness out = w;
      out.payload = witness_payload(after);
      return WitnessUpdate{out, after.update_count != before.update_count};
    }
    if (b.type != "rebuild") throw AccumulatorError(ErrorCode::parse_error, "unknown broadcast type " + b.type);
    std::vector<Digest> leaves;
    for (const auto& h : b.payload.get_list("leaves")) leaves.push_back(digest_from_hex(h));
    Digest own = merkle::hash_leaf(w.element.view());
    auto it = std::find(leaves.begin(), leaves.end(), own);
    if (it == leaves.end()) throw AccumulatorError(ErrorCode::not_a_member, "witness subject was deleted");
    ForestWitness fresh = witness_from_leaves(leaves, static_cast<std::uint64_t>(it - leaves.begin()));
    Witness out = w;
    out.payload = witness_payload(fresh);
    return WitnessUpdate{out, true};
  }
};

}  // namespace

std::unique_ptr<Scheme> make_async_scheme() { return std::make_unique<AsyncScheme>(); }

}  // namespace cryptacc::detail
