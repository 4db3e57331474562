#include <algorithm>

#include "../schemes.hpp"
#include "cryptacc/merkle.hpp"

namespace cryptacc::detail {

namespace {

using merkle::MerkleProof;
using merkle::MerkleTree;

Digest digest_from_hex(std::string_view hex) {
  Bytes raw = from_hex(hex);
  if (raw.size() != 32) throw AccumulatorError(ErrorCode::parse_error, "expected a 32-byte hash");
  Digest d{};
  std::copy(raw.begin(), raw.end(), d.begin());
  return d;
}

AccumulatorValue root_value(const std::string& scheme, const MerkleTree& tree) {
  AccumulatorValue z{scheme, Document{}};
  z.fields.set("root", to_hex(tree.root()));
  z.fields.set_u64("n", tree.size());
  return z;
}

Witness proof_witness(const std::string& scheme, const Element& y, std::uint64_t epoch, const MerkleProof& p) {
  Witness w{scheme, WitnessKind::membership, y, epoch, Document{}};
  w.payload.set_u64("leaf_index", p.leaf_index);
  w.payload.set("siblings", p.encode().get("siblings"));
  return w;
}

class MerkleScheme final : public Scheme {
 public:
  const SchemeDescriptor& descriptor() const override {
    static const SchemeDescriptor d{"merkle", false, Dynamism::dynamic, ProofKind::positive, true,
                                    UpdateModel::synchronous};
    return d;
  }

  SchemeKey gen(const SchemeParams& params, std::optional<std::uint64_t>) const override {
    SchemeKey key{name(), Document{}, std::nullopt};
    key.pub.set("hash", "sha256");
    key.pub.set_u64("threshold", params.threshold);
    return key;
  }

  std::size_t value_bytes(const SchemeKey&, const AccumulatorValue&) const override { return 32; }

  std::size_t witness_bytes(const SchemeKey&, const Witness& w) const override {
    return MerkleProof::decode(w.payload).byte_size();
  }

  std::size_t manager_bytes(const SchemeKey&, const AccumulatorState& state) const override {
    std::size_t total = 0;
    for (const auto& e : state.aux.members) total += e.size() + 2 * 32;
    return total;
  }

 protected:
  AccumulatorState do_eval(const SchemeKey&, std::span<const Element> set) const override {
    // Eval takes a set, so leaves go in byte order; later adds append.
    std::vector<Element> sorted(set.begin(), set.end());
    std::sort(sorted.begin(), sorted.end());
    MerkleTree tree(sorted);
    AccumulatorState state{root_value(name(), tree), AuxInfo{}};
    state.aux.members = std::move(sorted);
    return state;
  }

  std::optional<Witness> do_wit(const SchemeKey&, const Element& y, const AuxInfo& aux,
                                const AccumulatorValue&) const override {
    auto it = std::find(aux.members.begin(), aux.members.end(), y);
    if (it == aux.members.end()) return std::nullopt;
    MerkleTree tree(aux.members);
    return proof_witness(name(), y, aux.epoch, tree.prove(static_cast<std::size_t>(it - aux.members.begin())));
  }

  bool do_ver(const SchemeKey&, const AccumulatorValue& z, const Element& y, const Witness& w) const override {
    if (w.kind != WitnessKind::membership) return false;
    return merkle::verify(digest_from_hex(z.fields.get("root")), y, MerkleProof::decode(w.payload));
  }

  AddResult do_add(const SchemeKey&, AccumulatorState& state, const Element& y) const override {
    state.aux.members.push_back(y);
    MerkleTree tree(state.aux.members);
    state.value = root_value(name(), tree);
    Broadcast b = make_broadcast(state, "add", leaf_payload(tree));
    return AddResult{proof_witness(name(), y, state.aux.epoch, tree.prove(tree.size() - 1)), {b}};
  }

  std::vector<Broadcast> do_remove(const SchemeKey&, AccumulatorState& state, const Element& y) const override {
    auto& m = state.aux.members;
    m.erase(std::find(m.begin(), m.end(), y));
    MerkleTree tree(m);
    state.value = root_value(name(), tree);
    return {make_broadcast(state, "delete", leaf_payload(tree))};
  }

  // Holders re-derive their path from the broadcast leaf list.
  WitnessUpdate do_apply(const SchemeKey&, const Witness& w, const Broadcast& b) const override {
    std::vector<Digest> leaves;
    for (const auto& h : b.payload.get_list("leaves")) leaves.push_back(digest_from_hex(h));
    MerkleTree tree = MerkleTree::from_leaf_hashes(std::move(leaves));
    std::size_t idx = tree.find(merkle::hash_leaf(w.element.view()));
    if (idx == tree.size()) throw AccumulatorError(ErrorCode::not_a_member, "witness subject is no longer a leaf");
    Witness updated = proof_witness(name(), w.element, w.epoch, tree.prove(idx));
    bool changed = updated.payload != w.payload;
    return WitnessUpdate{std::move(updated), changed};
  }

 private:
  static Document leaf_payload(const MerkleTree& tree) {
    Document p;
    p.set("root", to_hex(tree.root()));
    std::vector<std::string> hexes;
    for (const auto& l : tree.leaves()) hexes.push_back(to_hex(l));
    p.set_list("leaves", hexes);
    return p;
  }
};

}  // namespace

std::unique_ptr<Scheme> make_merkle_scheme() { return std::make_unique<MerkleScheme>(); }

}  // namespace cryptacc::detail
