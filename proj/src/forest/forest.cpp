#include "cryptacc/forest.hpp"

#include <algorithm>
#include <bit>

#include "cryptacc/error.hpp"

namespace cryptacc::forest {

namespace {

Digest digest_from_hex(std::string_view hex) {
  Bytes raw = from_hex(hex);
  if (raw.size() != 32) throw AccumulatorError(ErrorCode::parse_error, "expected a 32-byte hash");
  Digest d{};
  std::copy(raw.begin(), raw.end(), d.begin());
  return d;
}

}  // namespace

Document ForestSnapshot::encode() const {
  Document doc("forest-snapshot");
  doc.set_u64("n", n);
  std::vector<std::string> items;
  for (const auto& r : roots) items.push_back(std::to_string(r.size) + ":" + to_hex(r.root));
  doc.set_list("roots", items);
  return doc;
}

ForestSnapshot ForestSnapshot::decode(const Document& doc) {
  ForestSnapshot s;
  s.n = doc.get_u64("n");
  for (const auto& item : doc.get_list("roots")) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw AccumulatorError(ErrorCode::parse_error, "root entry needs size:hash");
    s.roots.push_back({std::stoull(item.substr(0, colon)), digest_from_hex(item.substr(colon + 1))});
  }
  return s;
}

Document MergeEvent::encode() const {
  Document doc("merge-event");
  doc.set_u64("epoch", epoch);
  doc.set_u64("start", start);
  doc.set_u64("half", half);
  doc.set("left", to_hex(left));
  doc.set("right", to_hex(right));
  doc.set("merged", to_hex(merged));
  return doc;
}

MergeEvent MergeEvent::decode(const Document& doc) {
  return MergeEvent{doc.get_u64("epoch"),           doc.get_u64("start"),
                    doc.get_u64("half"),            digest_from_hex(doc.get("left")),
                    digest_from_hex(doc.get("right")), digest_from_hex(doc.get("merged"))};
}

Document ForestWitness::encode() const {
  merkle::MerkleProof proof{index, path};
  Document doc("forest-witness");
  doc.set_u64("index", index);
  doc.set("path", proof.encode().get("siblings"));
  doc.set_u64("update_count", update_count);
  doc.set_u64("epoch", epoch);
  return doc;
}

ForestWitness ForestWitness::decode(const Document& doc) {
  Document proof_doc;
  proof_doc.set_u64("leaf_index", doc.get_u64("index"));
  proof_doc.set("siblings", doc.get("path"));
  ForestWitness w;
  w.index = doc.get_u64("index");
  w.path = merkle::MerkleProof::decode(proof_doc).siblings;
  w.update_count = doc.get_u64("update_count");
  w.epoch = doc.get_u64("epoch");
  return w;
}

// ---------------------------------------------------------------------------

MerkleForest::MerkleForest(std::span<const Element> elements) {
  for (const auto& e : elements) add(e);
}

std::vector<MergeEvent> MerkleForest::add(const Element& e) {
  if (std::find(members_.begin(), members_.end(), e) != members_.end())
    throw AccumulatorError(ErrorCode::duplicate_element, e.hex());
  members_.push_back(e);
  leaves_.push_back(merkle::hash_leaf(e.view()));
  trees_.push_back({leaves_.size() - 1, 1, leaves_.back()});

  std::vector<MergeEvent> events;
  while (trees_.size() >= 2 && trees_[trees_.size() - 1].size == trees_[trees_.size() - 2].size) {
    Tree right = trees_.back();
    trees_.pop_back();
    Tree& left = trees_.back();
    Digest merged = merkle::hash_node(left.root, right.root);
    events.push_back({++epoch_, left.start, left.size, left.root, right.root, merged});
    left.size *= 2;
    left.root = merged;
  }
  return events;
}

void MerkleForest::remove(const Element& e) {
  auto it = std::find(members_.begin(), members_.end(), e);
  if (it == members_.end()) throw AccumulatorError(ErrorCode::not_a_member, e.hex());
  std::vector<Element> survivors(members_.begin(), it);
  survivors.insert(survivors.end(), it + 1, members_.end());
  std::uint64_t next_epoch = epoch_ + 1;
  *this = MerkleForest(survivors);
  // The rebuild itself is why witnesses are invalidated; it counts as one epoch.
  epoch_ = next_epoch;
}

ForestSnapshot MerkleForest::snapshot() const {
  ForestSnapshot s;
  s.n = leaves_.size();
  for (const auto& t : trees_) s.roots.push_back({t.size, t.root});
  return s;
}

std::uint64_t MerkleForest::index_of(const Element& e) const {
  auto it = std::find(members_.begin(), members_.end(), e);
  if (it == members_.end()) throw AccumulatorError(ErrorCode::not_a_member, e.hex());
  return static_cast<std::uint64_t>(it - members_.begin());
}

ForestWitness MerkleForest::witness(std::uint64_t index) const {
  if (index >= leaves_.size()) throw AccumulatorError(ErrorCode::index_out_of_range, std::to_string(index));
  auto tree = std::find_if(trees_.begin(), trees_.end(),
                           [&](const Tree& t) { return index >= t.start && index < t.start + t.size; });
  auto first = leaves_.begin() + static_cast<std::ptrdiff_t>(tree->start);
  auto sub = merkle::MerkleTree::from_leaf_hashes(std::vector<Digest>(first, first + static_cast<std::ptrdiff_t>(tree->size)));
  ForestWitness w;
  w.index = index;
  w.path = sub.prove(index - tree->start).siblings;
  w.epoch = epoch_;
  return w;
}

namespace {

ForestWitness absorb(const ForestWitness& w, const MergeEvent& event) {
  if (event.epoch <= w.epoch)
    throw AccumulatorError(ErrorCode::stale_event, "merge epoch " + std::to_string(event.epoch) +
                                                       " is not newer than witness epoch " + std::to_string(w.epoch));
  if (event.epoch != w.epoch + 1)
    throw AccumulatorError(ErrorCode::stale_event, "merge epoch " + std::to_string(event.epoch) + " skips events");
  ForestWitness out = w;
  out.epoch = event.epoch;
  if (w.index >= event.start && w.index < event.start + event.half)
    out.path.push_back({event.right, merkle::Side::right});
  else if (w.index >= event.start + event.half && w.index < event.start + 2 * event.half)
    out.path.push_back({event.left, merkle::Side::left});
  return out;
}

}  // namespace

ForestWitness refresh(const ForestWitness& w, const MergeEvent& event) {
  return refresh(w, std::vector<MergeEvent>{event});
}

// One add's merges count as a single update, however far the carry runs.
ForestWitness refresh(const ForestWitness& w, const std::vector<MergeEvent>& events) {
  ForestWitness out = w;
  for (const auto& ev : events) out = absorb(out, ev);
  if (out.path.size() != w.path.size()) ++out.update_count;
  return out;
}

bool verify(const ForestSnapshot& snapshot, const Element& e, const ForestWitness& w) {
  if (w.index >= snapshot.n) return false;
  std::uint64_t start = 0;
  for (const auto& r : snapshot.roots) {
    if (w.index < start + r.size) {
      if (!std::has_single_bit(r.size)) return false;
      auto height = static_cast<std::size_t>(std::countr_zero(r.size));
      if (w.path.size() < height) return false;
      auto prefix = std::span<const merkle::Sibling>(w.path).first(height);
      return merkle::fold(merkle::hash_leaf(e.view()), prefix) == r.root;
    }
    start += r.size;
  }
  return false;
}

}  // namespace cryptacc::forest
