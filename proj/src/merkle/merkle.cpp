#include "cryptacc/merkle.hpp"

#include <algorithm>
#include <array>

#include "cryptacc/error.hpp"

namespace cryptacc::merkle {

namespace {

constexpr std::array<std::uint8_t, 1> kLeafPrefix{0x00};
constexpr std::array<std::uint8_t, 1> kNodePrefix{0x01};

}  // namespace

Digest hash_leaf(std::span<const std::uint8_t> element) { return sha256({kLeafPrefix, element}); }

Digest hash_node(const Digest& left, const Digest& right) { return sha256({kNodePrefix, left, right}); }

Digest empty_root() { return sha256(kLeafPrefix); }

Digest fold(const Digest& leaf, std::span<const Sibling> siblings) {
  Digest acc = leaf;
  for (const auto& s : siblings) acc = s.side == Side::left ? hash_node(s.hash, acc) : hash_node(acc, s.hash);
  return acc;
}

bool verify(const Digest& root, const Element& element, const MerkleProof& proof) {
  return fold(hash_leaf(element.view()), proof.siblings) == root;
}

Document MerkleProof::encode() const {
  Document doc("merkle-proof");
  doc.set_u64("leaf_index", leaf_index);
  std::vector<std::string> items;
  items.reserve(siblings.size());
  for (const auto& s : siblings) items.push_back((s.side == Side::left ? "0" : "1") + to_hex(s.hash));
  doc.set_list("siblings", items);
  return doc;
}

MerkleProof MerkleProof::decode(const Document& doc) {
  MerkleProof p;
  p.leaf_index = doc.get_u64("leaf_index");
  for (const auto& item : doc.get_list("siblings")) {
    if (item.size() != 65 || (item[0] != '0' && item[0] != '1'))
      throw AccumulatorError(ErrorCode::parse_error, "malformed sibling entry");
    Bytes h = from_hex(std::string_view(item).substr(1));
    Sibling s{};
    std::copy(h.begin(), h.end(), s.hash.begin());
    s.side = item[0] == '0' ? Side::left : Side::right;
    p.siblings.push_back(s);
  }
  return p;
}

// ---------------------------------------------------------------------------

MerkleTree::MerkleTree(std::span<const Element> elements) {
  std::vector<Digest> leaves;
  leaves.reserve(elements.size());
  for (const auto& e : elements) leaves.push_back(hash_leaf(e.view()));
  *this = from_leaf_hashes(std::move(leaves));
}

MerkleTree MerkleTree::from_leaf_hashes(std::vector<Digest> leaves) {
  MerkleTree t;
  if (leaves.empty()) return t;
  t.levels_.push_back(std::move(leaves));
  t.rebuild();
  return t;
}

void MerkleTree::rebuild() {
  levels_.resize(1);
  while (levels_.back().size() > 1) {
    const auto& below = levels_.back();
    std::vector<Digest> up;
    up.reserve((below.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < below.size(); i += 2) up.push_back(hash_node(below[i], below[i + 1]));
    if (below.size() % 2) up.push_back(below.back());
    levels_.push_back(std::move(up));
  }
}

Digest MerkleTree::root() const { return levels_.empty() ? empty_root() : levels_.back().front(); }

const std::vector<Digest>& MerkleTree::leaves() const {
  static const std::vector<Digest> kNone;
  return levels_.empty() ? kNone : levels_.front();
}

void MerkleTree::add(const Element& e) { add_leaf_hash(hash_leaf(e.view())); }

void MerkleTree::add_leaf_hash(const Digest& leaf) {
  if (levels_.empty()) {
    levels_.push_back({leaf});
    return;
  }
  levels_[0].push_back(leaf);
  for (std::size_t lvl = 0; levels_[lvl].size() > 1; ++lvl) {
    const auto& below = levels_[lvl];
    std::size_t last = below.size() - 1;
    Digest parent = last % 2 ? hash_node(below[last - 1], below[last]) : below[last];
    std::size_t slot = last / 2;
    if (lvl + 1 == levels_.size()) levels_.emplace_back();
    auto& up = levels_[lvl + 1];
    if (slot < up.size()) {
      up[slot] = parent;
    } else {
      up.push_back(parent);
    }
  }
}

void MerkleTree::remove(std::size_t index) {
  if (index >= size()) throw AccumulatorError(ErrorCode::index_out_of_range, "leaf " + std::to_string(index));
  levels_[0].erase(levels_[0].begin() + static_cast<std::ptrdiff_t>(index));
  if (levels_[0].empty()) {
    levels_.clear();
    return;
  }
  rebuild();
}

MerkleProof MerkleTree::prove(std::size_t index) const {
  if (index >= size()) throw AccumulatorError(ErrorCode::index_out_of_range, "leaf " + std::to_string(index));
  MerkleProof proof;
  proof.leaf_index = index;
  std::size_t pos = index;
  for (std::size_t lvl = 0; lvl + 1 < levels_.size(); ++lvl) {
    const auto& nodes = levels_[lvl];
    if (pos % 2) {
      proof.siblings.push_back({nodes[pos - 1], Side::left});
    } else if (pos + 1 < nodes.size()) {
      proof.siblings.push_back({nodes[pos + 1], Side::right});
    }
    pos /= 2;
  }
  return proof;
}

std::size_t MerkleTree::find(const Digest& leaf) const {
  const auto& l = leaves();
  return static_cast<std::size_t>(std::find(l.begin(), l.end(), leaf) - l.begin());
}

}  // namespace cryptacc::merkle
