#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cryptacc/document.hpp"
#include "cryptacc/element.hpp"
#include "cryptacc/hash.hpp"

namespace cryptacc::merkle {

// Domain-separated node rules shared by the tree and the forest:
//   leaf     = H(0x00 || element)
//   internal = H(0x01 || left || right)
Digest hash_leaf(std::span<const std::uint8_t> element);
Digest hash_node(const Digest& left, const Digest& right);
// Root of the empty tree: H(0x00).
Digest empty_root();

enum class Side : std::uint8_t { left = 0, right = 1 };

struct Sibling {
  Digest hash;
  Side side;  // position of the sibling relative to the running hash

  bool operator==(const Sibling&) const = default;
};

struct MerkleProof {
  std::uint64_t leaf_index = 0;
  std::vector<Sibling> siblings;

  Document encode() const;
  static MerkleProof decode(const Document& doc);
  std::size_t byte_size() const { return 8 + siblings.size() * 33; }

  bool operator==(const MerkleProof&) const = default;
};

// Folds a leaf hash up a sibling path.
Digest fold(const Digest& leaf, std::span<const Sibling> siblings);

bool verify(const Digest& root, const Element& element, const MerkleProof& proof);

// Binary hash tree over an ordered leaf sequence. Leaves pair up level by
// level; an unpaired last node moves up unchanged.
class MerkleTree {
 public:
  MerkleTree() = default;
  explicit MerkleTree(std::span<const Element> elements);
  static MerkleTree from_leaf_hashes(std::vector<Digest> leaves);

  std::size_t size() const noexcept { return levels_.empty() ? 0 : levels_.front().size(); }
  Digest root() const;
  const std::vector<Digest>& leaves() const;

  // O(log n): only the rightmost spine changes.
  void add(const Element& e);
  void add_leaf_hash(const Digest& leaf);
  // O(n): later leaves shift down one index and the tree is rebuilt.
  void remove(std::size_t index);

  MerkleProof prove(std::size_t index) const;

  // Index of the first leaf with this hash, or size() if absent.
  std::size_t find(const Digest& leaf) const;

 private:
  void rebuild();

  // levels_[0] are leaf hashes; levels_.back() holds the single root.
  std::vector<std::vector<Digest>> levels_;
};

}  // namespace cryptacc::merkle
