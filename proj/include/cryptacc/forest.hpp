#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cryptacc/document.hpp"
#include "cryptacc/element.hpp"
#include "cryptacc/merkle.hpp"

namespace cryptacc::forest {

struct ForestRoot {
  std::uint64_t size;  // power of two
  Digest root;

  bool operator==(const ForestRoot&) const = default;
};

// Immutable accumulator value: n plus roots in strictly decreasing size.
struct ForestSnapshot {
  std::uint64_t n = 0;
  std::vector<ForestRoot> roots;

  Document encode() const;
  static ForestSnapshot decode(const Document& doc);
  bool operator==(const ForestSnapshot&) const = default;
};

// Two equal-size adjacent trees combined into one. The left tree covers
// global indices [start, start + half), the right one [start + half, start + 2*half).
struct MergeEvent {
  std::uint64_t epoch;
  std::uint64_t start;
  std::uint64_t half;
  Digest left;
  Digest right;
  Digest merged;

  Document encode() const;
  static MergeEvent decode(const Document& doc);
};

struct ForestWitness {
  std::uint64_t index = 0;               // global insertion index
  std::vector<merkle::Sibling> path;     // leaf toward the root of its current tree
  std::uint64_t update_count = 0;        // refreshes that changed the path
  std::uint64_t epoch = 0;

  Document encode() const;
  static ForestWitness decode(const Document& doc);
  bool operator==(const ForestWitness&) const = default;
};

// Asynchronous accumulator: a set of perfect Merkle trees that merge like
// the carries of a binary counter. A witness changes only when its own
// tree merges, and it keeps verifying against any older snapshot taken
// after its element was added.
class MerkleForest {
 public:
  MerkleForest() = default;
  explicit MerkleForest(std::span<const Element> elements);

  // Returns the merges triggered by the insertion, oldest first.
  std::vector<MergeEvent> add(const Element& e);
  // Rebuilds from the surviving member log; every witness must be reissued.
  void remove(const Element& e);

  ForestSnapshot snapshot() const;
  ForestWitness witness(std::uint64_t index) const;
  std::uint64_t index_of(const Element& e) const;  // throws not_a_member

  std::uint64_t size() const noexcept { return leaves_.size(); }
  std::uint64_t epoch() const noexcept { return epoch_; }
  std::size_t root_count() const noexcept { return trees_.size(); }
  const std::vector<Element>& members() const noexcept { return members_; }

 private:
  struct Tree {
    std::uint64_t start;
    std::uint64_t size;
    Digest root;
  };

  std::vector<Element> members_;
  std::vector<Digest> leaves_;
  std::vector<Tree> trees_;
  std::uint64_t epoch_ = 0;
};

// Applies the merges of one add in order and counts one update if the
// path grew. Events older than the witness raise stale_event.
ForestWitness refresh(const ForestWitness& w, const MergeEvent& event);
ForestWitness refresh(const ForestWitness& w, const std::vector<MergeEvent>& events);

// True iff the element's leaf folds to the snapshot root covering w.index.
bool verify(const ForestSnapshot& snapshot, const Element& e, const ForestWitness& w);

}  // namespace cryptacc::forest
