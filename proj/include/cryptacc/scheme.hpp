#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cryptacc/document.hpp"
#include "cryptacc/element.hpp"
#include "cryptacc/error.hpp"

namespace cryptacc {

enum class Dynamism { static_set, additive, subtractive, dynamic };
enum class ProofKind { positive, negative, universal };
enum class UpdateModel { synchronous, partially_asynchronous, asynchronous };

std::string_view to_string(Dynamism d);
std::string_view to_string(ProofKind p);
std::string_view to_string(UpdateModel u);

struct SchemeDescriptor {
  std::string name;
  bool symmetric = false;
  Dynamism dynamic = Dynamism::static_set;
  ProofKind proofs = ProofKind::positive;
  bool strong = false;
  UpdateModel update_model = UpdateModel::synchronous;

  bool can_add() const { return dynamic == Dynamism::additive || dynamic == Dynamism::dynamic; }
  bool can_delete() const { return dynamic == Dynamism::subtractive || dynamic == Dynamism::dynamic; }
};

struct SchemeParams {
  static constexpr std::uint64_t kUnbounded = 0;

  std::uint32_t lambda = 128;
  std::uint64_t threshold = kUnbounded;
};

struct SchemeKey {
  std::string scheme;
  Document pub;
  std::optional<Document> trapdoor;

  bool operator==(const SchemeKey&) const = default;
};

struct AccumulatorValue {
  std::string scheme;
  Document fields;

  bool operator==(const AccumulatorValue&) const = default;
};

struct AuxInfo {
  std::vector<Element> members;
  Document extra;
  std::uint64_t epoch = 0;  // broadcasts emitted so far; stamped onto issued witnesses

  bool operator==(const AuxInfo&) const = default;
};

// Manager-side view of one accumulator instance.
struct AccumulatorState {
  AccumulatorValue value;
  AuxInfo aux;

  bool operator==(const AccumulatorState&) const = default;
};

enum class WitnessKind { membership, non_membership };

struct Witness {
  std::string scheme;
  WitnessKind kind = WitnessKind::membership;
  Element element;
  std::uint64_t epoch = 0;
  Document payload;

  bool operator==(const Witness&) const = default;
};

// One manager-to-holders message.
struct Broadcast {
  std::string scheme;
  std::string type;  // add | delete | merge | rebuild
  std::uint64_t epoch = 0;
  Document payload;

  bool operator==(const Broadcast&) const = default;
};

struct AddResult {
  Witness witness;
  std::vector<Broadcast> broadcasts;
};

struct WitnessUpdate {
  Witness witness;
  bool changed = false;
};

// Scheme-neutral Gen/Eval/Wit/Ver plus the dynamic extensions. Each scheme
// advertises what it supports through descriptor(); unsupported operations
// throw AccumulatorError(unsupported_operation).
class Scheme {
 public:
  virtual ~Scheme() = default;

  virtual const SchemeDescriptor& descriptor() const = 0;
  const std::string& name() const { return descriptor().name; }

  virtual SchemeKey gen(const SchemeParams& params, std::optional<std::uint64_t> seed) const = 0;

  // Rejects duplicates and sets larger than the key's threshold.
  AccumulatorState eval(const SchemeKey& key, std::span<const Element> set) const;

  // nullopt when y is not accumulated.
  std::optional<Witness> wit(const SchemeKey& key, const Element& y, const AuxInfo& aux,
                             const AccumulatorValue& z) const;

  // Non-membership witness, nullopt when y is accumulated; universal and
  // negative schemes only.
  std::optional<Witness> nonmem_wit(const SchemeKey& key, const Element& y, const AuxInfo& aux,
                                    const AccumulatorValue& z) const;

  // Total: malformed input yields false.
  bool ver(const SchemeKey& key, const AccumulatorValue& z, const Element& y,
           const Witness& w) const noexcept;

  AddResult add(const SchemeKey& key, AccumulatorState& state, const Element& y) const;
  std::vector<Broadcast> remove(const SchemeKey& key, AccumulatorState& state, const Element& y) const;

  // Enforces the epoch sequence: b.epoch must be exactly w.epoch + 1.
  WitnessUpdate apply(const SchemeKey& key, const Witness& w, const Broadcast& b) const;

  // Raw (binary) sizes used by the simulator and benchmarks.
  virtual std::size_t value_bytes(const SchemeKey& key, const AccumulatorValue& z) const = 0;
  virtual std::size_t witness_bytes(const SchemeKey& key, const Witness& w) const = 0;
  virtual std::size_t manager_bytes(const SchemeKey& key, const AccumulatorState& state) const = 0;

 protected:
  virtual AccumulatorState do_eval(const SchemeKey& key, std::span<const Element> set) const = 0;
  virtual std::optional<Witness> do_wit(const SchemeKey& key, const Element& y, const AuxInfo& aux,
                                        const AccumulatorValue& z) const = 0;
  virtual std::optional<Witness> do_nonmem_wit(const SchemeKey& key, const Element& y,
                                               const AuxInfo& aux, const AccumulatorValue& z) const;
  virtual bool do_ver(const SchemeKey& key, const AccumulatorValue& z, const Element& y,
                      const Witness& w) const = 0;
  virtual AddResult do_add(const SchemeKey& key, AccumulatorState& state, const Element& y) const;
  virtual std::vector<Broadcast> do_remove(const SchemeKey& key, AccumulatorState& state,
                                           const Element& y) const;
  virtual WitnessUpdate do_apply(const SchemeKey& key, const Witness& w, const Broadcast& b) const;

  void check_key(const SchemeKey& key) const;
  [[noreturn]] void unsupported(std::string_view op) const;
  Broadcast make_broadcast(AccumulatorState& state, std::string type, Document payload) const;
};

// Registered scheme names: bloom, cuckoo, rsa, clrsab, merkle, async.
const Scheme& scheme_by_name(std::string_view name);
std::vector<std::string> scheme_names();

// Eval with one extra random domain element mixed in, hiding the exact set.
// The hidden element is returned in aux.extra["hidden"] as hex.
AccumulatorState eval_hiding(const Scheme& scheme, const SchemeKey& key,
                             std::span<const Element> set, std::mt19937_64& rng);

// Canonical document conversions.
Document encode(const SchemeKey& key);
SchemeKey decode_key(const Document& doc);
Document encode(const AccumulatorValue& z);
AccumulatorValue decode_value(const Document& doc);
Document encode(const AuxInfo& aux);
AuxInfo decode_aux(const Document& doc);
Document encode(const AccumulatorState& state);
AccumulatorState decode_state(const Document& doc);
Document encode(const Witness& w);
Witness decode_witness(const Document& doc);
Document encode(const Broadcast& b);
Broadcast decode_broadcast(const Document& doc);
Document encode(const SchemeDescriptor& d);
SchemeDescriptor decode_descriptor(const Document& doc);

}  // namespace cryptacc
