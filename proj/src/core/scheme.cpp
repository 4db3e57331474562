#include "cryptacc/scheme.hpp"

#include <algorithm>
#include <set>

namespace cryptacc {

std::string_view to_string(Dynamism d) {
  switch (d) {
    case Dynamism::static_set: return "static";
    case Dynamism::additive: return "additive";
    case Dynamism::subtractive: return "subtractive";
    case Dynamism::dynamic: return "dynamic";
  }
  return "static";
}

std::string_view to_string(ProofKind p) {
  switch (p) {
    case ProofKind::positive: return "positive";
    case ProofKind::negative: return "negative";
    case ProofKind::universal: return "universal";
  }
  return "positive";
}

std::string_view to_string(UpdateModel u) {
  switch (u) {
    case UpdateModel::synchronous: return "synchronous";
    case UpdateModel::partially_asynchronous: return "partially-asynchronous";
    case UpdateModel::asynchronous: return "asynchronous";
  }
  return "synchronous";
}

// ---------------------------------------------------------------------------
// Scheme: argument checks around the per-scheme hooks.

void Scheme::check_key(const SchemeKey& key) const {
  if (key.scheme != name())
    throw AccumulatorError(ErrorCode::key_mismatch, "key for '" + key.scheme + "' used with '" + name() + "'");
}

void Scheme::unsupported(std::string_view op) const {
  throw AccumulatorError(ErrorCode::unsupported_operation,
                         std::string(op) + " is not supported by scheme '" + name() + "'");
}

Broadcast Scheme::make_broadcast(AccumulatorState& state, std::string type, Document payload) const {
  ++state.aux.epoch;
  return Broadcast{name(), std::move(type), state.aux.epoch, std::move(payload)};
}

AccumulatorState Scheme::eval(const SchemeKey& key, std::span<const Element> set) const {
  check_key(key);
  std::uint64_t threshold = key.pub.has("threshold") ? key.pub.get_u64("threshold") : SchemeParams::kUnbounded;
  // Symmetric filters may overfill; callers flag it instead.
  if (threshold != SchemeParams::kUnbounded && set.size() > threshold && !descriptor().symmetric)
    throw AccumulatorError(ErrorCode::capacity_exceeded,
                           std::to_string(set.size()) + " elements exceed threshold " + std::to_string(threshold));
  std::set<Element> seen;
  for (const auto& e : set)
    if (!seen.insert(e).second) throw AccumulatorError(ErrorCode::duplicate_element, e.hex());
  return do_eval(key, set);
}

std::optional<Witness> Scheme::wit(const SchemeKey& key, const Element& y, const AuxInfo& aux,
                                   const AccumulatorValue& z) const {
  check_key(key);
  if (z.scheme != name()) throw AccumulatorError(ErrorCode::key_mismatch, "accumulator value from another scheme");
  return do_wit(key, y, aux, z);
}

std::optional<Witness> Scheme::nonmem_wit(const SchemeKey& key, const Element& y, const AuxInfo& aux,
                                          const AccumulatorValue& z) const {
  check_key(key);
  if (descriptor().proofs == ProofKind::positive) unsupported("non-membership witness");
  if (z.scheme != name()) throw AccumulatorError(ErrorCode::key_mismatch, "accumulator value from another scheme");
  return do_nonmem_wit(key, y, aux, z);
}

std::optional<Witness> Scheme::do_nonmem_wit(const SchemeKey&, const Element&, const AuxInfo&,
                                             const AccumulatorValue&) const {
  unsupported("non-membership witness");
}

bool Scheme::ver(const SchemeKey& key, const AccumulatorValue& z, const Element& y,
                 const Witness& w) const noexcept {
  try {
    if (key.scheme != name() || z.scheme != name() || w.scheme != name()) return false;
    if (w.element != y) return false;
    if (w.kind == WitnessKind::non_membership && descriptor().proofs == ProofKind::positive) return false;
    return do_ver(key, z, y, w);
  } catch (...) {
    return false;
  }
}

AddResult Scheme::add(const SchemeKey& key, AccumulatorState& state, const Element& y) const {
  check_key(key);
  if (!descriptor().can_add()) unsupported("add");
  if (std::find(state.aux.members.begin(), state.aux.members.end(), y) != state.aux.members.end())
    throw AccumulatorError(ErrorCode::duplicate_element, y.hex());
  std::uint64_t threshold = key.pub.has("threshold") ? key.pub.get_u64("threshold") : SchemeParams::kUnbounded;
  if (threshold != SchemeParams::kUnbounded && state.aux.members.size() >= threshold &&
      !descriptor().symmetric)
    throw AccumulatorError(ErrorCode::capacity_exceeded, "accumulator is at its threshold");
  return do_add(key, state, y);
}

AddResult Scheme::do_add(const SchemeKey&, AccumulatorState&, const Element&) const { unsupported("add"); }

std::vector<Broadcast> Scheme::remove(const SchemeKey& key, AccumulatorState& state, const Element& y) const {
  check_key(key);
  if (!descriptor().can_delete()) unsupported("delete");
  if (std::find(state.aux.members.begin(), state.aux.members.end(), y) == state.aux.members.end())
    throw AccumulatorError(ErrorCode::not_a_member, y.hex());
  return do_remove(key, state, y);
}

std::vector<Broadcast> Scheme::do_remove(const SchemeKey&, AccumulatorState&, const Element&) const {
  unsupported("delete");
}

WitnessUpdate Scheme::apply(const SchemeKey& key, const Witness& w, const Broadcast& b) const {
  check_key(key);
  if (w.scheme != name() || b.scheme != name())
    throw AccumulatorError(ErrorCode::key_mismatch, "witness or broadcast from another scheme");
  if (b.epoch <= w.epoch)
    throw AccumulatorError(ErrorCode::stale_event, "broadcast epoch " + std::to_string(b.epoch) +
                                                       " already applied (witness epoch " + std::to_string(w.epoch) + ")");
  if (b.epoch != w.epoch + 1)
    throw AccumulatorError(ErrorCode::stale_event, "broadcast epoch " + std::to_string(b.epoch) +
                                                       " skips updates after witness epoch " + std::to_string(w.epoch));
  WitnessUpdate out = do_apply(key, w, b);
  out.witness.epoch = b.epoch;
  return out;
}

WitnessUpdate Scheme::do_apply(const SchemeKey&, const Witness& w, const Broadcast&) const {
  return WitnessUpdate{w, false};
}

// ---------------------------------------------------------------------------

AccumulatorState eval_hiding(const Scheme& scheme, const SchemeKey& key, std::span<const Element> set,
                             std::mt19937_64& rng) {
  Bytes hidden(32);
  for (auto& b : hidden) b = static_cast<std::uint8_t>(rng());
  std::vector<Element> extended(set.begin(), set.end());
  extended.emplace_back(hidden);
  AccumulatorState state = scheme.eval(key, extended);
  state.aux.extra.set("hidden", to_hex(hidden));
  return state;
}

// ---------------------------------------------------------------------------
// Canonical encodings. Field order here is the on-disk order.

namespace {

std::vector<std::string> hex_list(const std::vector<Element>& elements) {
  std::vector<std::string> out;
  out.reserve(elements.size());
  for (const auto& e : elements) out.push_back(e.hex());
  return out;
}

std::vector<Element> element_list(const std::vector<std::string>& items) {
  std::vector<Element> out;
  out.reserve(items.size());
  for (const auto& h : items) out.push_back(Element::from_hex(h));
  return out;
}

void expect_kind(const Document& doc, std::string_view kind) {
  if (doc.get("kind") != kind)
    throw AccumulatorError(ErrorCode::parse_error, "expected a '" + std::string(kind) + "' document, got '" +
                                                       doc.get("kind") + "'");
}

template <typename Enum, std::size_t N>
Enum parse_enum(const std::string& text, const Enum (&options)[N]) {
  for (Enum e : options)
    if (to_string(e) == text) return e;
  throw AccumulatorError(ErrorCode::parse_error, "unknown enumerator '" + text + "'");
}

}  // namespace

Document encode(const SchemeKey& key) {
  Document doc("key");
  doc.set("scheme", key.scheme);
  doc.embed("pub", key.pub);
  doc.set("trapdoor", key.trapdoor ? "present" : "absent");
  if (key.trapdoor) doc.embed("secret", *key.trapdoor);
  return doc;
}

SchemeKey decode_key(const Document& doc) {
  expect_kind(doc, "key");
  SchemeKey key{doc.get("scheme"), doc.extract("pub"), std::nullopt};
  const auto& td = doc.get("trapdoor");
  if (td == "present") {
    key.trapdoor = doc.extract("secret");
  } else if (td != "absent") {
    throw AccumulatorError(ErrorCode::parse_error, "trapdoor must be present|absent");
  }
  return key;
}

Document encode(const AccumulatorValue& z) {
  Document doc("value");
  doc.set("scheme", z.scheme);
  doc.embed("v", z.fields);
  return doc;
}

AccumulatorValue decode_value(const Document& doc) {
  expect_kind(doc, "value");
  return AccumulatorValue{doc.get("scheme"), doc.extract("v")};
}

Document encode(const AuxInfo& aux) {
  Document doc("aux");
  doc.set_u64("epoch", aux.epoch);
  doc.set_list("members", hex_list(aux.members));
  doc.embed("x", aux.extra);
  return doc;
}

AuxInfo decode_aux(const Document& doc) {
  expect_kind(doc, "aux");
  return AuxInfo{element_list(doc.get_list("members")), doc.extract("x"), doc.get_u64("epoch")};
}

Document encode(const AccumulatorState& state) {
  Document doc("accstate");
  doc.set("scheme", state.value.scheme);
  doc.set_u64("epoch", state.aux.epoch);
  doc.embed("v", state.value.fields);
  doc.set_list("members", hex_list(state.aux.members));
  doc.embed("x", state.aux.extra);
  return doc;
}

AccumulatorState decode_state(const Document& doc) {
  expect_kind(doc, "accstate");
  AccumulatorState state;
  state.value = AccumulatorValue{doc.get("scheme"), doc.extract("v")};
  state.aux = AuxInfo{element_list(doc.get_list("members")), doc.extract("x"), doc.get_u64("epoch")};
  return state;
}

Document encode(const Witness& w) {
  Document doc("witness");
  doc.set("scheme", w.scheme);
  doc.set("type", w.kind == WitnessKind::membership ? "membership" : "non-membership");
  doc.set("element", w.element.hex());
  doc.set_u64("epoch", w.epoch);
  doc.embed("w", w.payload);
  return doc;
}

Witness decode_witness(const Document& doc) {
  expect_kind(doc, "witness");
  const auto& type = doc.get("type");
  WitnessKind kind;
  if (type == "membership") {
    kind = WitnessKind::membership;
  } else if (type == "non-membership") {
    kind = WitnessKind::non_membership;
  } else {
    throw AccumulatorError(ErrorCode::parse_error, "unknown witness type '" + type + "'");
  }
  return Witness{doc.get("scheme"), kind, Element::from_hex(doc.get("element")), doc.get_u64("epoch"),
                 doc.extract("w")};
}

Document encode(const Broadcast& b) {
  Document doc("broadcast");
  doc.set("scheme", b.scheme);
  doc.set("type", b.type);
  doc.set_u64("epoch", b.epoch);
  doc.embed("p", b.payload);
  return doc;
}

Broadcast decode_broadcast(const Document& doc) {
  expect_kind(doc, "broadcast");
  return Broadcast{doc.get("scheme"), doc.get("type"), doc.get_u64("epoch"), doc.extract("p")};
}

Document encode(const SchemeDescriptor& d) {
  Document doc("descriptor");
  doc.set("name", d.name);
  doc.set("symmetric", d.symmetric ? "true" : "false");
  doc.set("dynamic", to_string(d.dynamic));
  doc.set("proofs", to_string(d.proofs));
  doc.set("strong", d.strong ? "true" : "false");
  doc.set("update_model", to_string(d.update_model));
  return doc;
}

SchemeDescriptor decode_descriptor(const Document& doc) {
  expect_kind(doc, "descriptor");
  static constexpr Dynamism kDyn[] = {Dynamism::static_set, Dynamism::additive, Dynamism::subtractive,
                                      Dynamism::dynamic};
  static constexpr ProofKind kProofs[] = {ProofKind::positive, ProofKind::negative, ProofKind::universal};
  static constexpr UpdateModel kModels[] = {UpdateModel::synchronous, UpdateModel::partially_asynchronous,
                                            UpdateModel::asynchronous};
  auto flag = [&](std::string_view key) {
    const auto& v = doc.get(key);
    if (v != "true" && v != "false") throw AccumulatorError(ErrorCode::parse_error, "boolean expected");
    return v == "true";
  };
  SchemeDescriptor d;
  d.name = doc.get("name");
  d.symmetric = flag("symmetric");
  d.dynamic = parse_enum(doc.get("dynamic"), kDyn);
  d.proofs = parse_enum(doc.get("proofs"), kProofs);
  d.strong = flag("strong");
  d.update_model = parse_enum(doc.get("update_model"), kModels);
  return d;
}

}  // namespace cryptacc
