// Generic-interface adapters for the RSA universal and CL-RSA-B accumulators.

#include <algorithm>

#include "../schemes.hpp"
#include "cryptacc/rsa.hpp"

namespace cryptacc::detail {

using rsa::RsaKey;

RsaKey rsa_key_from(const SchemeKey& key) {
  RsaKey k;
  k.lambda = static_cast<std::uint32_t>(key.pub.get_u64("lambda"));
  k.modulus = bigint_from_hex(key.pub.get("modulus"));
  k.generator = bigint_from_hex(key.pub.get("generator"));
  if (key.trapdoor)
    k.trapdoor = rsa::Trapdoor{bigint_from_hex(key.trapdoor->get("p_prime")),
                               bigint_from_hex(key.trapdoor->get("q_prime"))};
  return k;
}

namespace {

std::vector<std::string> prime_list(const AuxInfo& aux) {
  return aux.extra.has("primes") ? aux.extra.get_list("primes") : std::vector<std::string>{};
}

std::ptrdiff_t member_index(const AuxInfo& aux, const Element& y) {
  auto it = std::find(aux.members.begin(), aux.members.end(), y);
  return it == aux.members.end() ? -1 : it - aux.members.begin();
}

BigInt payload_int(const Document& d, std::string_view field) { return bigint_from_hex(d.get(field)); }

// Shared plumbing: key generation, prime representatives, holder-side
// Bezout update after deletion, and size accounting.
class RsaFamilyScheme : public Scheme {
 public:
  explicit RsaFamilyScheme(SchemeDescriptor d) : descriptor_(std::move(d)) {}

  const SchemeDescriptor& descriptor() const override { return descriptor_; }

  SchemeKey gen(const SchemeParams& params, std::optional<std::uint64_t> seed) const override {
    if (params.lambda != 128 && params.lambda != 2048)
      throw AccumulatorError(ErrorCode::unsupported_lambda,
                             "RSA-family schemes support lambda 128 (test) or 2048 (production), got " +
                                 std::to_string(params.lambda));
    return to_scheme_key(rsa::generate_key(params.lambda, seed), params.threshold);
  }

  SchemeKey to_scheme_key(const RsaKey& k, std::uint64_t threshold) const {
    return rsa::scheme_key(k, name(), threshold);
  }

  std::size_t value_bytes(const SchemeKey& key, const AccumulatorValue&) const override {
    return byte_length(bigint_from_hex(key.pub.get("modulus")));
  }

  std::size_t witness_bytes(const SchemeKey& key, const Witness& w) const override {
    std::size_t n = byte_length(bigint_from_hex(key.pub.get("modulus")));
    if (w.kind == WitnessKind::non_membership) return n + byte_length(payload_int(w.payload, "a"));
    return n;
  }

  std::size_t manager_bytes(const SchemeKey& key, const AccumulatorState& state) const override {
    std::size_t total = value_bytes(key, state.value);
    for (const auto& p : prime_list(state.aux)) total += (p.size() + 1) / 2;
    if (key.trapdoor) total += byte_length(payload_int(*key.trapdoor, "p_prime")) +
                               byte_length(payload_int(*key.trapdoor, "q_prime"));
    return total;
  }

 protected:
  static rsa::PrimeRepresentative representative(const RsaKey& k, const Element& e) {
    return rsa::hash_to_prime(e, k.lambda);
  }

  AccumulatorState state_for(std::span<const Element> set, const RsaKey& k, const BigInt& value) const {
    AccumulatorState state;
    state.value = AccumulatorValue{name(), Document{}};
    state.value.fields.set("acc", to_hex(value));
    state.aux.members.assign(set.begin(), set.end());
    std::vector<std::string> primes;
    for (const auto& e : set) primes.push_back(to_hex(representative(k, e).prime));
    state.aux.extra.set_list("primes", primes);
    return state;
  }

  static std::set<BigInt> prime_set(const AuxInfo& aux) {
    std::set<BigInt> out;
    for (const auto& p : prime_list(aux)) out.insert(bigint_from_hex(p));
    return out;
  }

  static void append_member(AccumulatorState& state, const Element& e, const BigInt& prime) {
    auto primes = prime_list(state.aux);
    primes.push_back(to_hex(prime));
    state.aux.members.push_back(e);
    state.aux.extra.set_list("primes", primes);
  }

  static void erase_member(AccumulatorState& state, const Element& e) {
    auto idx = member_index(state.aux, e);
    auto primes = prime_list(state.aux);
    primes.erase(primes.begin() + idx);
    state.aux.members.erase(state.aux.members.begin() + idx);
    state.aux.extra.set_list("primes", primes);
  }

  Witness membership(const Element& y, std::uint64_t epoch, const BigInt& w) const {
    Witness out{name(), WitnessKind::membership, y, epoch, Document{}};
    out.payload.set("w", to_hex(w));
    return out;
  }

  bool verify_member(const SchemeKey& key, const AccumulatorValue& z, const Element& y, const Witness& w) const {
    if (w.kind != WitnessKind::membership) return false;
    RsaKey k = rsa_key_from(key);
    return rsa::verify_membership(k, payload_int(z.fields, "acc"), representative(k, y).prime,
                                  payload_int(w.payload, "w"));
  }

  Broadcast value_broadcast(AccumulatorState& state, std::string type, const BigInt& prime) const {
    Document payload;
    payload.set("prime", to_hex(prime));
    payload.set("acc_value", state.value.fields.get("acc"));
    return make_broadcast(state, std::move(type), std::move(payload));
  }

  WitnessUpdate bezout_update(const SchemeKey& key, const Witness& w, const Broadcast& b) const {
    RsaKey k = rsa_key_from(key);
    BigInt self = representative(k, w.element).prime;
    BigInt deleted = payload_int(b.payload, "prime");
    if (self == deleted) throw AccumulatorError(ErrorCode::not_a_member, "witness subject was deleted");
    BigInt updated = rsa::update_on_delete(k, payload_int(w.payload, "w"), self, deleted,
                                           payload_int(b.payload, "acc_value"));
    WitnessUpdate out{w, true};
    out.witness.payload.set("w", to_hex(updated));
    return out;
  }

 private:
  SchemeDescriptor descriptor_;
};

class RsaUniversalScheme final : public RsaFamilyScheme {
 public:
  RsaUniversalScheme()
      : RsaFamilyScheme(SchemeDescriptor{"rsa", false, Dynamism::dynamic, ProofKind::universal, false,
                                         UpdateModel::synchronous}) {}

 protected:
  AccumulatorState do_eval(const SchemeKey& key, std::span<const Element> set) const override {
    RsaKey k = rsa_key_from(key);
    AccumulatorState state = state_for(set, k, k.generator);
    state.value.fields.set("acc", to_hex(rsa::accumulate(k, prime_set(state.aux))));
    return state;
  }

  std::optional<Witness> do_wit(const SchemeKey& key, const Element& y, const AuxInfo& aux,
                                const AccumulatorValue&) const override {
    auto idx = member_index(aux, y);
    if (idx < 0) return std::nullopt;
    RsaKey k = rsa_key_from(key);
    auto primes = prime_list(aux);
    BigInt exponent = 1;
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (static_cast<std::ptrdiff_t>(i) != idx) exponent *= bigint_from_hex(primes[i]);
    return membership(y, aux.epoch, pow_mod(k.generator, exponent, k.modulus));
  }

  std::optional<Witness> do_nonmem_wit(const SchemeKey& key, const Element& y, const AuxInfo& aux,
                                       const AccumulatorValue& z) const override {
    if (member_index(aux, y) >= 0) return std::nullopt;
    RsaKey k = rsa_key_from(key);
    rsa::RsaAccumulator acc(k);
    acc.restore(payload_int(z.fields, "acc"), prime_set(aux));
    rsa::NonMemWitness nw = acc.nonmembership_witness(representative(k, y).prime);
    Witness out{name(), WitnessKind::non_membership, y, aux.epoch, Document{}};
    out.payload.set("a", to_hex(nw.a));
    out.payload.set("b_value", to_hex(nw.B));
    return out;
  }

  bool do_ver(const SchemeKey& key, const AccumulatorValue& z, const Element& y, const Witness& w) const override {
    if (w.kind == WitnessKind::membership) return verify_member(key, z, y, w);
    RsaKey k = rsa_key_from(key);
    rsa::NonMemWitness nw{payload_int(w.payload, "a"), payload_int(w.payload, "b_value")};
    return rsa::verify_nonmembership(k, payload_int(z.fields, "acc"), representative(k, y).prime, nw);
  }

  AddResult do_add(const SchemeKey& key, AccumulatorState& state, const Element& y) const override {
    RsaKey k = rsa_key_from(key);
    BigInt x = representative(k, y).prime;
    rsa::RsaAccumulator acc(k);
    acc.restore(payload_int(state.value.fields, "acc"), prime_set(state.aux));
    BigInt w = acc.add(x);
    state.value.fields.set("acc", to_hex(acc.value()));
    append_member(state, y, x);
    Broadcast b = value_broadcast(state, "add", x);
    return AddResult{membership(y, state.aux.epoch, w), {b}};
  }

  std::vector<Broadcast> do_remove(const SchemeKey& key, AccumulatorState& state, const Element& y) const override {
    RsaKey k = rsa_key_from(key);
    BigInt x = representative(k, y).prime;
    rsa::RsaAccumulator acc(k);
    acc.restore(payload_int(state.value.fields, "acc"), prime_set(state.aux));
    acc.remove(x);
    state.value.fields.set("acc", to_hex(acc.value()));
    erase_member(state, y);
    return {value_broadcast(state, "delete", x)};
  }

  WitnessUpdate do_apply(const SchemeKey& key, const Witness& w, const Broadcast& b) const override {
    if (w.kind != WitnessKind::membership)
      throw AccumulatorError(ErrorCode::unsupported_operation,
                             "non-membership witnesses are recomputed by the manager, not updated");
    if (b.type == "delete") return bezout_update(key, w, b);
    if (b.type != "add") throw AccumulatorError(ErrorCode::parse_error, "unknown broadcast type " + b.type);
    RsaKey k = rsa_key_from(key);
    WitnessUpdate out{w, true};
    out.witness.payload.set(
        "w", to_hex(rsa::update_on_add(k, payload_int(w.payload, "w"), payload_int(b.payload, "prime"))));
    return out;
  }
};

class ClRsaBScheme final : public RsaFamilyScheme {
 public:
  ClRsaBScheme()
      : RsaFamilyScheme(SchemeDescriptor{"clrsab", false, Dynamism::dynamic, ProofKind::positive, false,
                                         UpdateModel::partially_asynchronous}) {}

 protected:
  // Additions never move the value, so evaluating any set yields g.
  AccumulatorState do_eval(const SchemeKey& key, std::span<const Element> set) const override {
    RsaKey k = rsa_key_from(key);
    return state_for(set, k, k.generator);
  }

  std::optional<Witness> do_wit(const SchemeKey& key, const Element& y, const AuxInfo& aux,
                                const AccumulatorValue& z) const override {
    if (member_index(aux, y) < 0) return std::nullopt;
    RsaKey k = rsa_key_from(key);
    rsa::ClRsaBAccumulator acc(k);
    acc.restore(payload_int(z.fields, "acc"), {});
    return membership(y, aux.epoch, acc.membership_witness(representative(k, y).prime));
  }

  bool do_ver(const SchemeKey& key, const AccumulatorValue& z, const Element& y, const Witness& w) const override {
    return verify_member(key, z, y, w);
  }

  AddResult do_add(const SchemeKey& key, AccumulatorState& state, const Element& y) const override {
    RsaKey k = rsa_key_from(key);
    BigInt x = representative(k, y).prime;
    rsa::ClRsaBAccumulator acc(k);
    acc.restore(payload_int(state.value.fields, "acc"), prime_set(state.aux));
    BigInt w = acc.add(x);
    append_member(state, y, x);
    return AddResult{membership(y, state.aux.epoch, w), {}};
  }

  std::vector<Broadcast> do_remove(const SchemeKey& key, AccumulatorState& state, const Element& y) const override {
    RsaKey k = rsa_key_from(key);
    BigInt x = representative(k, y).prime;
    rsa::ClRsaBAccumulator acc(k);
    acc.restore(payload_int(state.value.fields, "acc"), prime_set(state.aux));
    acc.remove(x);
    state.value.fields.set("acc", to_hex(acc.value()));
    erase_member(state, y);
    return {value_broadcast(state, "delete", x)};
  }

  WitnessUpdate do_apply(const SchemeKey& key, const Witness& w, const Broadcast& b) const override {
    if (b.type != "delete") throw AccumulatorError(ErrorCode::parse_error, "CL-RSA-B only broadcasts deletions");
    return bezout_update(key, w, b);
  }
};

}  // namespace

std::unique_ptr<Scheme> make_rsa_scheme() { return std::make_unique<RsaUniversalScheme>(); }
std::unique_ptr<Scheme> make_clrsab_scheme() { return std::make_unique<ClRsaBScheme>(); }

}  // namespace cryptacc::detail

namespace cryptacc::rsa {

SchemeKey scheme_key(const RsaKey& k, std::string_view scheme, std::uint64_t threshold) {
  SchemeKey key{std::string(scheme), Document{}, std::nullopt};
  key.pub.set_u64("lambda", k.lambda);
  key.pub.set_u64("threshold", threshold);
  key.pub.set("modulus", to_hex(k.modulus));
  key.pub.set("generator", to_hex(k.generator));
  if (k.trapdoor) {
    Document td;
    td.set("p_prime", to_hex(k.trapdoor->p_prime));
    td.set("q_prime", to_hex(k.trapdoor->q_prime));
    key.trapdoor = td;
  }
  return key;
}

RsaKey rsa_key(const SchemeKey& key) { return detail::rsa_key_from(key); }

}  // namespace cryptacc::rsa
