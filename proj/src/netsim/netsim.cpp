#include "cryptacc/netsim.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cryptacc/scheme.hpp"

namespace cryptacc::netsim {

namespace {

char event_code(EventType t) {
  switch (t) {
    case EventType::add: return 'A';
    case EventType::remove: return 'D';
    case EventType::verify: return 'V';
  }
  return '?';
}

std::string_view event_name(EventType t) {
  switch (t) {
    case EventType::add: return "add";
    case EventType::remove: return "delete";
    case EventType::verify: return "verify";
  }
  return "?";
}

[[noreturn]] void invalid(const std::string& what) { throw AccumulatorError(ErrorCode::invalid_scenario, what); }

void validate(const Scenario& sc, const SchemeDescriptor& d) {
  std::set<std::uint64_t> added;
  std::set<std::uint64_t> present;
  for (const auto& ev : sc.events) {
    switch (ev.type) {
      case EventType::add:
        if (!added.insert(ev.id).second) invalid("id " + std::to_string(ev.id) + " added twice");
        present.insert(ev.id);
        break;
      case EventType::remove:
        if (!present.erase(ev.id)) invalid("delete of absent id " + std::to_string(ev.id));
        if (!d.can_delete())
          throw AccumulatorError(ErrorCode::unsupported_operation, "scheme '" + d.name + "' cannot delete");
        break;
      case EventType::verify:
        if (!present.count(ev.id)) invalid("verify of absent id " + std::to_string(ev.id));
        break;
    }
  }
  if (!d.can_add()) throw AccumulatorError(ErrorCode::unsupported_operation, "scheme '" + d.name + "' is static");
}

}  // namespace

Element holder_element(std::uint64_t id) { return Element("holder-" + std::to_string(id)); }

Document Scenario::encode() const {
  Document doc("scenario");
  doc.set("scheme", scheme);
  doc.set_u64("seed", seed);
  doc.set_u64("lambda", lambda);
  std::vector<std::string> items;
  items.reserve(events.size());
  for (const auto& ev : events) items.push_back(std::string(1, event_code(ev.type)) + ":" + std::to_string(ev.id));
  doc.set_list("events", items);
  return doc;
}

Scenario Scenario::decode(const Document& doc) {
  if (doc.get("kind") != "scenario") throw AccumulatorError(ErrorCode::parse_error, "not a scenario document");
  Scenario sc;
  sc.scheme = doc.get("scheme");
  sc.seed = doc.get_u64("seed");
  if (doc.has("lambda")) sc.lambda = static_cast<std::uint32_t>(doc.get_u64("lambda"));
  for (const auto& item : doc.get_list("events")) {
    if (item.size() < 3 || item[1] != ':') throw AccumulatorError(ErrorCode::parse_error, "event must be X:id");
    EventType t;
    switch (item[0]) {
      case 'A': t = EventType::add; break;
      case 'D': t = EventType::remove; break;
      case 'V': t = EventType::verify; break;
      default: throw AccumulatorError(ErrorCode::parse_error, "unknown event code in '" + item + "'");
    }
    std::uint64_t id = 0;
    try {
      std::size_t used = 0;
      id = std::stoull(item.substr(2), &used);
      if (used != item.size() - 2) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw AccumulatorError(ErrorCode::parse_error, "bad event id in '" + item + "'");
    }
    sc.events.push_back({t, id});
  }
  return sc;
}

Scenario Scenario::add_delete(std::string scheme, std::uint64_t adds, std::uint64_t deletes, std::uint64_t seed) {
  Scenario sc;
  sc.scheme = std::move(scheme);
  sc.seed = seed;
  for (std::uint64_t i = 0; i < adds; ++i) sc.events.push_back({EventType::add, i});
  for (std::uint64_t i = 0; i < deletes && i < adds; ++i) sc.events.push_back({EventType::remove, i});
  for (std::uint64_t i = deletes; i < adds; ++i) sc.events.push_back({EventType::verify, i});
  return sc;
}

std::uint64_t SimMetrics::total_witness_updates() const {
  std::uint64_t total = 0;
  for (const auto& [id, n] : witness_updates) total += n;
  return total;
}

std::uint64_t SimMetrics::max_witness_updates() const {
  std::uint64_t best = 0;
  for (const auto& [id, n] : witness_updates) best = std::max(best, n);
  return best;
}

std::string SimMetrics::csv() const {
  std::ostringstream out;
  out << "round,event,id,broadcasts,witness_updates,acc_bytes,wit_bytes,manager_bytes,verify\n";
  for (const auto& r : rounds) {
    out << r.round << ',' << event_name(r.event.type) << ',' << r.event.id << ',' << r.broadcasts << ','
        << r.witness_updates << ',' << r.acc_bytes << ',' << r.wit_bytes << ',' << r.manager_bytes << ','
        << (r.verified ? (*r.verified ? "TRUE" : "FALSE") : "") << '\n';
  }
  std::size_t passed = static_cast<std::size_t>(std::count(verify_results.begin(), verify_results.end(), true));
  out << "# summary\n";
  out << "scheme," << scheme << '\n';
  out << "rounds," << rounds.size() << '\n';
  out << "broadcasts," << broadcasts << '\n';
  out << "witness_updates_total," << total_witness_updates() << '\n';
  out << "witness_updates_max," << max_witness_updates() << '\n';
  out << "verify_true," << passed << '\n';
  out << "verify_false," << verify_results.size() - passed << '\n';
  return out.str();
}

SimMetrics sim_run(const Scenario& scenario) {
  const Scheme& scheme = scheme_by_name(scenario.scheme);
  validate(scenario, scheme.descriptor());

  std::uint64_t adds = static_cast<std::uint64_t>(std::count_if(
      scenario.events.begin(), scenario.events.end(), [](const Event& e) { return e.type == EventType::add; }));
  SchemeParams params;
  params.lambda = scenario.lambda;
  params.threshold = scheme.descriptor().symmetric ? std::max<std::uint64_t>(adds, 1) : SchemeParams::kUnbounded;
  SchemeKey key = scheme.gen(params, scenario.seed);
  AccumulatorState state = scheme.eval(key, {});

  SimMetrics metrics;
  metrics.scheme = scheme.name();
  std::map<std::uint64_t, Witness> holders;

  // A holder whose witness changes during a round counts one update,
  // however many broadcasts the round carried.
  auto deliver = [&](const std::vector<Broadcast>& broadcasts, RoundMetrics& round) {
    std::set<std::uint64_t> changed;
    for (const auto& b : broadcasts) {
      ++metrics.broadcasts;
      ++round.broadcasts;
      for (auto& [id, w] : holders) {
        WitnessUpdate u = scheme.apply(key, w, b);
        if (u.changed) changed.insert(id);
        w = std::move(u.witness);
      }
    }
    for (std::uint64_t id : changed) ++metrics.witness_updates[id];
    round.witness_updates = changed.size();
  };

  std::uint64_t round_no = 0;
  for (const auto& ev : scenario.events) {
    RoundMetrics round{++round_no, ev, 0, 0, 0, 0, 0, std::nullopt};
    Element element = holder_element(ev.id);
    switch (ev.type) {
      case EventType::add: {
        AddResult r = scheme.add(key, state, element);
        deliver(r.broadcasts, round);
        holders.emplace(ev.id, std::move(r.witness));
        metrics.witness_updates.emplace(ev.id, 0);
        break;
      }
      case EventType::remove: {
        holders.erase(ev.id);
        deliver(scheme.remove(key, state, element), round);
        break;
      }
      case EventType::verify: {
        bool ok = scheme.ver(key, state.value, element, holders.at(ev.id));
        round.verified = ok;
        metrics.verify_results.push_back(ok);
        break;
      }
    }
    round.acc_bytes = scheme.value_bytes(key, state.value);
    round.manager_bytes = scheme.manager_bytes(key, state);
    for (const auto& [id, w] : holders) round.wit_bytes = std::max(round.wit_bytes, scheme.witness_bytes(key, w));
    metrics.rounds.push_back(round);
  }
  return metrics;
}

CompareReport sim_compare(const std::vector<Scenario>& scenarios) {
  if (scenarios.size() < 2)
    throw AccumulatorError(ErrorCode::mismatched_event_lists, "comparison needs at least two scenarios");
  for (const auto& sc : scenarios)
    if (sc.events != scenarios.front().events)
      throw AccumulatorError(ErrorCode::mismatched_event_lists, "scenario '" + sc.scheme + "' has a different trace");

  CompareReport report;
  for (const auto& sc : scenarios) report.runs.push_back(sim_run(sc));
  auto fewest = [&](auto metric) {
    const SimMetrics* best = &report.runs.front();
    for (const auto& r : report.runs)
      if (metric(r) < metric(*best)) best = &r;
    return best->scheme;
  };
  report.fewest_broadcasts = fewest([](const SimMetrics& m) { return m.broadcasts; });
  report.fewest_witness_updates = fewest([](const SimMetrics& m) { return m.total_witness_updates(); });
  return report;
}

std::string CompareReport::table() const {
  std::ostringstream out;
  out << "scheme,broadcasts,witness_updates_total,witness_updates_max,final_acc_bytes,final_manager_bytes,verify_true\n";
  for (const auto& r : runs) {
    std::size_t acc = r.rounds.empty() ? 0 : r.rounds.back().acc_bytes;
    std::size_t mgr = r.rounds.empty() ? 0 : r.rounds.back().manager_bytes;
    out << r.scheme << ',' << r.broadcasts << ',' << r.total_witness_updates() << ',' << r.max_witness_updates() << ','
        << acc << ',' << mgr << ',' << std::count(r.verify_results.begin(), r.verify_results.end(), true) << '\n';
  }
  out << "# fewest_broadcasts," << fewest_broadcasts << '\n';
  out << "# fewest_witness_updates," << fewest_witness_updates << '\n';
  return out.str();
}

}  // namespace cryptacc::netsim
