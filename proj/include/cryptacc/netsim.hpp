#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cryptacc/document.hpp"
#include "cryptacc/element.hpp"

namespace cryptacc::netsim {

enum class EventType { add, remove, verify };

struct Event {
  EventType type;
  std::uint64_t id;

  bool operator==(const Event&) const = default;
};

struct Scenario {
  std::string scheme;
  std::vector<Event> events;
  std::uint64_t seed = 0;
  std::uint32_t lambda = 128;

  Document encode() const;
  static Scenario decode(const Document& doc);

  // a adds, then d deletes of the earliest ids, then one verify per survivor.
  static Scenario add_delete(std::string scheme, std::uint64_t adds, std::uint64_t deletes, std::uint64_t seed);
};

// Element a holder with this id owns.
Element holder_element(std::uint64_t id);

struct RoundMetrics {
  std::uint64_t round;
  Event event;
  std::uint64_t broadcasts;       // emitted this round
  std::uint64_t witness_updates;  // holders whose witness changed this round
  std::size_t acc_bytes;
  std::size_t wit_bytes;          // largest holder witness after the round
  std::size_t manager_bytes;
  std::optional<bool> verified;   // verify rounds only

  bool operator==(const RoundMetrics&) const = default;
};

struct SimMetrics {
  std::string scheme;
  std::uint64_t broadcasts = 0;
  std::map<std::uint64_t, std::uint64_t> witness_updates;  // holder id -> rounds in which its witness changed
  std::vector<RoundMetrics> rounds;
  std::vector<bool> verify_results;

  std::uint64_t total_witness_updates() const;
  std::uint64_t max_witness_updates() const;
  std::string csv() const;

  bool operator==(const SimMetrics&) const = default;
};

// Replays the scenario: the manager applies each event and emits broadcasts,
// every remaining holder applies them in id order, verifications run against
// the current value. Deterministic under the scenario seed.
SimMetrics sim_run(const Scenario& scenario);

struct CompareReport {
  std::vector<SimMetrics> runs;
  std::string fewest_broadcasts;
  std::string fewest_witness_updates;

  std::string table() const;
};

// All scenarios must carry the same event list.
CompareReport sim_compare(const std::vector<Scenario>& scenarios);

enum class Complexity { constant, logarithmic, linear, superlinear };
std::string_view to_string(Complexity c);

// Relative growth across the sweep below which a series counts as constant.
inline constexpr double kConstantTolerance = 0.25;

// Least-squares shape classification over >= 4 geometrically spaced sizes.
Complexity sim_fit_complexity(const std::vector<double>& sizes, const std::vector<double>& values);

// Elements 0..15 of every sweep size are timed.
inline constexpr std::uint64_t kBenchProbes = 16;
inline constexpr int kBenchBatches = 9;

struct BenchRow {
  std::uint64_t n;
  std::size_t value_bytes;
  std::size_t witness_bytes;  // largest probe witness
  std::size_t manager_bytes;
  double eval_ns;
  double wit_ns;  // mean per probe
  double ver_ns;  // fastest batch, per verification
};

struct BenchOptions {
  std::uint64_t seed = 1;
  std::uint32_t lambda = 128;
  double min_batch_ns = 2e6;  // each timed verification batch runs at least this long
};

std::vector<BenchRow> run_bench(std::string_view scheme, const std::vector<std::uint64_t>& sizes,
                                const BenchOptions& options = {});
std::string bench_csv(std::string_view scheme, const std::vector<BenchRow>& rows);

}  // namespace cryptacc::netsim
