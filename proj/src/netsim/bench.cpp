#include <algorithm>
#include <chrono>
#include <sstream>

#include "cryptacc/netsim.hpp"
#include "cryptacc/scheme.hpp"

namespace cryptacc::netsim {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ns(Clock::time_point from) {
  return std::chrono::duration<double, std::nano>(Clock::now() - from).count();
}

}  // namespace

std::vector<BenchRow> run_bench(std::string_view scheme_name, const std::vector<std::uint64_t>& sizes,
                                const BenchOptions& options) {
  const Scheme& scheme = scheme_by_name(scheme_name);
  struct Prepared {
    SchemeKey key;
    AccumulatorValue value;
    std::vector<Element> probes;
    std::vector<Witness> witnesses;
  };
  std::vector<BenchRow> rows;
  std::vector<Prepared> prepared;

  for (std::uint64_t n : sizes) {
    if (n == 0) throw AccumulatorError(ErrorCode::domain_error, "bench sizes must be positive");
    std::vector<Element> set;
    set.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) set.push_back(holder_element(i));

    SchemeParams params;
    params.lambda = options.lambda;
    params.threshold = scheme.descriptor().symmetric ? n : SchemeParams::kUnbounded;
    SchemeKey key = scheme.gen(params, options.seed);

    auto t0 = Clock::now();
    AccumulatorState state = scheme.eval(key, set);
    double eval_ns = elapsed_ns(t0);

    // The same probe elements at every size, so per-element work such as
    // deriving a prime representative does not vary across the sweep.
    std::size_t probe_count = static_cast<std::size_t>(std::min<std::uint64_t>(n, kBenchProbes));
    Prepared p{key, state.value, std::vector<Element>(set.begin(), set.begin() + static_cast<std::ptrdiff_t>(probe_count)), {}};
    t0 = Clock::now();
    for (const auto& e : p.probes) {
      std::optional<Witness> w = scheme.wit(key, e, state.aux, state.value);
      if (!w) throw AccumulatorError(ErrorCode::not_a_member, "bench probe has no witness");
      p.witnesses.push_back(std::move(*w));
    }
    double wit_ns = elapsed_ns(t0) / static_cast<double>(probe_count);
    std::size_t witness_bytes = 0;
    for (const auto& w : p.witnesses) witness_bytes = std::max(witness_bytes, scheme.witness_bytes(key, w));

    rows.push_back({n, scheme.value_bytes(key, state.value), witness_bytes, scheme.manager_bytes(key, state), eval_ns,
                    wit_ns, 0});
    prepared.push_back(std::move(p));
  }

  // Verification is timed in rounds that visit every size, so all sizes see
  // the same process state (heap layout noticeably shifts GMP timings). Each
  // batch runs long enough that timer resolution is irrelevant; interference
  // only adds time, so the fastest batch per size is kept.
  for (int round = 0; round < kBenchBatches; ++round) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Prepared& p = prepared[r];
      std::uint64_t reps = 0;
      bool all_ok = true;
      auto t0 = Clock::now();
      double spent = 0;
      do {
        for (std::size_t i = 0; i < p.probes.size(); ++i) all_ok &= scheme.ver(p.key, p.value, p.probes[i], p.witnesses[i]);
        reps += p.probes.size();
        spent = elapsed_ns(t0);
      } while (spent < options.min_batch_ns);
      if (!all_ok) throw AccumulatorError(ErrorCode::domain_error, "bench witness failed to verify");
      double per_op = spent / static_cast<double>(reps);
      if (round == 0 || per_op < rows[r].ver_ns) rows[r].ver_ns = per_op;
    }
  }
  return rows;
}

std::string bench_csv(std::string_view scheme, const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "scheme,n,value_bytes,witness_bytes,manager_bytes,eval_ns,wit_ns,ver_ns\n";
  for (const auto& r : rows)
    out << scheme << ',' << r.n << ',' << r.value_bytes << ',' << r.witness_bytes << ',' << r.manager_bytes << ','
        << static_cast<std::uint64_t>(r.eval_ns) << ',' << static_cast<std::uint64_t>(r.wit_ns) << ','
        << static_cast<std::uint64_t>(r.ver_ns) << '\n';
  return out.str();
}

}  // namespace cryptacc::netsim
