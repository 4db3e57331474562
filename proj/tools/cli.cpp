#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "cryptacc/filters.hpp"
#include "cryptacc/netsim.hpp"
#include "cryptacc/scheme.hpp"

namespace cryptacc::cli {

namespace fs = std::filesystem;

void write_atomic(const std::string& path, const std::string& content) {
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw AccumulatorError(ErrorCode::io_error, "cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw AccumulatorError(ErrorCode::io_error, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw AccumulatorError(ErrorCode::io_error, "cannot rename onto " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw AccumulatorError(ErrorCode::io_error, "cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

namespace {

struct CliState {
  std::string profile;
  SchemeKey key;
  AccumulatorState acc;
};

Document encode_cli_state(const CliState& s) {
  Document doc("cli-state");
  doc.set("scheme", s.key.scheme);
  doc.set("profile", s.profile);
  doc.embed("key", encode(s.key));
  doc.embed("acc", encode(s.acc));
  return doc;
}

CliState decode_cli_state(const Document& doc) {
  if (doc.get("kind") != "cli-state") throw AccumulatorError(ErrorCode::parse_error, "not a state file");
  CliState s{doc.get("profile"), decode_key(doc.extract("key")), decode_state(doc.extract("acc"))};
  if (s.key.scheme != doc.get("scheme") || s.acc.value.scheme != s.key.scheme)
    throw AccumulatorError(ErrorCode::key_mismatch, "state file mixes schemes");
  return s;
}

std::uint32_t profile_lambda(const std::string& profile) { return profile == "production" ? 2048 : 128; }

bool is_rsa_family(const std::string& scheme) { return scheme == "rsa" || scheme == "clrsab"; }

struct Common {
  std::string profile = "test";
  std::optional<std::uint64_t> seed;
};

CliState load_state(const std::string& path, const Common& common) {
  CliState s = decode_cli_state(Document::decode(read_file(path)));
  if (common.profile == "production" && is_rsa_family(s.key.scheme) && s.key.pub.get_u64("lambda") < 2048)
    throw AccumulatorError(ErrorCode::unsupported_lambda, "production profile refuses a toy modulus");
  return s;
}

void save_state(const std::string& path, const CliState& s) { write_atomic(path, encode_cli_state(s).encode()); }

std::vector<Element> parse_elements(const std::vector<std::string>& raw, const std::string& file, bool hex) {
  std::vector<std::string> items = raw;
  if (!file.empty()) {
    std::istringstream in(read_file(file));
    for (std::string line; std::getline(in, line);)
      if (!line.empty()) items.push_back(line);
  }
  std::vector<Element> out;
  out.reserve(items.size());
  for (const auto& s : items) out.push_back(hex ? Element::from_hex(s) : Element(s));
  return out;
}

Element parse_element(const std::string& raw, bool hex) { return hex ? Element::from_hex(raw) : Element(raw); }

Document encode_broadcasts(const std::vector<Broadcast>& bs) {
  Document doc("broadcasts");
  doc.set_u64("count", bs.size());
  for (std::size_t i = 0; i < bs.size(); ++i) doc.embed("b" + std::to_string(i), encode(bs[i]));
  return doc;
}

std::vector<Broadcast> decode_broadcasts(const Document& doc) {
  if (doc.get("kind") != "broadcasts") throw AccumulatorError(ErrorCode::parse_error, "not a broadcast file");
  std::vector<Broadcast> out;
  std::uint64_t n = doc.get_u64("count");
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(decode_broadcast(doc.extract("b" + std::to_string(i))));
  return out;
}

void warn_bloom_overflow(const CliState& s, std::ostream& err) {
  if (s.key.scheme != "bloom") return;
  std::uint64_t threshold = s.key.pub.get_u64("threshold");
  if (s.acc.aux.members.size() > threshold)
    err << "warning: bloom filter holds " << s.acc.aux.members.size() << " elements, above its threshold of "
        << threshold << "; false-positive rate exceeds the design target, regenerate the filter\n";
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty())
    out << text;
  else
    write_atomic(out_path, text);
}

// --- scenarios and builtins --------------------------------------------------

std::vector<netsim::Scenario> expand_scenario(const Document& doc) {
  // "scheme" may list several schemes sharing one trace.
  std::vector<std::string> schemes = doc.get_list("scheme");
  if (schemes.empty()) throw AccumulatorError(ErrorCode::invalid_scenario, "scenario names no scheme");
  std::vector<netsim::Scenario> out;
  for (const auto& name : schemes) {
    Document one = doc;
    one.set("scheme", name);
    out.push_back(netsim::Scenario::decode(one));
  }
  return out;
}

std::string builtin_scenario(const std::string& name) {
  auto shared = [](std::vector<std::string> schemes, std::uint64_t adds, std::uint64_t deletes, std::uint64_t seed) {
    Document doc = netsim::Scenario::add_delete(schemes.front(), adds, deletes, seed).encode();
    doc.set_list("scheme", schemes);
    return doc.encode();
  };
  if (name == "clrsab_vs_sync") return shared({"clrsab", "rsa"}, 100, 10, 7);
  if (name == "merkle_vs_async") return shared({"merkle", "async"}, 64, 0, 7);
  throw AccumulatorError(ErrorCode::invalid_scenario, "no builtin scenario named '" + name + "'");
}

std::vector<std::uint64_t> parse_sweep(const std::string& sweep) {
  auto colon = sweep.find(':');
  if (colon == std::string::npos) throw AccumulatorError(ErrorCode::parse_error, "sweep must be LO:HI exponents");
  unsigned lo = static_cast<unsigned>(std::stoul(sweep.substr(0, colon)));
  unsigned hi = static_cast<unsigned>(std::stoul(sweep.substr(colon + 1)));
  if (lo > hi || hi > 30) throw AccumulatorError(ErrorCode::parse_error, "bad sweep range");
  std::vector<std::uint64_t> sizes;
  for (unsigned e = lo; e <= hi; ++e) sizes.push_back(std::uint64_t{1} << e);
  return sizes;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cryptacc: cryptographic accumulators"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--profile", common.profile, "test (lambda 128) or production (lambda 2048)")
        ->check(CLI::IsMember({"test", "production"}));
    sub->add_option("--seed", common.seed, "seed for every randomized step");
  };

  std::string scheme, state, witness, outp, broadcasts, elements_file, scenario, builtin, sizes_arg, sweep;
  std::vector<std::string> elements;
  std::string element;
  bool hex = false, nonmember = false, compare = false, hiding = false, dump_scenario = false;
  std::uint64_t threshold = 0, m = 0, k = 0, n = 0, probes = 100000;
  double bpe = 12;

  auto* gen = app.add_subcommand("gen", "generate a key and an empty accumulator state");
  add_common(gen);
  gen->add_option("--scheme", scheme)->required();
  gen->add_option("--state", state)->required();
  gen->add_option("--threshold", threshold, "capacity N (0 = scheme default / unbounded)");

  auto* acc = app.add_subcommand("acc", "accumulate a set, replacing the current one");
  add_common(acc);
  acc->add_option("--state", state)->required();
  acc->add_option("--element", elements);
  acc->add_option("--elements", elements_file, "file with one element per line");
  acc->add_flag("--hex", hex, "elements are hex encoded");
  acc->add_flag("--hiding", hiding, "mix in one random element (uses --seed)");

  auto* add = app.add_subcommand("add", "add one element");
  add_common(add);
  add->add_option("--state", state)->required();
  add->add_option("--element", element)->required();
  add->add_flag("--hex", hex);
  add->add_option("--witness", witness, "where to write the new element's witness");
  add->add_option("--out", outp, "where to write the broadcasts for existing holders");

  auto* del = app.add_subcommand("del", "delete one element");
  add_common(del);
  del->add_option("--state", state)->required();
  del->add_option("--element", element)->required();
  del->add_flag("--hex", hex);
  del->add_option("--out", outp, "where to write the broadcasts");

  auto* wit = app.add_subcommand("wit", "issue a witness");
  add_common(wit);
  wit->add_option("--state", state)->required();
  wit->add_option("--element", element)->required();
  wit->add_flag("--hex", hex);
  wit->add_option("--witness", witness)->required();
  wit->add_flag("--nonmember", nonmember, "issue a non-membership witness");

  auto* ver = app.add_subcommand("verify", "verify a witness; prints TRUE or FALSE");
  add_common(ver);
  ver->add_option("--state", state)->required();
  ver->add_option("--element", element)->required();
  ver->add_flag("--hex", hex);
  ver->add_option("--witness", witness)->required();

  auto* upd = app.add_subcommand("update", "apply broadcasts to a witness");
  add_common(upd);
  upd->add_option("--state", state, "state file supplying the key")->required();
  upd->add_option("--witness", witness)->required();
  upd->add_option("--broadcasts", broadcasts)->required();
  upd->add_option("--out", outp, "defaults to rewriting --witness");

  auto* fpr = app.add_subcommand("fpr", "Bloom false-positive experiment");
  add_common(fpr);
  fpr->add_option("--m", m);
  fpr->add_option("--k", k);
  fpr->add_option("--n", n);
  fpr->add_option("--probes", probes);
  fpr->add_flag("--compare", compare, "cuckoo against Bloom at equal bits per element");
  fpr->add_option("--bpe", bpe, "bits per element for --compare");
  fpr->add_option("--out", outp);

  auto* sim = app.add_subcommand("simulate", "run a manager/holder scenario");
  add_common(sim);
  sim->add_option("--scenario", scenario);
  sim->add_option("--builtin", builtin);
  sim->add_option("--out", outp);
  sim->add_flag("--dump-scenario", dump_scenario, "print the scenario document instead of running it");

  auto* bench = app.add_subcommand("bench", "scaling sweep with timings and sizes");
  add_common(bench);
  bench->add_option("--scheme", scheme)->required();
  bench->add_option("--sizes", sizes_arg, "comma separated sizes");
  bench->add_option("--sweep", sweep, "LO:HI powers of two, e.g. 6:14");
  bench->add_option("--out", outp);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (gen->parsed()) {
      const Scheme& s = scheme_by_name(scheme);
      SchemeParams params;
      params.lambda = profile_lambda(common.profile);
      params.threshold = threshold;
      if (common.profile == "production" && is_rsa_family(scheme))
        err << "warning: production profile generates a 2048-bit safe-prime modulus; this can take several minutes\n";
      SchemeKey key = s.gen(params, common.seed);
      CliState st{common.profile, key, s.eval(key, {})};
      save_state(state, st);
      return kOk;
    }
    if (acc->parsed()) {
      CliState st = load_state(state, common);
      const Scheme& s = scheme_by_name(st.key.scheme);
      std::vector<Element> set = parse_elements(elements, elements_file, hex);
      if (hiding) {
        std::mt19937_64 rng(common.seed.value_or(std::random_device{}()));
        st.acc = eval_hiding(s, st.key, set, rng);
      } else {
        st.acc = s.eval(st.key, set);
      }
      save_state(state, st);
      warn_bloom_overflow(st, err);
      return kOk;
    }
    if (add->parsed()) {
      CliState st = load_state(state, common);
      const Scheme& s = scheme_by_name(st.key.scheme);
      AddResult r = s.add(st.key, st.acc, parse_element(element, hex));
      save_state(state, st);
      if (!witness.empty()) write_atomic(witness, encode(r.witness).encode());
      if (!outp.empty()) write_atomic(outp, encode_broadcasts(r.broadcasts).encode());
      out << "broadcasts=" << r.broadcasts.size() << '\n';
      warn_bloom_overflow(st, err);
      return kOk;
    }
    if (del->parsed()) {
      CliState st = load_state(state, common);
      const Scheme& s = scheme_by_name(st.key.scheme);
      std::vector<Broadcast> bs = s.remove(st.key, st.acc, parse_element(element, hex));
      save_state(state, st);
      if (!outp.empty()) write_atomic(outp, encode_broadcasts(bs).encode());
      out << "broadcasts=" << bs.size() << '\n';
      return kOk;
    }
    if (wit->parsed()) {
      CliState st = load_state(state, common);
      const Scheme& s = scheme_by_name(st.key.scheme);
      Element y = parse_element(element, hex);
      std::optional<Witness> w = nonmember ? s.nonmem_wit(st.key, y, st.acc.aux, st.acc.value)
                                           : s.wit(st.key, y, st.acc.aux, st.acc.value);
      if (!w) {
        out << "BOTTOM\n";
        return kFalse;
      }
      write_atomic(witness, encode(*w).encode());
      return kOk;
    }
    if (ver->parsed()) {
      CliState st = load_state(state, common);
      const Scheme& s = scheme_by_name(st.key.scheme);
      Witness w = decode_witness(Document::decode(read_file(witness)));
      bool ok = s.ver(st.key, st.acc.value, parse_element(element, hex), w);
      warn_bloom_overflow(st, err);
      out << (ok ? "TRUE" : "FALSE") << '\n';
      return ok ? kOk : kFalse;
    }
    if (upd->parsed()) {
      CliState st = load_state(state, common);
      const Scheme& s = scheme_by_name(st.key.scheme);
      Witness w = decode_witness(Document::decode(read_file(witness)));
      std::uint64_t changed = 0;
      for (const auto& b : decode_broadcasts(Document::decode(read_file(broadcasts)))) {
        WitnessUpdate u = s.apply(st.key, w, b);
        changed += u.changed;
        w = std::move(u.witness);
      }
      write_atomic(outp.empty() ? witness : outp, encode(w).encode());
      out << "updates=" << changed << '\n';
      return kOk;
    }
    if (fpr->parsed()) {
      std::ostringstream report;
      if (probes < 10000) throw AccumulatorError(ErrorCode::domain_error, "probes must be at least 10000");
      std::uint64_t seed = common.seed.value_or(1);
      if (compare) {
        if (n == 0) throw AccumulatorError(ErrorCode::domain_error, "--compare needs --n > 0");
        filters::FilterComparison c = filters::compare_filters(n, bpe, probes, seed);
        report << "n=" << c.n << "\nprobes=" << c.probes << "\nbloom_m=" << c.bloom_m << "\nbloom_k=" << c.bloom_k
               << "\nbloom_bits_per_element=" << c.bloom_bits_per_element
               << "\ncuckoo_buckets=" << (std::uint64_t{1} << c.cuckoo.bucket_bits)
               << "\ncuckoo_fingerprint_bits=" << c.cuckoo.fingerprint_bits
               << "\ncuckoo_bits_per_element=" << c.cuckoo_bits_per_element
               << "\ncuckoo_rejected=" << c.cuckoo_rejected << "\nbloom_fpr=" << c.bloom_fpr
               << "\ncuckoo_fpr=" << c.cuckoo_fpr
               << "\ncuckoo_not_worse=" << (c.cuckoo_fpr <= c.bloom_fpr ? "TRUE" : "FALSE") << '\n';
      } else {
        if (m == 0 || k == 0) throw AccumulatorError(ErrorCode::domain_error, "--m and --k must be positive");
        filters::FprMeasurement r = filters::measure_bloom_fpr(m, static_cast<std::uint32_t>(k), n, probes, seed);
        report.precision(8);
        report << "m=" << m << "\nk=" << k << "\nn=" << n << "\nprobes=" << probes << "\nanalytic_fpr=" << r.analytic
               << "\nempirical_fpr=" << r.empirical << "\nstandard_error=" << r.standard_error
               << "\nband_low=" << std::max(0.0, r.analytic - 3 * r.standard_error)
               << "\nband_high=" << r.analytic + 3 * r.standard_error
               << "\nwithin_3se=" << (r.within(3) ? "TRUE" : "FALSE") << '\n';
      }
      emit(report.str(), outp, out);
      return kOk;
    }
    if (sim->parsed()) {
      if (scenario.empty() == builtin.empty())
        throw AccumulatorError(ErrorCode::invalid_scenario, "give exactly one of --scenario or --builtin");
      std::string text = builtin.empty() ? read_file(scenario) : builtin_scenario(builtin);
      if (dump_scenario) {
        emit(text, outp, out);
        return kOk;
      }
      std::vector<netsim::Scenario> runs = expand_scenario(Document::decode(text));
      if (common.seed)
        for (auto& r : runs) r.seed = *common.seed;
      std::ostringstream report;
      if (runs.size() == 1) {
        report << netsim::sim_run(runs.front()).csv();
      } else {
        netsim::CompareReport cmp = netsim::sim_compare(runs);
        report << cmp.table();
        for (const auto& r : cmp.runs) report << "# run " << r.scheme << '\n' << r.csv();
      }
      emit(report.str(), outp, out);
      return kOk;
    }
    if (bench->parsed()) {
      std::vector<std::uint64_t> sizes;
      if (!sweep.empty()) sizes = parse_sweep(sweep);
      std::stringstream list(sizes_arg);
      for (std::string item; std::getline(list, item, ',');)
        if (!item.empty()) sizes.push_back(std::stoull(item));
      if (sizes.empty()) throw AccumulatorError(ErrorCode::parse_error, "bench needs --sizes or --sweep");
      netsim::BenchOptions opts;
      opts.seed = common.seed.value_or(1);
      opts.lambda = profile_lambda(common.profile);
      std::vector<netsim::BenchRow> rows = netsim::run_bench(scheme, sizes, opts);
      std::ostringstream report;
      report << netsim::bench_csv(scheme, rows);
      if (rows.size() >= 4) {
        std::vector<double> ns, vb, wb, mb, vt;
        for (const auto& r : rows) {
          ns.push_back(static_cast<double>(r.n));
          vb.push_back(static_cast<double>(r.value_bytes));
          wb.push_back(static_cast<double>(r.witness_bytes));
          mb.push_back(static_cast<double>(r.manager_bytes));
          vt.push_back(r.ver_ns);
        }
        report << "# fit,value_bytes," << to_string(netsim::sim_fit_complexity(ns, vb)) << '\n';
        report << "# fit,witness_bytes," << to_string(netsim::sim_fit_complexity(ns, wb)) << '\n';
        report << "# fit,manager_bytes," << to_string(netsim::sim_fit_complexity(ns, mb)) << '\n';
        report << "# fit,ver_ns," << to_string(netsim::sim_fit_complexity(ns, vt)) << '\n';
      }
      emit(report.str(), outp, out);
      return kOk;
    }
  } catch (const AccumulatorError& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::unsupported_operation ? kUnsupported : kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace cryptacc::cli
