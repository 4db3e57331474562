#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cryptacc/filters.hpp"
#include "cryptacc/netsim.hpp"
#include "cryptacc/scheme.hpp"

namespace py = pybind11;
using namespace cryptacc;

namespace {

// Python side passes bytes or str; str means its UTF-8 encoding.
Element to_element(const py::object& o) {
  if (py::isinstance<py::bytes>(o)) return Element(std::string_view(o.cast<std::string>()));
  if (py::isinstance<py::str>(o)) return Element(std::string_view(o.cast<std::string>()));
  throw py::type_error("element must be bytes or str");
}

std::vector<Element> to_elements(const py::iterable& items) {
  std::vector<Element> out;
  for (const auto& item : items) out.push_back(to_element(py::reinterpret_borrow<py::object>(item)));
  return out;
}

py::bytes element_bytes(const Element& e) {
  return py::bytes(reinterpret_cast<const char*>(e.bytes().data()), e.size());
}

py::dict row_dict(const netsim::BenchRow& r) {
  py::dict d;
  d["n"] = r.n;
  d["value_bytes"] = r.value_bytes;
  d["witness_bytes"] = r.witness_bytes;
  d["manager_bytes"] = r.manager_bytes;
  d["eval_ns"] = r.eval_ns;
  d["wit_ns"] = r.wit_ns;
  d["ver_ns"] = r.ver_ns;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cryptacc, m) {
  m.doc() = "Set-membership accumulators: Bloom and cuckoo filters, RSA, CL-RSA-B, Merkle and Merkle-forest.";

  static py::exception<AccumulatorError> error(m, "AccumulatorError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const AccumulatorError& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<SchemeKey>(m, "Key")
      .def_readonly("scheme", &SchemeKey::scheme)
      .def_property_readonly("has_trapdoor", [](const SchemeKey& k) { return k.trapdoor.has_value(); })
      .def("encode", [](const SchemeKey& k) { return encode(k).encode(); })
      .def_static("decode", [](const std::string& text) { return decode_key(Document::decode(text)); })
      .def("__eq__", [](const SchemeKey& a, const SchemeKey& b) { return a == b; });

  py::class_<AccumulatorValue>(m, "Value")
      .def_readonly("scheme", &AccumulatorValue::scheme)
      .def("encode", [](const AccumulatorValue& z) { return encode(z).encode(); })
      .def_static("decode", [](const std::string& text) { return decode_value(Document::decode(text)); })
      .def("__eq__", [](const AccumulatorValue& a, const AccumulatorValue& b) { return a == b; });

  py::class_<AccumulatorState>(m, "State")
      .def_readonly("value", &AccumulatorState::value)
      .def_property_readonly("epoch", [](const AccumulatorState& s) { return s.aux.epoch; })
      .def_property_readonly("members", [](const AccumulatorState& s) {
        py::list out;
        for (const auto& e : s.aux.members) out.append(element_bytes(e));
        return out;
      })
      .def("encode", [](const AccumulatorState& s) { return encode(s).encode(); })
      .def_static("decode", [](const std::string& text) { return decode_state(Document::decode(text)); });

  py::class_<Witness>(m, "Witness")
      .def_readonly("scheme", &Witness::scheme)
      .def_readonly("epoch", &Witness::epoch)
      .def_property_readonly("element", [](const Witness& w) { return element_bytes(w.element); })
      .def_property_readonly("nonmember", [](const Witness& w) { return w.kind == WitnessKind::non_membership; })
      .def("encode", [](const Witness& w) { return encode(w).encode(); })
      .def_static("decode", [](const std::string& text) { return decode_witness(Document::decode(text)); })
      .def("__eq__", [](const Witness& a, const Witness& b) { return a == b; });

  py::class_<Broadcast>(m, "Broadcast")
      .def_readonly("scheme", &Broadcast::scheme)
      .def_readonly("type", &Broadcast::type)
      .def_readonly("epoch", &Broadcast::epoch)
      .def("encode", [](const Broadcast& b) { return encode(b).encode(); })
      .def_static("decode", [](const std::string& text) { return decode_broadcast(Document::decode(text)); });

  py::class_<Scheme, std::unique_ptr<Scheme, py::nodelete>>(m, "Scheme")
      .def_property_readonly("name", &Scheme::name)
      .def_property_readonly("symmetric", [](const Scheme& s) { return s.descriptor().symmetric; })
      .def_property_readonly("strong", [](const Scheme& s) { return s.descriptor().strong; })
      .def_property_readonly("can_add", [](const Scheme& s) { return s.descriptor().can_add(); })
      .def_property_readonly("can_delete", [](const Scheme& s) { return s.descriptor().can_delete(); })
      .def_property_readonly("proofs", [](const Scheme& s) { return std::string(to_string(s.descriptor().proofs)); })
      .def_property_readonly("update_model",
                             [](const Scheme& s) { return std::string(to_string(s.descriptor().update_model)); })
      .def(
          "gen",
          [](const Scheme& s, std::uint32_t lambda, std::uint64_t threshold, std::optional<std::uint64_t> seed) {
            return s.gen({lambda, threshold}, seed);
          },
          py::arg("lambda_") = 128, py::arg("threshold") = 0, py::arg("seed") = py::none())
      .def("eval", [](const Scheme& s, const SchemeKey& k, const py::iterable& items) {
        return s.eval(k, to_elements(items));
      })
      .def("wit", [](const Scheme& s, const SchemeKey& k, const py::object& y, const AccumulatorState& st) {
        return s.wit(k, to_element(y), st.aux, st.value);
      })
      .def("nonmem_wit", [](const Scheme& s, const SchemeKey& k, const py::object& y, const AccumulatorState& st) {
        return s.nonmem_wit(k, to_element(y), st.aux, st.value);
      })
      .def("ver", [](const Scheme& s, const SchemeKey& k, const AccumulatorValue& z, const py::object& y,
                     const Witness& w) { return s.ver(k, z, to_element(y), w); })
      .def("add",
           [](const Scheme& s, const SchemeKey& k, AccumulatorState& st, const py::object& y) {
             AddResult r = s.add(k, st, to_element(y));
             return py::make_tuple(r.witness, r.broadcasts);
           })
      .def("remove", [](const Scheme& s, const SchemeKey& k, AccumulatorState& st,
                        const py::object& y) { return s.remove(k, st, to_element(y)); })
      .def("apply", [](const Scheme& s, const SchemeKey& k, const Witness& w, const Broadcast& b) {
        WitnessUpdate u = s.apply(k, w, b);
        return py::make_tuple(u.witness, u.changed);
      });

  m.def("scheme", [](const std::string& name) { return &scheme_by_name(name); },
        py::return_value_policy::reference);
  m.def("scheme_names", &scheme_names);

  m.def("bloom_fpr_estimate", &filters::bloom_fpr_estimate, py::arg("m"), py::arg("k"), py::arg("n"));
  m.def(
      "measure_bloom_fpr",
      [](std::uint64_t mm, std::uint32_t k, std::uint64_t n, std::uint64_t probes, std::uint64_t seed) {
        filters::FprMeasurement r = filters::measure_bloom_fpr(mm, k, n, probes, seed);
        py::dict d;
        d["analytic"] = r.analytic;
        d["empirical"] = r.empirical;
        d["standard_error"] = r.standard_error;
        d["false_positives"] = r.false_positives;
        d["probes"] = r.probes;
        d["within_3se"] = r.within(3);
        return d;
      },
      py::arg("m"), py::arg("k"), py::arg("n"), py::arg("probes") = 100000, py::arg("seed") = 1);
  m.def(
      "compare_filters",
      [](std::uint64_t n, double bpe, std::uint64_t probes, std::uint64_t seed) {
        filters::FilterComparison c = filters::compare_filters(n, bpe, probes, seed);
        py::dict d;
        d["bloom_m"] = c.bloom_m;
        d["bloom_k"] = c.bloom_k;
        d["cuckoo_bucket_bits"] = c.cuckoo.bucket_bits;
        d["cuckoo_fingerprint_bits"] = c.cuckoo.fingerprint_bits;
        d["bloom_fpr"] = c.bloom_fpr;
        d["cuckoo_fpr"] = c.cuckoo_fpr;
        d["cuckoo_rejected"] = c.cuckoo_rejected;
        return d;
      },
      py::arg("n"), py::arg("bits_per_element"), py::arg("probes") = 100000, py::arg("seed") = 1);

  m.def(
      "simulate",
      [](const std::string& scheme, std::uint64_t adds, std::uint64_t deletes, std::uint64_t seed) {
        netsim::SimMetrics s = netsim::sim_run(netsim::Scenario::add_delete(scheme, adds, deletes, seed));
        py::dict d;
        d["scheme"] = s.scheme;
        d["broadcasts"] = s.broadcasts;
        d["witness_updates"] = s.witness_updates;
        d["verify_results"] = s.verify_results;
        d["csv"] = s.csv();
        return d;
      },
      py::arg("scheme"), py::arg("adds"), py::arg("deletes") = 0, py::arg("seed") = 0);
  m.def("fit_complexity", [](const std::vector<double>& n, const std::vector<double>& y) {
    return std::string(netsim::to_string(netsim::sim_fit_complexity(n, y)));
  });
  m.def(
      "bench",
      [](const std::string& scheme, const std::vector<std::uint64_t>& sizes, double min_batch_ns) {
        netsim::BenchOptions o;
        o.min_batch_ns = min_batch_ns;
        py::list rows;
        for (const auto& r : netsim::run_bench(scheme, sizes, o)) rows.append(row_dict(r));
        return rows;
      },
      py::arg("scheme"), py::arg("sizes"), py::arg("min_batch_ns") = 2e6);
}
