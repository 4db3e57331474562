#include <algorithm>

#include "../schemes.hpp"

namespace cryptacc {

namespace {

const std::vector<std::unique_ptr<Scheme>>& registry() {
  static const auto schemes = [] {
    std::vector<std::unique_ptr<Scheme>> v;
    v.push_back(detail::make_bloom_scheme());
    v.push_back(detail::make_cuckoo_scheme());
    v.push_back(detail::make_rsa_scheme());
    v.push_back(detail::make_clrsab_scheme());
    v.push_back(detail::make_merkle_scheme());
    v.push_back(detail::make_async_scheme());
    return v;
  }();
  return schemes;
}

}  // namespace

const Scheme& scheme_by_name(std::string_view name) {
  for (const auto& s : registry())
    if (s->name() == name) return *s;
  throw AccumulatorError(ErrorCode::unsupported_scheme, "no scheme named '" + std::string(name) + "'");
}

std::vector<std::string> scheme_names() {
  std::vector<std::string> out;
  for (const auto& s : registry()) out.push_back(s->name());
  return out;
}

}  // namespace cryptacc
