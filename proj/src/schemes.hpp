#pragma once

#include <memory>

#include "cryptacc/scheme.hpp"

// Factories for the registry; each lives next to the module it adapts.
namespace cryptacc::detail {

std::unique_ptr<Scheme> make_bloom_scheme();
std::unique_ptr<Scheme> make_cuckoo_scheme();
std::unique_ptr<Scheme> make_rsa_scheme();
std::unique_ptr<Scheme> make_clrsab_scheme();
std::unique_ptr<Scheme> make_merkle_scheme();
std::unique_ptr<Scheme> make_async_scheme();

}  // namespace cryptacc::detail
