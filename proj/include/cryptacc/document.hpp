#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cryptacc {

// Canonical text encoding shared by every file the library reads or writes.
//
//   cryptacc-doc 1
//   kind=state
//   scheme=rsa
//   key.modulus=3f1c...
//
// Fields keep insertion order, so a given sequence of set() calls always
// encodes to the same bytes. Keys are [a-z0-9_.]+; values are printable
// ASCII without newlines.
class Document {
 public:
  static constexpr int kVersion = 1;

  Document() = default;
  explicit Document(std::string_view kind) { set("kind", kind); }

  // Replaces in place when the key exists, otherwise appends.
  Document& set(std::string_view key, std::string_view value);
  Document& set_u64(std::string_view key, std::uint64_t value);
  Document& set_list(std::string_view key, const std::vector<std::string>& items);

  bool has(std::string_view key) const;
  const std::string& get(std::string_view key) const;  // throws parse_error when absent
  std::optional<std::string> find(std::string_view key) const;
  std::uint64_t get_u64(std::string_view key) const;
  std::vector<std::string> get_list(std::string_view key) const;

  // Copies every field under "<prefix>." into this document.
  Document& embed(std::string_view prefix, const Document& child);
  // Fields under "<prefix>." with the prefix stripped.
  Document extract(std::string_view prefix) const;

  const std::vector<std::pair<std::string, std::string>>& fields() const noexcept { return fields_; }
  bool empty() const noexcept { return fields_.empty(); }

  std::string encode() const;
  static Document decode(std::string_view text);

  bool operator==(const Document&) const = default;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

}  // namespace cryptacc
