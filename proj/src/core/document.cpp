#include "cryptacc/document.hpp"

#include <algorithm>
#include <charconv>

#include "cryptacc/error.hpp"

namespace cryptacc {

namespace {

constexpr std::string_view kMagic = "cryptacc-doc";

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
  });
}

bool valid_value(std::string_view value) {
  return std::all_of(value.begin(), value.end(), [](char c) { return c >= 0x20 && c < 0x7f; });
}

[[noreturn]] void parse_fail(const std::string& what) {
  throw AccumulatorError(ErrorCode::parse_error, what);
}

}  // namespace

Document& Document::set(std::string_view key, std::string_view value) {
  if (!valid_key(key)) parse_fail("invalid document key '" + std::string(key) + "'");
  if (!valid_value(value)) parse_fail("invalid document value for '" + std::string(key) + "'");
  for (auto& [k, v] : fields_) {
    if (k == key) {
      v = value;
      return *this;
    }
  }
  fields_.emplace_back(key, value);
  return *this;
}

Document& Document::set_u64(std::string_view key, std::uint64_t value) {
  return set(key, std::to_string(value));
}

Document& Document::set_list(std::string_view key, const std::vector<std::string>& items) {
  std::string joined;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].find(',') != std::string::npos) parse_fail("list item contains ','");
    if (i) joined.push_back(',');
    joined += items[i];
  }
  return set(key, joined);
}

bool Document::has(std::string_view key) const { return find(key).has_value(); }

std::optional<std::string> Document::find(std::string_view key) const {
  for (const auto& [k, v] : fields_)
    if (k == key) return v;
  return std::nullopt;
}

const std::string& Document::get(std::string_view key) const {
  for (const auto& [k, v] : fields_)
    if (k == key) return v;
  parse_fail("missing field '" + std::string(key) + "'");
}

std::uint64_t Document::get_u64(std::string_view key) const {
  const std::string& v = get(key);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    parse_fail("field '" + std::string(key) + "' is not an unsigned integer");
  return out;
}

std::vector<std::string> Document::get_list(std::string_view key) const {
  const std::string& v = get(key);
  std::vector<std::string> out;
  if (v.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = v.find(',', start);
    out.push_back(v.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Document& Document::embed(std::string_view prefix, const Document& child) {
  for (const auto& [k, v] : child.fields_) set(std::string(prefix) + "." + k, v);
  return *this;
}

Document Document::extract(std::string_view prefix) const {
  Document out;
  std::string p = std::string(prefix) + ".";
  for (const auto& [k, v] : fields_)
    if (k.size() > p.size() && k.compare(0, p.size(), p) == 0) out.fields_.emplace_back(k.substr(p.size()), v);
  return out;
}

std::string Document::encode() const {
  std::string out = std::string(kMagic) + " " + std::to_string(kVersion) + "\n";
  for (const auto& [k, v] : fields_) {
    out += k;
    out.push_back('=');
    out += v;
    out.push_back('\n');
  }
  return out;
}

Document Document::decode(std::string_view text) {
  auto next_line = [&text]() -> std::optional<std::string_view> {
    if (text.empty()) return std::nullopt;
    auto nl = text.find('\n');
    if (nl == std::string_view::npos) parse_fail("document must end with a newline");
    auto line = text.substr(0, nl);
    text.remove_prefix(nl + 1);
    return line;
  };

  auto header = next_line();
  std::string expected = std::string(kMagic) + " " + std::to_string(kVersion);
  if (!header || *header != expected) parse_fail("missing or unsupported document header");

  Document doc;
  while (auto line = next_line()) {
    auto eq = line->find('=');
    if (eq == std::string_view::npos) parse_fail("line without '='");
    auto key = line->substr(0, eq);
    if (doc.has(key)) parse_fail("duplicate field '" + std::string(key) + "'");
    doc.set(key, line->substr(eq + 1));
  }
  return doc;
}

}  // namespace cryptacc
