#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shamfinder/error.hpp"

namespace shamfinder {

class PunycodeError : public Error {
public:
  enum class Kind { BadInput, Overflow, Truncated };

  PunycodeError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

namespace punycode {

/// RFC 3492 decoding of an ACE body (the `xn--` prefix already removed).
std::u32string decode(std::string_view ace_body);

/// RFC 3492 encoding. Does not add the ACE prefix.
std::string encode(std::u32string_view label);

}  // namespace punycode

inline constexpr std::string_view kAcePrefix = "xn--";

bool has_ace_prefix(std::string_view label);

/// A domain in both its ASCII (wire) and Unicode (display) forms.
struct DomainName {
  std::string ascii_form;    // lowercased, trailing dot removed
  std::string unicode_form;  // UTF-8; empty when `error` is set
  bool is_idn = false;
  std::optional<std::string> error;

  bool decodable() const { return !error.has_value(); }

  std::vector<std::string_view> labels() const;

  /// The label directly left of the TLD (the only label for a bare name),
  /// decoded to scalar values. Empty when undecodable.
  std::u32string second_level() const;

  bool operator==(const DomainName&) const = default;
};

/// Never throws; failures are reported through `DomainName::error`.
DomainName to_unicode(std::string_view domain);

/// Lowercases ASCII letters only.
std::string ascii_lower(std::string_view s);

}  // namespace shamfinder
