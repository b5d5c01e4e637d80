#include "shamfinder/punycode.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "shamfinder/codepoint.hpp"
#include "shamfinder/utf8.hpp"

namespace shamfinder {

namespace punycode {

namespace {

// Bootstring parameters for Punycode (RFC 3492 section 5).
constexpr std::uint32_t kBase = 36;
constexpr std::uint32_t kTMin = 1;
constexpr std::uint32_t kTMax = 26;
constexpr std::uint32_t kSkew = 38;
constexpr std::uint32_t kDamp = 700;
constexpr std::uint32_t kInitialBias = 72;
constexpr std::uint32_t kInitialN = 0x80;
constexpr char kDelimiter = '-';
constexpr std::uint32_t kMaxInt = std::numeric_limits<std::uint32_t>::max();

constexpr std::uint32_t decode_digit(unsigned char c) {
  if (c >= '0' && c <= '9') return c - '0' + 26;
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a';
  return kBase;
}

constexpr char encode_digit(std::uint32_t d) {
  return static_cast<char>(d < 26 ? 'a' + d : '0' + (d - 26));
}

std::uint32_t adapt(std::uint32_t delta, std::uint32_t num_points, bool first_time) {
  delta = first_time ? delta / kDamp : delta / 2;
  delta += delta / num_points;
  std::uint32_t k = 0;
  while (delta > ((kBase - kTMin) * kTMax) / 2) {
    delta /= kBase - kTMin;
    k += kBase;
  }
  return k + (kBase - kTMin + 1) * delta / (delta + kSkew);
}

std::uint32_t threshold(std::uint32_t k, std::uint32_t bias) {
  if (k <= bias) return kTMin;
  if (k >= bias + kTMax) return kTMax;
  return k - bias;
}

}  // namespace

std::u32string decode(std::string_view input) {
  using Kind = PunycodeError::Kind;
  for (char c : input)
    if (static_cast<unsigned char>(c) >= 0x80) throw PunycodeError(Kind::BadInput, "non-ASCII byte in ACE label");

  std::u32string output;
  const auto last_delim = input.rfind(kDelimiter);
  const std::size_t basic_len = last_delim == std::string_view::npos ? 0 : last_delim;
  for (std::size_t j = 0; j < basic_len; ++j) output.push_back(static_cast<unsigned char>(input[j]));

  std::uint32_t n = kInitialN;
  std::uint32_t i = 0;
  std::uint32_t bias = kInitialBias;
  std::size_t in = basic_len > 0 ? basic_len + 1 : 0;

  while (in < input.size()) {
    const std::uint32_t old_i = i;
    std::uint32_t w = 1;
    for (std::uint32_t k = kBase;; k += kBase) {
      if (in >= input.size()) throw PunycodeError(Kind::Truncated, "ACE label ends inside a delta");
      const std::uint32_t digit = decode_digit(static_cast<unsigned char>(input[in++]));
      if (digit >= kBase) throw PunycodeError(Kind::BadInput, "invalid character in ACE label");
      if (digit > (kMaxInt - i) / w) throw PunycodeError(Kind::Overflow, "delta overflow");
      i += digit * w;
      const std::uint32_t t = threshold(k, bias);
      if (digit < t) break;
      if (w > kMaxInt / (kBase - t)) throw PunycodeError(Kind::Overflow, "weight overflow");
      w *= kBase - t;
    }
    const auto out_len = static_cast<std::uint32_t>(output.size() + 1);
    bias = adapt(i - old_i, out_len, old_i == 0);
    if (i / out_len > kMaxInt - n) throw PunycodeError(Kind::Overflow, "code point overflow");
    n += i / out_len;
    i %= out_len;
    if (!is_scalar_value(n)) throw PunycodeError(Kind::BadInput, "decoded value is not a Unicode scalar");
    output.insert(output.begin() + i, static_cast<char32_t>(n));
    ++i;
  }
  return output;
}

std::string encode(std::u32string_view input) {
  using Kind = PunycodeError::Kind;
  std::string output;
  for (char32_t c : input) {
    if (!is_scalar_value(c)) throw PunycodeError(Kind::BadInput, "input is not a Unicode scalar");
    if (c < 0x80) output.push_back(static_cast<char>(c));
  }
  const auto basic = static_cast<std::uint32_t>(output.size());
  std::uint32_t handled = basic;
  if (basic > 0) output.push_back(kDelimiter);

  std::uint32_t n = kInitialN;
  std::uint32_t delta = 0;
  std::uint32_t bias = kInitialBias;
  const auto length = static_cast<std::uint32_t>(input.size());

  while (handled < length) {
    std::uint32_t m = kMaxInt;
    for (char32_t c : input)
      if (c >= n && c < m) m = c;
    if (m - n > (kMaxInt - delta) / (handled + 1)) throw PunycodeError(Kind::Overflow, "delta overflow");
    delta += (m - n) * (handled + 1);
    n = m;
    for (char32_t c : input) {
      if (c < n && ++delta == 0) throw PunycodeError(Kind::Overflow, "delta overflow");
      if (c != n) continue;
      std::uint32_t q = delta;
      for (std::uint32_t k = kBase;; k += kBase) {
        const std::uint32_t t = threshold(k, bias);
        if (q < t) break;
        output.push_back(encode_digit(t + (q - t) % (kBase - t)));
        q = (q - t) / (kBase - t);
      }
      output.push_back(encode_digit(q));
      bias = adapt(delta, handled + 1, handled == basic);
      delta = 0;
      ++handled;
    }
    ++delta;
    ++n;
  }
  return output;
}

}  // namespace punycode

bool has_ace_prefix(std::string_view label) {
  if (label.size() < kAcePrefix.size()) return false;
  for (std::size_t i = 0; i < kAcePrefix.size(); ++i) {
    char c = label[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != kAcePrefix[i]) return false;
  }
  return true;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::vector<std::string_view> DomainName::labels() const {
  std::vector<std::string_view> out;
  std::string_view s = ascii_form;
  std::size_t pos = 0;
  while (true) {
    const auto dot = s.find('.', pos);
    out.push_back(s.substr(pos, dot == std::string_view::npos ? dot : dot - pos));
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return out;
}

std::u32string DomainName::second_level() const {
  if (error) return {};
  std::string_view s = unicode_form;
  const auto last = s.rfind('.');
  if (last != std::string_view::npos) {
    s = s.substr(0, last);
    if (const auto prev = s.rfind('.'); prev != std::string_view::npos) s = s.substr(prev + 1);
  }
  return utf8::decode(s);
}

DomainName to_unicode(std::string_view domain) {
  DomainName out;
  out.ascii_form = ascii_lower(domain);
  while (!out.ascii_form.empty() && out.ascii_form.back() == '.') out.ascii_form.pop_back();
  if (out.ascii_form.empty()) {
    out.error = "empty domain";
    return out;
  }

  std::string unicode;
  const auto labels = out.labels();
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const auto label = labels[k];
    if (k) unicode.push_back('.');
    if (label.empty()) {
      out.error = "empty label";
      continue;
    }
    if (!has_ace_prefix(label)) {
      if (!utf8::is_ascii(label)) {
        try {
          utf8::decode(label);
        } catch (const std::exception& e) {
          out.error = std::string(label) + ": " + e.what();
          continue;
        }
      }
      unicode += label;
      continue;
    }
    out.is_idn = true;
    const auto body = label.substr(kAcePrefix.size());
    if (body.empty()) {
      out.error = std::string(label) + ": empty ACE body";
      continue;
    }
    try {
      unicode += utf8::encode(punycode::decode(body));
    } catch (const PunycodeError& e) {
      out.error = std::string(label) + ": " + e.what();
    }
  }
  if (!out.error) out.unicode_form = std::move(unicode);
  return out;
}

}  // namespace shamfinder
