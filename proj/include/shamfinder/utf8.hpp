#pragma once

#include <string>
#include <string_view>

#include "shamfinder/codepoint.hpp"

namespace shamfinder::utf8 {

// Throws shamfinder::Error on ill-formed input (overlong forms, surrogates,
// truncated sequences).
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);
void append(std::string& out, CodePoint cp);

bool is_ascii(std::string_view bytes);

}  // namespace shamfinder::utf8
