/* Copyright 2024-present the extsw authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <extsw/common.h>

#include <algorithm>
#include <cctype>

namespace extsw {

field_value_t parse_hexstr(const std::string &text) {
  size_t i = 0;
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
    i = 2;
  if (i >= text.size())
    throw ConfigError("invalid hex value '" + text + "'");
  if (text.size() - i > 32)
    throw ConfigError("hex value '" + text + "' wider than 128 bits");
  field_value_t v = 0;
  for (; i < text.size(); i++) {
    char c = text[i];
    unsigned nibble;
    if (c >= '0' && c <= '9') nibble = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') nibble = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') nibble = static_cast<unsigned>(c - 'A' + 10);
    else throw ConfigError("invalid hex value '" + text + "'");
    v = (v << 4) | nibble;
  }
  return v;
}

std::string to_hexstr(field_value_t v) {
  static const char digits[] = "0123456789abcdef";
  if (v == 0) return "0x0";
  std::string out;
  while (v != 0) {
    out.push_back(digits[static_cast<unsigned>(v & 0xF)]);
    v >>= 4;
  }
  out += "x0";
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_dec_string(field_value_t v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

FieldRef FieldRef::parse(const std::string &text) {
  auto dot = text.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= text.size())
    throw ConfigError("malformed field reference '" + text +
                      "' (expected '<header>.<field>', 'meta.<name>' or "
                      "'std.<name>')");
  FieldRef ref;
  std::string scope = text.substr(0, dot);
  ref.field = text.substr(dot + 1);
  if (scope == "meta") {
    ref.kind = Kind::user_meta;
  } else if (scope == "std") {
    ref.kind = Kind::std_meta;
  } else {
    ref.kind = Kind::header_field;
    ref.header = scope;
  }
  return ref;
}

std::string FieldRef::str() const {
  switch (kind) {
    case Kind::user_meta: return "meta." + field;
    case Kind::std_meta: return "std." + field;
    case Kind::header_field: default: return header + "." + field;
  }
}

}  // namespace extsw
