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

#ifndef EXTSW_COMMON_H_
#define EXTSW_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace extsw {

// Field values are unsigned integers of up to 128 bits; wider fields are
// rejected at config validation.
using field_value_t = unsigned __int128;

constexpr unsigned kMaxFieldWidth = 128;

// Default Ethertype marking ROHC-compressed frames (IEEE 802 local
// experimental range); overridable per switch instance.
constexpr uint16_t kDefaultRohcEthertype = 0x88B5;

inline field_value_t field_mask(unsigned width) {
  if (width >= kMaxFieldWidth) return ~field_value_t{0};
  return (field_value_t{1} << width) - 1;
}

// Hex helpers for the IR's "hexstr" values ("0x1a2b", case-insensitive,
// optional 0x prefix).
field_value_t parse_hexstr(const std::string &text);
std::string to_hexstr(field_value_t v);
std::string to_dec_string(field_value_t v);

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

struct Diagnostic {
  std::string message;
};

// A reference to a packet value: a header field ("ipv4.ttl"), user metadata
// ("meta.is_rohc") or standard metadata ("std.instance_type").
struct FieldRef {
  enum class Kind { header_field, user_meta, std_meta };
  Kind kind = Kind::header_field;
  std::string header;  // header instance name, empty for metadata
  std::string field;   // field or metadata name

  static FieldRef parse(const std::string &text);
  std::string str() const;
  bool operator==(const FieldRef &) const = default;
};

// Diagnostic counters exposed by a switch instance. Data-plane faults never
// throw; they increment one of these and drop the packet where required.
struct Counters {
  uint64_t parse_underrun = 0;
  uint64_t truncations = 0;
  uint64_t runtime_faults = 0;
  uint64_t table_miss_unreadable = 0;
  uint64_t resubmit_overflow = 0;
  uint64_t drops = 0;
  uint64_t emitted = 0;
  uint64_t resubmissions = 0;
  uint64_t recirculations = 0;
  uint64_t modify_resubmits = 0;

  // ROHC-side counters (aggregated from the codec stores).
  uint64_t rohc_no_context = 0;
  uint64_t rohc_uncompressible = 0;
  uint64_t decomp_crc_fail = 0;
  uint64_t rohc_malformed = 0;
};

}  // namespace extsw

#endif  // EXTSW_COMMON_H_
