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

#ifndef EXTSW_PACKET_H_
#define EXTSW_PACKET_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <extsw/common.h>
#include <extsw/ir.h>

namespace extsw {

enum class InstanceType : uint8_t { normal = 0, resubmitted = 1, recirculated = 2 };

enum class StageTag : uint8_t { parser, ingress, egress, deparser };

const char *stage_tag_name(StageTag tag);

// Big-endian bit-level packing used for header fields (most significant bit
// first within each byte).
class BitWriter {
 public:
  explicit BitWriter(std::vector<uint8_t> *out) : out_(out) {}
  void write(field_value_t value, unsigned bits);
  // Number of bits written so far.
  size_t bit_count() const { return bit_count_; }

 private:
  std::vector<uint8_t> *out_;
  size_t bit_count_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const uint8_t> in) : in_(in) {}
  // Reads `bits` bits; returns nullopt if the input is exhausted.
  std::optional<field_value_t> read(unsigned bits);
  size_t bit_pos() const { return bit_pos_; }

 private:
  std::span<const uint8_t> in_;
  size_t bit_pos_ = 0;
};

// RFC 1071 ones'-complement checksum over a serialized IPv4 header with the
// checksum field taken as transmitted (zero it before computing).
uint16_t ipv4_header_checksum(std::span<const uint8_t> header);

class HeaderInstance {
 public:
  HeaderInstance(const ir::HeaderTypeDef *type)
      : type_(type), fields_(type->fields.size(), 0) {}

  const std::string &name() const { return type_->name; }
  const ir::HeaderTypeDef &type() const { return *type_; }
  bool valid() const { return valid_; }
  void set_valid(bool v) { valid_ = v; }

  field_value_t field(size_t idx) const { return fields_[idx]; }
  // Stores `value` truncated to the field width; returns true when truncation
  // dropped set bits.
  bool set_field(size_t idx, field_value_t value);

  // Serializes all fields in order, appending to `out`.
  void serialize(std::vector<uint8_t> *out) const;
  // Fills fields from `reader`; false on underrun.
  bool deserialize(BitReader *reader);

 private:
  const ir::HeaderTypeDef *type_;
  bool valid_ = false;
  std::vector<field_value_t> fields_;
};

struct StandardMetadata {
  uint32_t packet_length = 0;
  uint16_t ingress_port = 0;
  uint16_t egress_port = 0;
  InstanceType instance_type = InstanceType::normal;
  uint32_t resubmit_count = 0;
};

// A packet in flight: raw bytes, parsed header instances (in extraction
// order), payload boundary and metadata. Owned by exactly one pipeline
// execution at a time.
class Packet {
 public:
  Packet(std::vector<uint8_t> buffer, uint16_t ingress_port);

  const std::vector<uint8_t> &buffer() const { return buffer_; }
  size_t payload_offset() const { return payload_offset_; }
  std::span<const uint8_t> payload() const {
    return std::span<const uint8_t>(buffer_).subspan(payload_offset_);
  }
  // Replaces the payload region; header instances and packet_length metadata
  // are untouched (the next deparse refreshes them).
  void set_payload(std::span<const uint8_t> bytes);
  // Installs a fresh buffer and resets the parse state (headers cleared,
  // payload offset zeroed).
  void reset_buffer(std::vector<uint8_t> buffer);
  void set_payload_offset(size_t off) { payload_offset_ = off; }

  std::vector<HeaderInstance> &headers() { return headers_; }
  const std::vector<HeaderInstance> &headers() const { return headers_; }
  HeaderInstance *header(const std::string &name);
  const HeaderInstance *header(const std::string &name) const;
  bool header_valid(const std::string &name) const;
  // Appends an instance for `type` (used by the parser, in extraction order).
  HeaderInstance &add_header_instance(const ir::HeaderTypeDef *type);

  StandardMetadata &std_meta() { return std_meta_; }
  const StandardMetadata &std_meta() const { return std_meta_; }
  // Unset user metadata reads as zero.
  field_value_t user_meta(const std::string &name) const;
  void set_user_meta(const std::string &name, field_value_t value);
  void clear_user_meta() { user_meta_.clear(); }

  // Reads a referenced value; nullopt when the reference names an invalid
  // header (callers decide whether that is a miss or a fault).
  std::optional<field_value_t> read(const FieldRef &ref) const;
  // Writes a referenced value; returns false on invalid-header writes.
  // `*truncated` reports a width overflow.
  bool write(const FieldRef &ref, field_value_t value, bool *truncated);

  uint64_t truncation_count() const { return truncation_count_; }

  std::vector<StageTag> &trace() { return trace_; }
  const std::vector<StageTag> &trace() const { return trace_; }
  void tag(StageTag t) { trace_.push_back(t); }

 private:
  std::vector<uint8_t> buffer_;
  std::vector<HeaderInstance> headers_;
  size_t payload_offset_ = 0;
  StandardMetadata std_meta_;
  std::map<std::string, field_value_t> user_meta_;
  uint64_t truncation_count_ = 0;
  std::vector<StageTag> trace_;
};

}  // namespace extsw

#endif  // EXTSW_PACKET_H_
