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

#include <extsw/packet.h>

namespace extsw {

const char *stage_tag_name(StageTag tag) {
  switch (tag) {
    case StageTag::parser: return "parser";
    case StageTag::ingress: return "ingress";
    case StageTag::egress: return "egress";
    case StageTag::deparser: default: return "deparser";
  }
}

void BitWriter::write(field_value_t value, unsigned bits) {
  for (unsigned i = bits; i > 0; i--) {
    unsigned bit = static_cast<unsigned>((value >> (i - 1)) & 1);
    if (bit_count_ % 8 == 0) out_->push_back(0);
    out_->back() |= static_cast<uint8_t>(bit << (7 - bit_count_ % 8));
    bit_count_++;
  }
}

std::optional<field_value_t> BitReader::read(unsigned bits) {
  if (bit_pos_ + bits > in_.size() * 8) return std::nullopt;
  field_value_t v = 0;
  for (unsigned i = 0; i < bits; i++) {
    unsigned byte = static_cast<unsigned>(bit_pos_ / 8);
    unsigned bit = 7 - static_cast<unsigned>(bit_pos_ % 8);
    v = (v << 1) | ((in_[byte] >> bit) & 1);
    bit_pos_++;
  }
  return v;
}

uint16_t ipv4_header_checksum(std::span<const uint8_t> header) {
  uint32_t sum = 0;
  for (size_t i = 0; i + 1 < header.size(); i += 2)
    sum += (static_cast<uint32_t>(header[i]) << 8) | header[i + 1];
  if (header.size() % 2 != 0) sum += static_cast<uint32_t>(header.back()) << 8;
  while (sum >> 16) sum = (sum & 0xFFFF) + (sum >> 16);
  return static_cast<uint16_t>(~sum & 0xFFFF);
}

bool HeaderInstance::set_field(size_t idx, field_value_t value) {
  field_value_t mask = field_mask(type_->fields[idx].bitwidth);
  fields_[idx] = value & mask;
  return (value & ~mask) != 0;
}

void HeaderInstance::serialize(std::vector<uint8_t> *out) const {
  BitWriter writer(out);
  for (size_t i = 0; i < fields_.size(); i++)
    writer.write(fields_[i], type_->fields[i].bitwidth);
}

bool HeaderInstance::deserialize(BitReader *reader) {
  for (size_t i = 0; i < fields_.size(); i++) {
    auto v = reader->read(type_->fields[i].bitwidth);
    if (!v) return false;
    fields_[i] = *v;
  }
  return true;
}

Packet::Packet(std::vector<uint8_t> buffer, uint16_t ingress_port)
    : buffer_(std::move(buffer)) {
  std_meta_.ingress_port = ingress_port;
  std_meta_.packet_length = static_cast<uint32_t>(buffer_.size());
}

void Packet::set_payload(std::span<const uint8_t> bytes) {
  buffer_.resize(payload_offset_ + bytes.size());
  std::copy(bytes.begin(), bytes.end(), buffer_.begin() + payload_offset_);
}

void Packet::reset_buffer(std::vector<uint8_t> buffer) {
  buffer_ = std::move(buffer);
  headers_.clear();
  payload_offset_ = 0;
}

HeaderInstance *Packet::header(const std::string &name) {
  for (auto &h : headers_)
    if (h.name() == name) return &h;
  return nullptr;
}

const HeaderInstance *Packet::header(const std::string &name) const {
  for (const auto &h : headers_)
    if (h.name() == name) return &h;
  return nullptr;
}

bool Packet::header_valid(const std::string &name) const {
  const HeaderInstance *h = header(name);
  return h != nullptr && h->valid();
}

HeaderInstance &Packet::add_header_instance(const ir::HeaderTypeDef *type) {
  headers_.emplace_back(type);
  return headers_.back();
}

field_value_t Packet::user_meta(const std::string &name) const {
  auto it = user_meta_.find(name);
  return it == user_meta_.end() ? 0 : it->second;
}

void Packet::set_user_meta(const std::string &name, field_value_t value) {
  user_meta_[name] = value;
}

std::optional<field_value_t> Packet::read(const FieldRef &ref) const {
  switch (ref.kind) {
    case FieldRef::Kind::user_meta:
      return user_meta(ref.field);
    case FieldRef::Kind::std_meta:
      if (ref.field == "packet_length") return std_meta_.packet_length;
      if (ref.field == "ingress_port") return std_meta_.ingress_port;
      if (ref.field == "egress_port") return std_meta_.egress_port;
      if (ref.field == "instance_type")
        return static_cast<field_value_t>(std_meta_.instance_type);
      if (ref.field == "resubmit_count") return std_meta_.resubmit_count;
      return std::nullopt;
    case FieldRef::Kind::header_field: {
      const HeaderInstance *h = header(ref.header);
      if (h == nullptr || !h->valid()) return std::nullopt;
      auto idx = h->type().field_index(ref.field);
      if (!idx) return std::nullopt;
      return h->field(*idx);
    }
  }
  return std::nullopt;
}

bool Packet::write(const FieldRef &ref, field_value_t value, bool *truncated) {
  if (truncated != nullptr) *truncated = false;
  switch (ref.kind) {
    case FieldRef::Kind::user_meta:
      set_user_meta(ref.field, value);
      return true;
    case FieldRef::Kind::std_meta:
      if (ref.field == "egress_port") {
        std_meta_.egress_port = static_cast<uint16_t>(value);
        return true;
      }
      // The remaining standard fields are pipeline-owned.
      return false;
    case FieldRef::Kind::header_field: {
      HeaderInstance *h = header(ref.header);
      if (h == nullptr || !h->valid()) return false;
      auto idx = h->type().field_index(ref.field);
      if (!idx) return false;
      bool trunc = h->set_field(*idx, value);
      if (trunc) {
        truncation_count_++;
        if (truncated != nullptr) *truncated = true;
      }
      return true;
    }
  }
  return false;
}

}  // namespace extsw
