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

#include <extsw/parser.h>

namespace extsw {

ParseOutcome run_parser(const ir::PipelineConfig &cfg, Packet *pkt) {
  const ir::ParserStateDef *state = cfg.parser_state("start");
  BitReader reader(pkt->buffer());

  while (state != nullptr) {
    for (const auto &type_name : state->extracts) {
      const ir::HeaderTypeDef *type = cfg.header_type(type_name);
      HeaderInstance &inst = pkt->add_header_instance(type);
      if (!inst.deserialize(&reader)) return ParseOutcome::underrun;
      inst.set_valid(true);
    }
    for (const auto &[name, value] : state->sets) pkt->set_user_meta(name, value);

    const ir::ParserStateDef *next = nullptr;
    bool accept = true;
    for (const auto &tr : state->transitions) {
      bool taken = false;
      if (!tr.select) {
        taken = true;  // default row
      } else {
        auto v = pkt->read(*tr.select);
        taken = v.has_value() && *v == tr.value;
      }
      if (taken) {
        if (tr.next != "accept") {
          next = cfg.parser_state(tr.next);
          accept = false;
        }
        break;
      }
    }
    if (accept) break;
    state = next;
  }

  // Extraction is byte-aligned (header types are), so bit_pos is a multiple
  // of 8 here.
  pkt->set_payload_offset(reader.bit_pos() / 8);
  return ParseOutcome::accepted;
}

std::vector<uint8_t> deparse_bytes(const Packet &pkt) {
  std::vector<uint8_t> out;
  out.reserve(pkt.buffer().size());
  for (const auto &h : pkt.headers())
    if (h.valid()) h.serialize(&out);
  auto payload = pkt.payload();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

void deparse(Packet *pkt) {
  std::vector<uint8_t> bytes = deparse_bytes(*pkt);
  size_t header_bytes = bytes.size() - pkt->payload().size();
  // Swap in the serialized buffer without touching the header instances;
  // the payload now starts right after the emitted headers.
  std::vector<HeaderInstance> saved = std::move(pkt->headers());
  pkt->reset_buffer(std::move(bytes));
  pkt->headers() = std::move(saved);
  pkt->set_payload_offset(header_bytes);
  pkt->std_meta().packet_length = static_cast<uint32_t>(pkt->buffer().size());
}

}  // namespace extsw
