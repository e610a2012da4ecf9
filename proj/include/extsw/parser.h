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

#ifndef EXTSW_PARSER_H_
#define EXTSW_PARSER_H_

#include <vector>

#include <extsw/ir.h>
#include <extsw/packet.h>

namespace extsw {

enum class ParseOutcome {
  accepted,
  underrun,  // buffer exhausted mid-extraction; packet must be dropped
};

// Runs the parser state machine over the packet bytes: header instances are
// extracted big-endian in state order, select transitions compare extracted
// values against case values falling through to the default row, and a state
// with no matching row accepts implicitly. On return the payload offset is
// the first unparsed byte.
ParseOutcome run_parser(const ir::PipelineConfig &cfg, Packet *pkt);

// Serializes valid headers in extraction order followed by the payload bytes.
std::vector<uint8_t> deparse_bytes(const Packet &pkt);

// deparse_bytes plus buffer/packet_length update on the packet.
void deparse(Packet *pkt);

}  // namespace extsw

#endif  // EXTSW_PARSER_H_
