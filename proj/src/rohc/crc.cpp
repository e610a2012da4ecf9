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

#include <extsw/rohc/crc.h>

#include <array>

namespace extsw::rohc {

namespace {

// Reflected form of x^8 + x^2 + x + 1 for LSB-first processing.
constexpr uint8_t kCrc8ReflectedPoly = 0xE0;
// Reflected form of x^3 + x + 1 over 3 bits.
constexpr uint8_t kCrc3ReflectedPoly = 0x6;

constexpr std::array<uint8_t, 256> make_crc8_table() {
  std::array<uint8_t, 256> table{};
  for (unsigned i = 0; i < 256; i++) {
    uint8_t crc = static_cast<uint8_t>(i);
    for (int bit = 0; bit < 8; bit++)
      crc = (crc & 1) ? static_cast<uint8_t>((crc >> 1) ^ kCrc8ReflectedPoly)
                      : static_cast<uint8_t>(crc >> 1);
    table[i] = crc;
  }
  return table;
}

constexpr auto kCrc8Table = make_crc8_table();

}  // namespace

uint8_t crc8(std::span<const uint8_t> bytes) {
  uint8_t crc = 0xFF;
  for (uint8_t b : bytes) crc = kCrc8Table[crc ^ b];
  return crc;
}

uint8_t crc3(std::span<const uint8_t> bytes) {
  uint8_t crc = 0x7;
  for (uint8_t b : bytes) {
    for (int bit = 0; bit < 8; bit++) {
      uint8_t in = static_cast<uint8_t>((b >> bit) & 1);
      if ((crc ^ in) & 1)
        crc = static_cast<uint8_t>(((crc >> 1) ^ kCrc3ReflectedPoly) & 0x7);
      else
        crc = static_cast<uint8_t>(crc >> 1);
    }
  }
  return crc & 0x7;
}

}  // namespace extsw::rohc
