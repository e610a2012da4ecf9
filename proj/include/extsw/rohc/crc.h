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

#ifndef EXTSW_ROHC_CRC_H_
#define EXTSW_ROHC_CRC_H_

#include <cstdint>
#include <span>

namespace extsw::rohc {

// CRC-8, polynomial x^8 + x^2 + x + 1, initial value 0xFF, bit order
// LSB-first. Table-driven; the test suite checks it against a bit-serial
// reference.
uint8_t crc8(std::span<const uint8_t> bytes);

// CRC-3, polynomial x^3 + x + 1, initial value 0x7, LSB-first.
uint8_t crc3(std::span<const uint8_t> bytes);

}  // namespace extsw::rohc

#endif  // EXTSW_ROHC_CRC_H_
