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

#ifndef EXTSW_ROHC_WLSB_H_
#define EXTSW_ROHC_WLSB_H_

#include <cstdint>
#include <optional>
#include <span>

namespace extsw::rohc {

struct WlsbEncoding {
  unsigned k = 0;      // transmitted bit count
  uint64_t lsb = 0;    // v mod 2^k
};

// Window-based LSB encoding: k is the minimum bit count such that for every
// reference in the window, v lies in the interval
// [ref - p, ref + 2^k - 1 - p] modulo 2^field_width. k = field_width always
// suffices, so nullopt only occurs on an empty window.
std::optional<WlsbEncoding> wlsb_encode(uint64_t v,
                                        std::span<const uint64_t> window,
                                        unsigned p, unsigned field_width);

// Inverse: the unique value in [ref - p, ref + 2^k - 1 - p] (mod
// 2^field_width) congruent to lsb modulo 2^k.
uint64_t wlsb_decode(uint64_t lsb, unsigned k, uint64_t ref, unsigned p,
                     unsigned field_width);

}  // namespace extsw::rohc

#endif  // EXTSW_ROHC_WLSB_H_
