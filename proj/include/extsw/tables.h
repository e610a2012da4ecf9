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

#ifndef EXTSW_TABLES_H_
#define EXTSW_TABLES_H_

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <extsw/ir.h>
#include <extsw/packet.h>

namespace extsw {

// One key part of a table entry, interpreted per the key spec's match kind.
struct MatchDatum {
  ir::MatchKind kind = ir::MatchKind::exact;
  field_value_t value = 0;  // exact / ternary
  field_value_t mask = 0;   // ternary
  field_value_t low = 0, high = 0;  // range (inclusive)
};

struct TableEntry {
  std::vector<MatchDatum> key;
  uint32_t priority = 0;  // lower wins; ties broken by insertion order
  std::string action;
  std::vector<field_value_t> action_data;
  uint64_t handle = 0;  // insertion sequence, assigned by the table
};

struct LookupResult {
  bool hit = false;            // false -> default action
  bool miss_unreadable = false;  // an entry key field was unreadable
  const std::string *action = nullptr;
  const std::vector<field_value_t> *action_data = nullptr;
};

// A match-action table over the four match kinds. Entry sets are immutable
// snapshots swapped atomically by the control plane, so lookups never observe
// a partially updated table.
class Table {
 public:
  explicit Table(const ir::TableDef *def);

  const std::string &name() const { return def_->name; }
  const ir::TableDef &def() const { return *def_; }

  // Control plane. add_entry returns the entry handle; both throw
  // ConfigError on malformed entries (wrong arity, unknown action, capacity).
  uint64_t add_entry(TableEntry entry);
  bool remove_entry(uint64_t handle);
  void clear_entries();
  size_t entry_count() const;

  // Data plane. Reads the key fields from the packet; an unreadable field
  // selects the default action and flags miss_unreadable.
  LookupResult lookup(const Packet &pkt) const;

 private:
  struct Snapshot {
    // Sorted by (priority, handle): the first match is the winner.
    std::vector<TableEntry> entries;
    // Populated when every key part of every entry is exact: serialized key
    // bytes -> index into entries.
    std::optional<std::unordered_map<std::string, size_t>> exact_index;
  };

  std::shared_ptr<const Snapshot> snapshot() const;
  static std::shared_ptr<const Snapshot> build_snapshot(
      std::vector<TableEntry> entries);
  static bool entry_matches(const TableEntry &entry,
                            const std::vector<field_value_t> &key);

  const ir::TableDef *def_;
  uint64_t next_handle_ = 1;
  mutable std::mutex mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::vector<TableEntry> pending_;  // control-plane master copy
};

}  // namespace extsw

#endif  // EXTSW_TABLES_H_
