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

#include <extsw/tables.h>

#include <algorithm>

namespace extsw {

namespace {

std::string serialize_key(const std::vector<field_value_t> &key) {
  std::string out;
  out.reserve(key.size() * 16);
  for (field_value_t v : key)
    for (int shift = 120; shift >= 0; shift -= 8)
      out.push_back(static_cast<char>((v >> shift) & 0xFF));
  return out;
}

}  // namespace

Table::Table(const ir::TableDef *def)
    : def_(def), snapshot_(build_snapshot({})) {}

uint64_t Table::add_entry(TableEntry entry) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (entry.key.size() != def_->keys.size())
    throw ConfigError("table " + def_->name + ": entry has " +
                      std::to_string(entry.key.size()) + " key parts, spec has " +
                      std::to_string(def_->keys.size()));
  for (size_t i = 0; i < entry.key.size(); i++)
    if (entry.key[i].kind != def_->keys[i].kind)
      throw ConfigError("table " + def_->name + ": key part " +
                        std::to_string(i) + " match kind mismatch");
  if (std::find(def_->actions.begin(), def_->actions.end(), entry.action) ==
      def_->actions.end())
    throw ConfigError("table " + def_->name + ": action \"" + entry.action +
                      "\" not allowed");
  if (pending_.size() >= def_->max_entries)
    throw ConfigError("table " + def_->name + " full (max_entries=" +
                      std::to_string(def_->max_entries) + ")");
  entry.handle = next_handle_++;
  uint64_t handle = entry.handle;
  pending_.push_back(std::move(entry));
  snapshot_ = build_snapshot(pending_);
  return handle;
}

bool Table::remove_entry(uint64_t handle) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = std::find_if(pending_.begin(), pending_.end(),
                         [&](const TableEntry &e) { return e.handle == handle; });
  if (it == pending_.end()) return false;
  pending_.erase(it);
  snapshot_ = build_snapshot(pending_);
  return true;
}

void Table::clear_entries() {
  std::lock_guard<std::mutex> lock(mutex_);
  pending_.clear();
  snapshot_ = build_snapshot(pending_);
}

size_t Table::entry_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return pending_.size();
}

std::shared_ptr<const Table::Snapshot> Table::snapshot() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return snapshot_;
}

std::shared_ptr<const Table::Snapshot> Table::build_snapshot(
    std::vector<TableEntry> entries) {
  auto snap = std::make_shared<Snapshot>();
  std::stable_sort(entries.begin(), entries.end(),
                   [](const TableEntry &a, const TableEntry &b) {
                     if (a.priority != b.priority) return a.priority < b.priority;
                     return a.handle < b.handle;
                   });
  snap->entries = std::move(entries);

  bool all_exact = true;
  for (const auto &e : snap->entries)
    for (const auto &d : e.key)
      if (d.kind != ir::MatchKind::exact) all_exact = false;
  if (all_exact && !snap->entries.empty()) {
    snap->exact_index.emplace();
    for (size_t i = 0; i < snap->entries.size(); i++) {
      std::vector<field_value_t> key;
      for (const auto &d : snap->entries[i].key) key.push_back(d.value);
      // entries are in winner order; keep the first occurrence
      snap->exact_index->try_emplace(serialize_key(key), i);
    }
  }
  return snap;
}

bool Table::entry_matches(const TableEntry &entry,
                          const std::vector<field_value_t> &key) {
  for (size_t i = 0; i < entry.key.size(); i++) {
    const MatchDatum &d = entry.key[i];
    field_value_t v = key[i];
    switch (d.kind) {
      case ir::MatchKind::exact:
        if (v != d.value) return false;
        break;
      case ir::MatchKind::ternary:
        if ((v & d.mask) != (d.value & d.mask)) return false;
        break;
      case ir::MatchKind::range:
        if (v < d.low || v > d.high) return false;
        break;
      case ir::MatchKind::wildcard:
        break;
      case ir::MatchKind::invalid:
        return false;
    }
  }
  return true;
}

LookupResult Table::lookup(const Packet &pkt) const {
  LookupResult result;
  result.action = &def_->default_action;
  result.action_data = &def_->default_action_data;

  std::vector<field_value_t> key;
  key.reserve(def_->keys.size());
  for (const auto &spec : def_->keys) {
    if (spec.kind == ir::MatchKind::wildcard) {
      // wildcard parts match anything; the value is never read
      key.push_back(0);
      continue;
    }
    auto v = pkt.read(spec.target);
    if (!v) {
      result.miss_unreadable = true;
      return result;
    }
    key.push_back(*v);
  }

  auto snap = snapshot();
  if (snap->exact_index) {
    auto it = snap->exact_index->find(serialize_key(key));
    if (it == snap->exact_index->end()) return result;
    const TableEntry &e = snap->entries[it->second];
    result.hit = true;
    result.action = &e.action;
    result.action_data = &e.action_data;
    return result;
  }

  for (const auto &e : snap->entries) {
    if (entry_matches(e, key)) {
      result.hit = true;
      result.action = &e.action;
      result.action_data = &e.action_data;
      return result;
    }
  }
  return result;
}

}  // namespace extsw
