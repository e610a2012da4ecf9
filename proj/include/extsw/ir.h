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

#ifndef EXTSW_IR_H_
#define EXTSW_IR_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <extsw/common.h>

namespace extsw::ir {

struct FieldDef {
  std::string name;
  unsigned bitwidth = 0;
  bool operator==(const FieldDef &) const = default;
};

struct HeaderTypeDef {
  std::string name;
  std::vector<FieldDef> fields;

  unsigned total_bits() const;
  unsigned byte_width() const { return total_bits() / 8; }
  // Index of a field by name, or nullopt.
  std::optional<size_t> field_index(const std::string &name) const;
  bool operator==(const HeaderTypeDef &) const = default;
};

// One row of a parser state's transition list. A row without a select
// reference is a default transition. `next` is a state name or "accept".
struct ParserTransition {
  std::optional<FieldRef> select;
  field_value_t value = 0;
  std::string next;
  bool operator==(const ParserTransition &) const = default;
};

struct ParserStateDef {
  std::string name;
  std::vector<std::string> extracts;  // header type names, in order
  // Metadata assignments applied on entering the state.
  std::vector<std::pair<std::string, field_value_t>> sets;
  std::vector<ParserTransition> transitions;
  bool operator==(const ParserStateDef &) const = default;
};

enum class MatchKind { exact, ternary, range, wildcard, invalid };

MatchKind parse_match_kind(const std::string &text);
std::string match_kind_name(MatchKind kind);

struct TableKeySpec {
  FieldRef target;
  MatchKind kind = MatchKind::exact;
  bool operator==(const TableKeySpec &) const = default;
};

struct TableDef {
  std::string name;
  std::vector<TableKeySpec> keys;
  std::vector<std::string> actions;
  std::string default_action;
  std::vector<field_value_t> default_action_data;
  size_t max_entries = 1024;
  bool operator==(const TableDef &) const = default;
};

// A primitive-call parameter inside an action body.
struct ActionParam {
  enum class Kind { field, header, literal, runtime, ext };
  Kind kind = Kind::literal;
  FieldRef ref;        // field
  std::string name;    // header or extern instance name
  field_value_t value = 0;  // literal
  size_t index = 0;    // runtime_data index
  bool operator==(const ActionParam &) const = default;
};

struct PrimitiveCall {
  std::string op;
  std::vector<ActionParam> parameters;
  bool operator==(const PrimitiveCall &) const = default;
};

struct RuntimeParamDef {
  std::string name;
  unsigned bitwidth = 0;
  bool operator==(const RuntimeParamDef &) const = default;
};

struct ActionDef {
  std::string name;
  std::vector<RuntimeParamDef> runtime_data;
  std::vector<PrimitiveCall> primitives;
  bool operator==(const ActionDef &) const = default;
};

struct ExternAttributeValue {
  std::string name;
  field_value_t value = 0;
  bool operator==(const ExternAttributeValue &) const = default;
};

struct ExternInstanceDef {
  std::string name;
  std::string type_name;
  std::vector<ExternAttributeValue> attribute_values;
  bool operator==(const ExternInstanceDef &) const = default;
};

struct PipelineOptions {
  unsigned resubmit_limit = 4;
  uint16_t rohc_ethertype = kDefaultRohcEthertype;
  unsigned rohc_max_contexts = 16;   // native-mode store capacity
  unsigned rohc_ir_refresh = 100;    // native-mode IR refresh period
  bool operator==(const PipelineOptions &) const = default;
};

struct PipelineConfig {
  std::vector<HeaderTypeDef> header_types;
  std::vector<ParserStateDef> parser_states;
  std::vector<TableDef> tables;
  std::vector<ActionDef> actions;
  std::vector<ExternInstanceDef> extern_instances;
  std::vector<std::string> ingress_apply;  // table names, in apply order
  std::vector<std::string> egress_apply;
  PipelineOptions options;

  // Unknown top-level keys, preserved verbatim for round-tripping.
  std::map<std::string, std::string> unknown_keys;
  // Warnings produced while loading (unknown keys etc).
  std::vector<Diagnostic> load_warnings;

  const HeaderTypeDef *header_type(const std::string &name) const;
  const ParserStateDef *parser_state(const std::string &name) const;
  const TableDef *table(const std::string &name) const;
  const ActionDef *action(const std::string &name) const;
  const ExternInstanceDef *extern_instance(const std::string &name) const;

  bool operator==(const PipelineConfig &other) const;
};

// Parses and structurally checks a JSON IR document. Throws ConfigError with
// line/column on malformed JSON and on missing mandatory keys
// ("header_types", "parser_states"); "actions", "extern_instances", "tables"
// and the pipelines default to empty.
PipelineConfig load_config(const std::string &text);

// Re-serializes a config; load_config(serialize_config(c)) == c.
std::string serialize_config(const PipelineConfig &cfg);

// Cross-reference and invariant checks. Returns an empty list iff the config
// is executable: parser graph connected from "start", headers byte-aligned,
// match kinds legal, all referenced names resolve.
std::vector<Diagnostic> validate_config(const PipelineConfig &cfg);

}  // namespace extsw::ir

#endif  // EXTSW_IR_H_
