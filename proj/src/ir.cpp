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

#include <extsw/ir.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace extsw::ir {

using nlohmann::json;

namespace {

// nlohmann reports a byte offset; convert it to line/column for diagnostics.
std::pair<size_t, size_t> offset_to_line_col(const std::string &text,
                                             size_t byte_pos) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < byte_pos && i < text.size(); i++) {
    if (text[i] == '\n') {
      line++;
      col = 1;
    } else {
      col++;
    }
  }
  return {line, col};
}

const json &require_key(const json &obj, const char *key,
                        const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ConfigError("schema error: missing key \"" + std::string(key) +
                      "\" in " + where);
  return *it;
}

std::string require_string(const json &obj, const char *key,
                           const std::string &where) {
  const json &v = require_key(obj, key, where);
  if (!v.is_string())
    throw ConfigError("schema error: key \"" + std::string(key) + "\" in " +
                      where + " must be a string");
  return v.get<std::string>();
}

field_value_t value_from_json(const json &v, const std::string &where) {
  if (v.is_string()) return parse_hexstr(v.get<std::string>());
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  throw ConfigError("schema error: value in " + where +
                    " must be a hex string or unsigned integer");
}

ActionParam param_from_json(const json &p, const std::string &where) {
  std::string type = require_string(p, "type", where);
  ActionParam out;
  if (type == "field" || type == "metadata") {
    std::string ref = require_string(p, "value", where);
    out.kind = ActionParam::Kind::field;
    out.ref = (type == "metadata") ? FieldRef::parse("meta." + ref)
                                   : FieldRef::parse(ref);
  } else if (type == "header") {
    out.kind = ActionParam::Kind::header;
    out.name = require_string(p, "value", where);
  } else if (type == "hexstr") {
    out.kind = ActionParam::Kind::literal;
    out.value = value_from_json(require_key(p, "value", where), where);
  } else if (type == "runtime_data") {
    out.kind = ActionParam::Kind::runtime;
    const json &v = require_key(p, "value", where);
    if (!v.is_number_unsigned())
      throw ConfigError("schema error: runtime_data index in " + where +
                        " must be an unsigned integer");
    out.index = v.get<size_t>();
  } else if (type == "extern") {
    out.kind = ActionParam::Kind::ext;
    out.name = require_string(p, "value", where);
  } else {
    throw ConfigError("schema error: unknown parameter type \"" + type +
                      "\" in " + where);
  }
  return out;
}

json param_to_json(const ActionParam &p) {
  json out;
  switch (p.kind) {
    case ActionParam::Kind::field:
      out["type"] = "field";
      out["value"] = p.ref.str();
      break;
    case ActionParam::Kind::header:
      out["type"] = "header";
      out["value"] = p.name;
      break;
    case ActionParam::Kind::literal:
      out["type"] = "hexstr";
      out["value"] = to_hexstr(p.value);
      break;
    case ActionParam::Kind::runtime:
      out["type"] = "runtime_data";
      out["value"] = p.index;
      break;
    case ActionParam::Kind::ext:
      out["type"] = "extern";
      out["value"] = p.name;
      break;
  }
  return out;
}

const std::set<std::string> kKnownTopLevelKeys = {
    "header_types", "parser_states", "tables",  "actions",
    "extern_instances", "ingress",  "egress",  "pipeline_options"};

const std::set<std::string> kStdMetaNames = {
    "packet_length", "ingress_port", "egress_port", "instance_type",
    "resubmit_count"};

}  // namespace

unsigned HeaderTypeDef::total_bits() const {
  unsigned total = 0;
  for (const auto &f : fields) total += f.bitwidth;
  return total;
}

std::optional<size_t> HeaderTypeDef::field_index(const std::string &n) const {
  for (size_t i = 0; i < fields.size(); i++)
    if (fields[i].name == n) return i;
  return std::nullopt;
}

MatchKind parse_match_kind(const std::string &text) {
  if (text == "exact") return MatchKind::exact;
  if (text == "ternary") return MatchKind::ternary;
  if (text == "range") return MatchKind::range;
  if (text == "wildcard") return MatchKind::wildcard;
  return MatchKind::invalid;
}

std::string match_kind_name(MatchKind kind) {
  switch (kind) {
    case MatchKind::exact: return "exact";
    case MatchKind::ternary: return "ternary";
    case MatchKind::range: return "range";
    case MatchKind::wildcard: return "wildcard";
    case MatchKind::invalid: default: return "invalid";
  }
}

#define EXTSW_IR_LOOKUP(member)                        \
  for (const auto &item : member)                      \
    if (item.name == name) return &item;               \
  return nullptr

const HeaderTypeDef *PipelineConfig::header_type(const std::string &name) const {
  EXTSW_IR_LOOKUP(header_types);
}
const ParserStateDef *PipelineConfig::parser_state(const std::string &name) const {
  EXTSW_IR_LOOKUP(parser_states);
}
const TableDef *PipelineConfig::table(const std::string &name) const {
  EXTSW_IR_LOOKUP(tables);
}
const ActionDef *PipelineConfig::action(const std::string &name) const {
  EXTSW_IR_LOOKUP(actions);
}
const ExternInstanceDef *PipelineConfig::extern_instance(
    const std::string &name) const {
  EXTSW_IR_LOOKUP(extern_instances);
}

#undef EXTSW_IR_LOOKUP

bool PipelineConfig::operator==(const PipelineConfig &other) const {
  return header_types == other.header_types &&
         parser_states == other.parser_states && tables == other.tables &&
         actions == other.actions &&
         extern_instances == other.extern_instances &&
         ingress_apply == other.ingress_apply &&
         egress_apply == other.egress_apply && options == other.options &&
         unknown_keys == other.unknown_keys;
}

PipelineConfig load_config(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    auto [line, col] = offset_to_line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream msg;
    msg << "JSON parse error at line " << line << ", column " << col << ": "
        << e.what();
    throw ConfigError(msg.str());
  }
  if (!doc.is_object())
    throw ConfigError("schema error: top-level JSON value must be an object");

  PipelineConfig cfg;

  const json &header_types = require_key(doc, "header_types", "config");
  for (const auto &ht : header_types) {
    HeaderTypeDef def;
    def.name = require_string(ht, "name", "header_types");
    for (const auto &f : require_key(ht, "fields", "header type " + def.name)) {
      if (!f.is_array() || f.size() != 2 || !f[0].is_string() ||
          !f[1].is_number_unsigned())
        throw ConfigError("schema error: fields of header type " + def.name +
                          " must be [name, bitwidth] pairs");
      def.fields.push_back({f[0].get<std::string>(), f[1].get<unsigned>()});
    }
    cfg.header_types.push_back(std::move(def));
  }

  const json &states = require_key(doc, "parser_states", "config");
  for (const auto &st : states) {
    ParserStateDef def;
    def.name = require_string(st, "name", "parser_states");
    std::string where = "parser state " + def.name;
    if (st.contains("extracts"))
      for (const auto &e : st["extracts"]) def.extracts.push_back(e.get<std::string>());
    if (st.contains("sets"))
      for (const auto &s : st["sets"]) {
        if (!s.is_array() || s.size() != 2)
          throw ConfigError("schema error: sets of " + where +
                            " must be [\"meta.<name>\", value] pairs");
        FieldRef ref = FieldRef::parse(s[0].get<std::string>());
        if (ref.kind != FieldRef::Kind::user_meta)
          throw ConfigError("schema error: parser sets may only assign user "
                            "metadata (" + where + ")");
        def.sets.emplace_back(ref.field, value_from_json(s[1], where));
      }
    if (st.contains("transitions"))
      for (const auto &t : st["transitions"]) {
        ParserTransition tr;
        tr.next = require_string(t, "next", where);
        if (t.contains("select")) {
          tr.select = FieldRef::parse(t["select"].get<std::string>());
          tr.value = value_from_json(require_key(t, "value", where), where);
        }
        def.transitions.push_back(std::move(tr));
      }
    cfg.parser_states.push_back(std::move(def));
  }

  if (doc.contains("tables"))
    for (const auto &t : doc["tables"]) {
      TableDef def;
      def.name = require_string(t, "name", "tables");
      std::string where = "table " + def.name;
      if (t.contains("keys"))
        for (const auto &k : t["keys"]) {
          TableKeySpec spec;
          spec.target = FieldRef::parse(require_string(k, "target", where));
          spec.kind = parse_match_kind(require_string(k, "match_kind", where));
          def.keys.push_back(std::move(spec));
        }
      for (const auto &a : require_key(t, "actions", where))
        def.actions.push_back(a.get<std::string>());
      def.default_action = require_string(t, "default_action", where);
      if (t.contains("default_action_data"))
        for (const auto &v : t["default_action_data"])
          def.default_action_data.push_back(value_from_json(v, where));
      if (t.contains("max_entries"))
        def.max_entries = t["max_entries"].get<size_t>();
      cfg.tables.push_back(std::move(def));
    }

  if (doc.contains("actions"))
    for (const auto &a : doc["actions"]) {
      ActionDef def;
      def.name = require_string(a, "name", "actions");
      std::string where = "action " + def.name;
      if (a.contains("runtime_data"))
        for (const auto &rd : a["runtime_data"])
          def.runtime_data.push_back(
              {require_string(rd, "name", where),
               require_key(rd, "bitwidth", where).get<unsigned>()});
      if (a.contains("primitives"))
        for (const auto &p : a["primitives"]) {
          PrimitiveCall call;
          call.op = require_string(p, "op", where);
          if (p.contains("parameters"))
            for (const auto &param : p["parameters"])
              call.parameters.push_back(param_from_json(param, where));
          def.primitives.push_back(std::move(call));
        }
      cfg.actions.push_back(std::move(def));
    }

  if (doc.contains("extern_instances"))
    for (const auto &e : doc["extern_instances"]) {
      ExternInstanceDef def;
      def.name = require_string(e, "name", "extern_instances");
      def.type_name = require_string(e, "type", "extern instance " + def.name);
      if (e.contains("attribute_values"))
        for (const auto &av : e["attribute_values"]) {
          std::string where = "extern instance " + def.name;
          ExternAttributeValue attr;
          attr.name = require_string(av, "name", where);
          attr.value = value_from_json(require_key(av, "value", where), where);
          def.attribute_values.push_back(std::move(attr));
        }
      cfg.extern_instances.push_back(std::move(def));
    }

  auto load_apply = [&](const char *key, std::vector<std::string> *out) {
    if (!doc.contains(key)) return;
    const json &pipe = doc[key];
    if (pipe.contains("apply"))
      for (const auto &t : pipe["apply"]) out->push_back(t.get<std::string>());
  };
  load_apply("ingress", &cfg.ingress_apply);
  load_apply("egress", &cfg.egress_apply);

  if (doc.contains("pipeline_options")) {
    const json &opt = doc["pipeline_options"];
    if (opt.contains("resubmit_limit"))
      cfg.options.resubmit_limit = opt["resubmit_limit"].get<unsigned>();
    if (opt.contains("rohc_ethertype"))
      cfg.options.rohc_ethertype = static_cast<uint16_t>(
          value_from_json(opt["rohc_ethertype"], "pipeline_options"));
    if (opt.contains("rohc_max_contexts"))
      cfg.options.rohc_max_contexts = opt["rohc_max_contexts"].get<unsigned>();
    if (opt.contains("rohc_ir_refresh"))
      cfg.options.rohc_ir_refresh = opt["rohc_ir_refresh"].get<unsigned>();
  }

  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (kKnownTopLevelKeys.count(it.key()) == 0) {
      cfg.unknown_keys[it.key()] = it.value().dump();
      cfg.load_warnings.push_back(
          {"warning: unknown top-level key \"" + it.key() + "\" ignored"});
    }
  }
  return cfg;
}

std::string serialize_config(const PipelineConfig &cfg) {
  json doc;
  doc["header_types"] = json::array();
  for (const auto &ht : cfg.header_types) {
    json j;
    j["name"] = ht.name;
    j["fields"] = json::array();
    for (const auto &f : ht.fields) j["fields"].push_back({f.name, f.bitwidth});
    doc["header_types"].push_back(j);
  }
  doc["parser_states"] = json::array();
  for (const auto &st : cfg.parser_states) {
    json j;
    j["name"] = st.name;
    if (!st.extracts.empty()) j["extracts"] = st.extracts;
    if (!st.sets.empty()) {
      j["sets"] = json::array();
      for (const auto &[name, value] : st.sets)
        j["sets"].push_back({"meta." + name, to_hexstr(value)});
    }
    j["transitions"] = json::array();
    for (const auto &tr : st.transitions) {
      json t;
      if (tr.select) {
        t["select"] = tr.select->str();
        t["value"] = to_hexstr(tr.value);
      }
      t["next"] = tr.next;
      j["transitions"].push_back(t);
    }
    doc["parser_states"].push_back(j);
  }
  doc["tables"] = json::array();
  for (const auto &t : cfg.tables) {
    json j;
    j["name"] = t.name;
    j["keys"] = json::array();
    for (const auto &k : t.keys)
      j["keys"].push_back(
          {{"target", k.target.str()}, {"match_kind", match_kind_name(k.kind)}});
    j["actions"] = t.actions;
    j["default_action"] = t.default_action;
    if (!t.default_action_data.empty()) {
      j["default_action_data"] = json::array();
      for (auto v : t.default_action_data)
        j["default_action_data"].push_back(to_hexstr(v));
    }
    j["max_entries"] = t.max_entries;
    doc["tables"].push_back(j);
  }
  doc["actions"] = json::array();
  for (const auto &a : cfg.actions) {
    json j;
    j["name"] = a.name;
    j["runtime_data"] = json::array();
    for (const auto &rd : a.runtime_data)
      j["runtime_data"].push_back({{"name", rd.name}, {"bitwidth", rd.bitwidth}});
    j["primitives"] = json::array();
    for (const auto &p : a.primitives) {
      json call;
      call["op"] = p.op;
      call["parameters"] = json::array();
      for (const auto &param : p.parameters)
        call["parameters"].push_back(param_to_json(param));
      j["primitives"].push_back(call);
    }
    doc["actions"].push_back(j);
  }
  doc["extern_instances"] = json::array();
  for (const auto &e : cfg.extern_instances) {
    json j;
    j["name"] = e.name;
    j["type"] = e.type_name;
    j["attribute_values"] = json::array();
    for (const auto &av : e.attribute_values)
      j["attribute_values"].push_back({{"name", av.name},
                                       {"type", "hexstr"},
                                       {"value", to_hexstr(av.value)}});
    doc["extern_instances"].push_back(j);
  }
  doc["ingress"] = {{"apply", cfg.ingress_apply}};
  doc["egress"] = {{"apply", cfg.egress_apply}};
  doc["pipeline_options"] = {
      {"resubmit_limit", cfg.options.resubmit_limit},
      {"rohc_ethertype", to_hexstr(cfg.options.rohc_ethertype)},
      {"rohc_max_contexts", cfg.options.rohc_max_contexts},
      {"rohc_ir_refresh", cfg.options.rohc_ir_refresh}};
  for (const auto &[key, value] : cfg.unknown_keys)
    doc[key] = json::parse(value);
  return doc.dump(2);
}

namespace {

// Walks the parser graph depth-first, reporting unreachable states and
// re-extraction of a header on any path. Parser graphs are tiny; the
// path-sensitive walk memoizes on (state, extracted set) to terminate on
// cycles.
void walk_parser(const PipelineConfig &cfg, std::vector<Diagnostic> *diags,
                 std::set<std::string> *reached) {
  const ParserStateDef *start = cfg.parser_state("start");
  if (start == nullptr) return;  // reported by the caller
  std::set<std::pair<std::string, std::set<std::string>>> seen;
  std::set<std::string> reported;

  struct Frame {
    const ParserStateDef *state;
    std::set<std::string> extracted;
  };
  std::vector<Frame> stack{{start, {}}};
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert({fr.state->name, fr.extracted}).second) continue;
    reached->insert(fr.state->name);
    for (const auto &h : fr.state->extracts) {
      if (!fr.extracted.insert(h).second && reported.insert(h).second)
        diags->push_back({"parser state " + fr.state->name +
                          " re-extracts header \"" + h + "\" on some path"});
    }
    for (const auto &tr : fr.state->transitions) {
      if (tr.next == "accept") continue;
      const ParserStateDef *next = cfg.parser_state(tr.next);
      if (next != nullptr) stack.push_back({next, fr.extracted});
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate_config(const PipelineConfig &cfg) {
  std::vector<Diagnostic> diags;
  auto add = [&](const std::string &msg) { diags.push_back({msg}); };

  std::set<std::string> header_names;
  for (const auto &ht : cfg.header_types) {
    if (!header_names.insert(ht.name).second)
      add("duplicate header type \"" + ht.name + "\"");
    if (ht.total_bits() % 8 != 0)
      add("header type \"" + ht.name + "\" is not byte-aligned (" +
          std::to_string(ht.total_bits()) + " bits)");
    std::set<std::string> field_names;
    for (const auto &f : ht.fields) {
      if (!field_names.insert(f.name).second)
        add("header type \"" + ht.name + "\" has duplicate field \"" + f.name +
            "\"");
      if (f.bitwidth < 1 || f.bitwidth > kMaxFieldWidth)
        add("field \"" + ht.name + "." + f.name + "\" width " +
            std::to_string(f.bitwidth) + " outside 1..=128");
    }
  }

  auto check_ref = [&](const FieldRef &ref, const std::string &where) {
    switch (ref.kind) {
      case FieldRef::Kind::header_field: {
        const HeaderTypeDef *ht = cfg.header_type(ref.header);
        if (ht == nullptr) {
          add(where + " references unknown header \"" + ref.header + "\"");
        } else if (!ht->field_index(ref.field)) {
          add(where + " references unknown field \"" + ref.str() + "\"");
        }
        break;
      }
      case FieldRef::Kind::std_meta:
        if (kStdMetaNames.count(ref.field) == 0)
          add(where + " references unknown standard metadata \"" + ref.field +
              "\"");
        break;
      case FieldRef::Kind::user_meta:
        break;  // user metadata is open-ended, zero-initialized
    }
  };

  size_t start_count = 0;
  std::set<std::string> state_names;
  for (const auto &st : cfg.parser_states) {
    if (!state_names.insert(st.name).second)
      add("duplicate parser state \"" + st.name + "\"");
    if (st.name == "start") start_count++;
  }
  if (start_count != 1)
    add("parser must define exactly one state named \"start\"");
  for (const auto &st : cfg.parser_states) {
    std::string where = "parser state " + st.name;
    for (const auto &h : st.extracts)
      if (header_names.count(h) == 0)
        add(where + " extracts unknown header type \"" + h + "\"");
    for (const auto &tr : st.transitions) {
      if (tr.next != "accept" && cfg.parser_state(tr.next) == nullptr)
        add(where + " transitions to unknown state \"" + tr.next + "\"");
      if (tr.select) check_ref(*tr.select, where);
    }
  }
  if (start_count == 1) {
    std::set<std::string> reached;
    walk_parser(cfg, &diags, &reached);
    for (const auto &st : cfg.parser_states)
      if (reached.count(st.name) == 0)
        add("parser state \"" + st.name + "\" unreachable from start");
  }

  std::set<std::string> action_names;
  for (const auto &a : cfg.actions)
    if (!action_names.insert(a.name).second)
      add("duplicate action \"" + a.name + "\"");

  std::set<std::string> table_names;
  for (const auto &t : cfg.tables) {
    if (!table_names.insert(t.name).second)
      add("duplicate table \"" + t.name + "\"");
    std::string where = "table " + t.name;
    for (const auto &k : t.keys) {
      if (k.kind == MatchKind::invalid)
        add(where + " uses an illegal match kind");
      check_ref(k.target, where);
    }
    for (const auto &an : t.actions)
      if (action_names.count(an) == 0)
        add(where + " references missing action \"" + an + "\"");
    if (action_names.count(t.default_action) == 0)
      add(where + " references missing default action \"" + t.default_action +
          "\"");
  }

  for (const auto &lst : {cfg.ingress_apply, cfg.egress_apply})
    for (const auto &tn : lst)
      if (table_names.count(tn) == 0)
        add("pipeline applies unknown table \"" + tn + "\"");

  std::set<std::string> extern_names;
  for (const auto &e : cfg.extern_instances) {
    if (!extern_names.insert(e.name).second)
      add("duplicate extern instance \"" + e.name + "\"");
    std::set<std::string> attr_names;
    for (const auto &av : e.attribute_values)
      if (!attr_names.insert(av.name).second)
        add("extern instance \"" + e.name + "\" has duplicate attribute \"" +
            av.name + "\"");
  }

  for (const auto &a : cfg.actions) {
    std::string where = "action " + a.name;
    for (const auto &p : a.primitives) {
      for (const auto &param : p.parameters) {
        switch (param.kind) {
          case ActionParam::Kind::field:
            check_ref(param.ref, where);
            break;
          case ActionParam::Kind::header:
            if (header_names.count(param.name) == 0)
              add(where + " references unknown header \"" + param.name + "\"");
            break;
          case ActionParam::Kind::runtime:
            if (param.index >= a.runtime_data.size())
              add(where + " uses runtime_data index " +
                  std::to_string(param.index) + " out of range");
            break;
          case ActionParam::Kind::ext:
            if (extern_names.count(param.name) == 0)
              add(where + " references unknown extern instance \"" +
                  param.name + "\"");
            break;
          case ActionParam::Kind::literal:
            break;
        }
      }
    }
  }

  return diags;
}

}  // namespace extsw::ir
