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

#include <extsw/actions.h>

#include <extsw/externs.h>
#include <extsw/parser.h>

namespace extsw {

std::optional<field_value_t> ActionContext::read_param(const ir::ActionParam &p) {
  switch (p.kind) {
    case ir::ActionParam::Kind::literal:
      return p.value;
    case ir::ActionParam::Kind::runtime:
      if (entry_data == nullptr || p.index >= entry_data->size()) {
        raise_fault("runtime datum " + std::to_string(p.index) + " unavailable");
        return std::nullopt;
      }
      return (*entry_data)[p.index];
    case ir::ActionParam::Kind::field: {
      auto v = pkt.read(p.ref);
      if (!v) raise_fault("read of unreadable reference " + p.ref.str());
      return v;
    }
    case ir::ActionParam::Kind::header:
    case ir::ActionParam::Kind::ext:
      raise_fault("parameter is not readable as a value");
      return std::nullopt;
  }
  return std::nullopt;
}

void ActionContext::write_param(const ir::ActionParam &p, field_value_t value) {
  if (p.kind != ir::ActionParam::Kind::field) {
    raise_fault("write target must be a field or metadata reference");
    return;
  }
  bool truncated = false;
  if (!pkt.write(p.ref, value, &truncated)) {
    raise_fault("write to unwritable reference " + p.ref.str());
    return;
  }
  if (truncated) counters.truncations++;
}

void PrimitiveTable::register_primitive(Primitive p) {
  auto [it, inserted] = table_.try_emplace(p.name, std::move(p));
  if (!inserted)
    throw ConfigError("duplicate primitive registration \"" + it->first + "\"");
}

void PrimitiveTable::register_primitive(
    const std::string &name, int arity,
    std::function<void(ActionContext &, std::span<const ir::ActionParam>)> fn) {
  register_primitive(Primitive{name, arity, std::move(fn)});
}

const Primitive *PrimitiveTable::resolve(const std::string &name) const {
  auto it = table_.find(name);
  return it == table_.end() ? nullptr : &it->second;
}

namespace {

void prim_modify_field(ActionContext &ctx,
                       std::span<const ir::ActionParam> params) {
  auto v = ctx.read_param(params[1]);
  if (!v) return;
  ctx.write_param(params[0], *v);
}

void prim_add_header(ActionContext &ctx,
                     std::span<const ir::ActionParam> params) {
  HeaderInstance *h = ctx.pkt.header(params[0].name);
  if (h == nullptr) {
    ctx.raise_fault("add_header: no instance \"" + params[0].name + "\"");
    return;
  }
  h->set_valid(true);
}

void prim_remove_header(ActionContext &ctx,
                        std::span<const ir::ActionParam> params) {
  HeaderInstance *h = ctx.pkt.header(params[0].name);
  if (h == nullptr) {
    ctx.raise_fault("remove_header: no instance \"" + params[0].name + "\"");
    return;
  }
  h->set_valid(false);
}

void prim_set_egress_port(ActionContext &ctx,
                          std::span<const ir::ActionParam> params) {
  auto v = ctx.read_param(params[0]);
  if (!v) return;
  ctx.pkt.std_meta().egress_port = static_cast<uint16_t>(*v);
}

void prim_recompute_ipv4_checksum(ActionContext &ctx,
                                  std::span<const ir::ActionParam> params) {
  HeaderInstance *h = ctx.pkt.header(params[0].name);
  if (h == nullptr || !h->valid()) {
    ctx.raise_fault("recompute_ipv4_checksum: header \"" + params[0].name +
                    "\" not valid");
    return;
  }
  auto ck_idx = h->type().field_index("checksum");
  if (!ck_idx) {
    ctx.raise_fault("recompute_ipv4_checksum: header \"" + params[0].name +
                    "\" has no checksum field");
    return;
  }
  h->set_field(*ck_idx, 0);
  std::vector<uint8_t> bytes;
  h->serialize(&bytes);
  h->set_field(*ck_idx, ipv4_header_checksum(bytes));
}

}  // namespace

void register_builtin_primitives(PrimitiveTable *table) {
  table->register_primitive("modify_field", 2, prim_modify_field);
  table->register_primitive("add_header", 1, prim_add_header);
  table->register_primitive("remove_header", 1, prim_remove_header);
  table->register_primitive("set_egress_port", 1, prim_set_egress_port);
  table->register_primitive("recompute_ipv4_checksum", 1,
                            prim_recompute_ipv4_checksum);
  table->register_primitive("drop", 0, [](ActionContext &ctx, auto) {
    ctx.directive = Directive::drop;
  });
  table->register_primitive("resubmit", 0, [](ActionContext &ctx, auto) {
    ctx.directive = Directive::resubmit;
  });
  table->register_primitive("recirculate", 0, [](ActionContext &ctx, auto) {
    ctx.directive = Directive::recirculate;
  });
  table->register_primitive("modify_and_resubmit", 0,
                            [](ActionContext &ctx, auto) {
                              ctx.directive = Directive::modify_and_resubmit;
                            });
}

CompiledAction compile_action(
    const ir::ActionDef &def, const PrimitiveTable &primitives,
    const ExternRegistry *registry,
    const std::map<std::string, std::unique_ptr<ExternInstance>> *instances) {
  CompiledAction out;
  out.def = &def;
  for (const auto &call : def.primitives) {
    ResolvedCall resolved;
    if (!call.op.empty() && call.op[0] == '_') {
      if (registry == nullptr || instances == nullptr)
        throw ConfigError("action " + def.name + ": extern op \"" + call.op +
                          "\" used without an extern registry");
      auto binding = registry->resolve_op(call.op);
      if (!binding)
        throw ConfigError("action " + def.name + ": unresolvable extern op \"" +
                          call.op + "\"");
      if (call.parameters.empty() ||
          call.parameters[0].kind != ir::ActionParam::Kind::ext)
        throw ConfigError("action " + def.name + ": op \"" + call.op +
                          "\" requires an extern-instance first parameter");
      auto it = instances->find(call.parameters[0].name);
      if (it == instances->end())
        throw ConfigError("action " + def.name + ": unknown extern instance \"" +
                          call.parameters[0].name + "\"");
      if (&it->second->descriptor() != binding->type)
        throw ConfigError("action " + def.name + ": instance \"" +
                          call.parameters[0].name + "\" is not of type \"" +
                          binding->type->name + "\"");
      resolved.ext_instance = it->second.get();
      resolved.ext_method = binding->method;
      resolved.params = std::span<const ir::ActionParam>(call.parameters)
                            .subspan(1);
      if (binding->method->arity >= 0 &&
          resolved.params.size() != static_cast<size_t>(binding->method->arity))
        throw ConfigError("action " + def.name + ": op \"" + call.op +
                          "\" expects " + std::to_string(binding->method->arity) +
                          " parameters");
    } else {
      resolved.native = primitives.resolve(call.op);
      if (resolved.native == nullptr)
        throw ConfigError("action " + def.name + ": unresolvable op \"" +
                          call.op + "\"");
      resolved.params = std::span<const ir::ActionParam>(call.parameters);
      if (resolved.native->arity >= 0 &&
          resolved.params.size() != static_cast<size_t>(resolved.native->arity))
        throw ConfigError("action " + def.name + ": op \"" + call.op +
                          "\" expects " + std::to_string(resolved.native->arity) +
                          " parameters");
    }
    out.calls.push_back(resolved);
  }
  return out;
}

Directive execute_action(const CompiledAction &action, ActionContext *ctx) {
  for (const auto &call : action.calls) {
    if (call.native != nullptr) {
      call.native->fn(*ctx, call.params);
    } else {
      call.ext_instance->dispatch(*call.ext_method, ctx, call.params);
    }
    if (ctx->fault) {
      ctx->counters.runtime_faults++;
      return Directive::drop;
    }
  }
  return ctx->directive;
}

}  // namespace extsw
