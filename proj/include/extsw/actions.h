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

#ifndef EXTSW_ACTIONS_H_
#define EXTSW_ACTIONS_H_

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <extsw/common.h>
#include <extsw/ir.h>
#include <extsw/packet.h>

namespace extsw {

class Switch;
class ExternInstance;
class ExternRegistry;
struct ExternMethod;

// Control-flow outcome of an action; the last control-flow primitive executed
// within an action wins.
enum class Directive {
  continue_,
  drop,
  resubmit,
  modify_and_resubmit,
  recirculate,
};

// Execution state threaded through the primitives of one action invocation.
struct ActionContext {
  Packet &pkt;
  Counters &counters;
  // Runtime data bound by the matched table entry (may be null for direct
  // invocations).
  const std::vector<field_value_t> *entry_data = nullptr;
  Directive directive = Directive::continue_;
  bool fault = false;
  std::string fault_reason;
  // Owning switch, for primitives backed by switch state (null in unit tests
  // that exercise pure primitives).
  Switch *sw = nullptr;

  void raise_fault(const std::string &reason) {
    fault = true;
    fault_reason = reason;
  }

  // Resolves a parameter for reading (literal, runtime datum, field or
  // metadata reference). nullopt raises a fault.
  std::optional<field_value_t> read_param(const ir::ActionParam &p);
  // Resolves a field/metadata parameter for writing.
  void write_param(const ir::ActionParam &p, field_value_t value);
};

struct Primitive {
  std::string name;
  // Expected parameter count, or -1 for variadic.
  int arity = 0;
  std::function<void(ActionContext &, std::span<const ir::ActionParam>)> fn;
};

// Name -> native operation binding. Registration of a duplicate name fails
// loudly at construction time.
class PrimitiveTable {
 public:
  void register_primitive(Primitive p);
  void register_primitive(
      const std::string &name, int arity,
      std::function<void(ActionContext &, std::span<const ir::ActionParam>)> fn);
  const Primitive *resolve(const std::string &name) const;
  bool contains(const std::string &name) const {
    return resolve(name) != nullptr;
  }

 private:
  std::map<std::string, Primitive> table_;
};

// Installs the built-in primitive set: modify_field, add_header,
// remove_header, drop, set_egress_port, resubmit, recirculate,
// modify_and_resubmit, recompute_ipv4_checksum.
void register_builtin_primitives(PrimitiveTable *table);

// One primitive call with its op resolved: either a native binding or an
// extern method bound to a concrete instance.
struct ResolvedCall {
  const Primitive *native = nullptr;
  ExternInstance *ext_instance = nullptr;
  const ExternMethod *ext_method = nullptr;
  std::span<const ir::ActionParam> params;  // extern-instance ref stripped
};

struct CompiledAction {
  const ir::ActionDef *def = nullptr;
  std::vector<ResolvedCall> calls;
};

// Resolves every op of an action against the primitive table and, for ops
// starting with '_', against the extern registry and instance set. Throws
// ConfigError on any unresolvable op, bad arity, or missing extern instance —
// resolution failures are impossible afterwards.
CompiledAction compile_action(
    const ir::ActionDef &def, const PrimitiveTable &primitives,
    const ExternRegistry *registry,
    const std::map<std::string, std::unique_ptr<ExternInstance>> *instances);

// Runs the compiled primitives in order. A runtime fault stops the action and
// yields a drop directive with the fault counter incremented.
Directive execute_action(const CompiledAction &action, ActionContext *ctx);

}  // namespace extsw

#endif  // EXTSW_ACTIONS_H_
