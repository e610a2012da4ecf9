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

#include <extsw/externs.h>

#include <cassert>

namespace extsw {

field_value_t ExternType::attribute(const std::string &name) const {
  assert(attributes_ != nullptr);
  auto it = attributes_->find(name);
  return it == attributes_->end() ? 0 : it->second;
}

const ExternAttributeDecl *ExternTypeDescriptor::attribute(
    const std::string &n) const {
  for (const auto &a : attributes)
    if (a.name == n) return &a;
  return nullptr;
}

const ExternMethod *ExternTypeDescriptor::method(const std::string &n) const {
  auto it = methods.find(n);
  return it == methods.end() ? nullptr : &it->second;
}

void ExternRegistry::register_type(ExternTypeDescriptor desc) {
  std::string name = desc.name;
  auto [it, inserted] = types_.try_emplace(name, std::move(desc));
  if (!inserted)
    throw ConfigError("duplicate extern type registration \"" + name + "\"");
}

const ExternTypeDescriptor *ExternRegistry::type(const std::string &name) const {
  auto it = types_.find(name);
  return it == types_.end() ? nullptr : &it->second;
}

std::optional<ExternRegistry::OpBinding> ExternRegistry::resolve_op(
    const std::string &op) const {
  if (op.size() < 4 || op[0] != '_') return std::nullopt;
  for (const auto &[type_name, desc] : types_) {
    // "_<type>_<method>"
    if (op.size() <= type_name.size() + 2) continue;
    if (op.compare(1, type_name.size(), type_name) != 0) continue;
    if (op[1 + type_name.size()] != '_') continue;
    std::string method_name = op.substr(type_name.size() + 2);
    const ExternMethod *m = desc.method(method_name);
    if (m != nullptr) return OpBinding{&desc, m};
  }
  return std::nullopt;
}

namespace {

// Descriptors under construction by the static registrars. Finalized copies
// are handed to default_extern_registry() on first use.
std::map<std::string, ExternTypeDescriptor> &pending_descriptors() {
  static std::map<std::string, ExternTypeDescriptor> pending;
  return pending;
}

ExternTypeDescriptor &pending_descriptor(const std::string &type_name) {
  auto &pending = pending_descriptors();
  auto it = pending.find(type_name);
  if (it == pending.end()) {
    ExternTypeDescriptor desc;
    desc.name = type_name;
    it = pending.emplace(type_name, std::move(desc)).first;
  }
  return it->second;
}

}  // namespace

namespace detail {

ExternStaticRegistrar::ExternStaticRegistrar(
    const std::string &type_name,
    std::function<std::unique_ptr<ExternType>()> factory) {
  pending_descriptor(type_name).factory = std::move(factory);
}

ExternAttributeRegistrar::ExternAttributeRegistrar(const std::string &type_name,
                                                   const std::string &attr_name,
                                                   unsigned bitwidth) {
  pending_descriptor(type_name).attributes.push_back({attr_name, bitwidth});
}

ExternMethodRegistrar::ExternMethodRegistrar(const std::string &type_name,
                                             ExternMethod method) {
  auto &desc = pending_descriptor(type_name);
  std::string name = method.name;
  if (!desc.methods.try_emplace(name, std::move(method)).second)
    throw ConfigError("duplicate extern method \"" + name + "\" on type \"" +
                      type_name + "\"");
}

}  // namespace detail

// Force-link the extern translation units shipped with the switch (same
// pattern as the dummy import function convention for statically linked
// extern modules).
int import_dummy_extern();
int import_rohc_extern();

ExternRegistry &default_extern_registry() {
  static ExternRegistry registry = [] {
    import_dummy_extern();
    import_rohc_extern();
    ExternRegistry r;
    for (auto &[name, desc] : pending_descriptors()) {
      if (!desc.factory)
        throw ConfigError("extern type \"" + name +
                          "\" has methods/attributes but no registration");
      r.register_type(desc);
    }
    return r;
  }();
  return registry;
}

ExternInstance::ExternInstance(const ir::ExternInstanceDef &def,
                               const ExternTypeDescriptor &desc)
    : name_(def.name), desc_(&desc) {
  for (const auto &av : def.attribute_values) {
    const ExternAttributeDecl *decl = desc.attribute(av.name);
    if (decl == nullptr)
      throw ConfigError("extern instance \"" + name_ + "\": type \"" +
                        desc.name + "\" has no attribute \"" + av.name + "\"");
    if ((av.value & ~field_mask(decl->bitwidth)) != 0)
      throw ConfigError("extern instance \"" + name_ + "\": attribute \"" +
                        av.name + "\" value exceeds " +
                        std::to_string(decl->bitwidth) + " bits");
    attributes_[av.name] = av.value;
  }
  for (const auto &decl : desc.attributes)
    if (attributes_.count(decl.name) == 0)
      throw ConfigError("extern instance \"" + name_ + "\": attribute \"" +
                        decl.name + "\" not bound");
  object_ = desc.factory();
  object_->attributes_ = &attributes_;
}

field_value_t ExternInstance::attribute(const std::string &name) const {
  auto it = attributes_.find(name);
  return it == attributes_.end() ? 0 : it->second;
}

void ExternInstance::init_once() {
  if (initialized_) return;
  object_->init();
  initialized_ = true;
}

void ExternInstance::dispatch(const ExternMethod &method, ActionContext *ctx,
                              std::span<const ir::ActionParam> params) {
  // instantiate_externs runs init before the switch accepts packets, so a
  // dispatch on an uninitialized instance is a programming error.
  assert(initialized_);
  object_->ctx_ = ctx;
  method.fn(*object_, *ctx, params);
  object_->ctx_ = nullptr;
}

std::map<std::string, std::unique_ptr<ExternInstance>> instantiate_externs(
    const ir::PipelineConfig &cfg, const ExternRegistry &registry) {
  std::map<std::string, std::unique_ptr<ExternInstance>> out;
  for (const auto &def : cfg.extern_instances) {
    const ExternTypeDescriptor *desc = registry.type(def.type_name);
    if (desc == nullptr)
      throw ConfigError("extern instance \"" + def.name +
                        "\": unknown extern type \"" + def.type_name + "\"");
    auto inst = std::make_unique<ExternInstance>(def, *desc);
    inst->init_once();
    out.emplace(def.name, std::move(inst));
  }
  return out;
}

}  // namespace extsw
