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

#ifndef EXTSW_EXTERNS_H_
#define EXTSW_EXTERNS_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <extsw/actions.h>
#include <extsw/common.h>
#include <extsw/ir.h>

namespace extsw {

// Base class for extern types. Implementations keep their mutable state
// private; the switch core sees only the descriptor interface. During a
// method call the current packet and action context are reachable through
// the protected accessors.
class ExternType {
 public:
  virtual ~ExternType() = default;

  // Invoked exactly once, after all attributes are bound and before any
  // method dispatch.
  virtual void init() {}

 protected:
  Packet &packet() { return ctx_->pkt; }
  ActionContext &ctx() { return *ctx_; }
  field_value_t attribute(const std::string &name) const;

 private:
  friend class ExternInstance;
  ActionContext *ctx_ = nullptr;
  const std::map<std::string, field_value_t> *attributes_ = nullptr;
};

struct ExternMethod {
  std::string name;
  int arity = 0;  // parameters after the extern-instance reference
  std::function<void(ExternType &, ActionContext &,
                     std::span<const ir::ActionParam>)>
      fn;
};

struct ExternAttributeDecl {
  std::string name;
  unsigned bitwidth = kMaxFieldWidth;
};

struct ExternTypeDescriptor {
  std::string name;
  std::vector<ExternAttributeDecl> attributes;
  std::map<std::string, ExternMethod> methods;
  std::function<std::unique_ptr<ExternType>()> factory;

  const ExternAttributeDecl *attribute(const std::string &n) const;
  const ExternMethod *method(const std::string &n) const;
};

// Type registry. Types are compiled in and registered at startup; duplicate
// registration is a construction-time error.
class ExternRegistry {
 public:
  void register_type(ExternTypeDescriptor desc);
  const ExternTypeDescriptor *type(const std::string &name) const;

  // Resolves a mangled op name "_<type>_<method>" against the registered
  // types. Type names may themselves contain underscores, so every registered
  // type is tried as a prefix.
  struct OpBinding {
    const ExternTypeDescriptor *type;
    const ExternMethod *method;
  };
  std::optional<OpBinding> resolve_op(const std::string &op) const;

 private:
  std::map<std::string, ExternTypeDescriptor> types_;
};

// Registry holding every statically registered extern type (see the
// EXTSW_REGISTER_EXTERN family below).
ExternRegistry &default_extern_registry();

// A named, attribute-bound extern object whose methods dispatch as
// primitives. init() runs exactly once before any dispatch.
class ExternInstance {
 public:
  ExternInstance(const ir::ExternInstanceDef &def,
                 const ExternTypeDescriptor &desc);

  const std::string &name() const { return name_; }
  const ExternTypeDescriptor &descriptor() const { return *desc_; }
  field_value_t attribute(const std::string &name) const;
  bool initialized() const { return initialized_; }

  void init_once();
  void dispatch(const ExternMethod &method, ActionContext *ctx,
                std::span<const ir::ActionParam> params);

  // Access to the underlying object, for tests and native bridges.
  ExternType *object() { return object_.get(); }

 private:
  std::string name_;
  const ExternTypeDescriptor *desc_;
  std::map<std::string, field_value_t> attributes_;
  std::unique_ptr<ExternType> object_;
  bool initialized_ = false;
};

// Instantiates every extern_instances entry of the config: attributes are
// decoded and bound by name, then init runs once per instance. Throws
// ConfigError naming the instance/attribute on unknown types or attribute
// mismatches.
std::map<std::string, std::unique_ptr<ExternInstance>> instantiate_externs(
    const ir::PipelineConfig &cfg, const ExternRegistry &registry);

// Static-registration helpers. Each extern type lives in its own translation
// unit; an import_<name>() function referenced by the switch core forces the
// linker to keep it (see src/externs/).
namespace detail {
struct ExternStaticRegistrar {
  ExternStaticRegistrar(const std::string &type_name,
                        std::function<std::unique_ptr<ExternType>()> factory);
};
struct ExternAttributeRegistrar {
  ExternAttributeRegistrar(const std::string &type_name,
                           const std::string &attr_name, unsigned bitwidth);
};
struct ExternMethodRegistrar {
  ExternMethodRegistrar(const std::string &type_name, ExternMethod method);
};
}  // namespace detail

#define EXTSW_REGISTER_EXTERN(T)                                     \
  static ::extsw::detail::ExternStaticRegistrar extsw_extern_reg_##T( \
      #T, []() -> std::unique_ptr<::extsw::ExternType> {              \
        return std::make_unique<T>();                                 \
      })

#define EXTSW_EXTERN_ATTRIBUTE(T, A, W)                                  \
  static ::extsw::detail::ExternAttributeRegistrar extsw_attr_##T##_##A( \
      #T, #A, W)

#define EXTSW_REGISTER_EXTERN_METHOD(T, M)                              \
  static ::extsw::detail::ExternMethodRegistrar extsw_method_##T##_##M( \
      #T, ::extsw::ExternMethod{                                        \
              #M, 0,                                                    \
              [](::extsw::ExternType &e, ::extsw::ActionContext &,      \
                 std::span<const ::extsw::ir::ActionParam>) {           \
                static_cast<T &>(e).M();                                \
              }})

}  // namespace extsw

#endif  // EXTSW_EXTERNS_H_
