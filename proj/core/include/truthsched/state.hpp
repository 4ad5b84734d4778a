// Copyright 2026 The truthsched Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace truthsched {

/// Canonical byte encoding of mechanism state. Two mechanisms are in the same
/// state exactly when their encodings are byte-identical.
class StateWriter {
 public:
  void put(std::int64_t v) { append(&v, sizeof v); }
  void put(int v) { put(static_cast<std::int64_t>(v)); }
  void put(bool v) { bytes_.push_back(v ? '\1' : '\0'); }
  void put(double v) { put(static_cast<std::int64_t>(std::bit_cast<std::uint64_t>(v))); }
  void put(std::string_view s) {
    put(static_cast<std::int64_t>(s.size()));
    bytes_.append(s);
  }
  void put(const char* s) { put(std::string_view(s)); }

  [[nodiscard]] const std::string& bytes() const { return bytes_; }

 private:
  void append(const void* p, std::size_t n) { bytes_.append(static_cast<const char*>(p), n); }

  std::string bytes_;
};

class StateKindMismatch : public std::invalid_argument {
 public:
  StateKindMismatch(std::string_view expected, std::string_view got)
      : std::invalid_argument("state token of kind '" + std::string(got) +
                              "' cannot restore a mechanism of kind '" + std::string(expected) + "'") {}
};

/// Opaque snapshot of a mechanism. `bytes` is the canonical encoding at the
/// time of the snapshot; `frozen` is the copy restore() reinstates.
template <class Interface>
struct StateToken {
  std::string kind;
  std::string bytes;
  std::shared_ptr<const Interface> frozen;
};

/// Deep-copying owner for a polymorphic mechanism; copies call clone().
template <class T>
class Handle {
 public:
  Handle() = default;
  explicit Handle(std::unique_ptr<T> p) : p_(std::move(p)) {}
  Handle(const Handle& o) : p_(o.p_ ? o.p_->clone() : nullptr) {}
  Handle& operator=(const Handle& o) {
    if (this != &o) p_ = o.p_ ? o.p_->clone() : nullptr;
    return *this;
  }
  Handle(Handle&&) noexcept = default;
  Handle& operator=(Handle&&) noexcept = default;

  T* operator->() { return p_.get(); }
  const T* operator->() const { return p_.get(); }
  T& operator*() { return *p_; }
  const T& operator*() const { return *p_; }
  T* get() { return p_.get(); }
  const T* get() const { return p_.get(); }
  explicit operator bool() const { return static_cast<bool>(p_); }
  void reset() { p_.reset(); }

 private:
  std::unique_ptr<T> p_;
};

/// Implements clone() and restore_from() for a concrete mechanism type by
/// copy. Owned sub-mechanisms must be held in Handle so copies are deep.
template <class Derived, class Interface>
class Cloneable : public Interface {
 public:
  using interface_type = Interface;

  [[nodiscard]] std::unique_ptr<Interface> clone() const override {
    return std::make_unique<Derived>(static_cast<const Derived&>(*this));
  }
  void restore_from(const Interface& other) override {
    const auto* src = dynamic_cast<const Derived*>(&other);
    if (src == nullptr || src->kind() != this->kind()) {
      throw StateKindMismatch(this->kind(), other.kind());
    }
    static_cast<Derived&>(*this) = *src;
  }
};

template <class Interface>
StateToken<Interface> snapshot_of(const Interface& mech) {
  StateWriter w;
  mech.encode(w);
  return StateToken<Interface>{mech.kind(), w.bytes(), std::shared_ptr<const Interface>(mech.clone())};
}

template <class Interface>
void restore_into(Interface& mech, const StateToken<Interface>& token) {
  if (token.kind != mech.kind() || !token.frozen) throw StateKindMismatch(mech.kind(), token.kind);
  mech.restore_from(*token.frozen);
}

template <class Interface>
std::string state_bytes(const Interface& mech) {
  StateWriter w;
  mech.encode(w);
  return w.bytes();
}

}  // namespace truthsched
