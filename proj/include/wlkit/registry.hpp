#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wlkit/error.hpp"
#include "wlkit/graph.hpp"

namespace wlkit {

/// Canonical form of whatever a refinement step hashes: a kind tag, the
/// previous colour and the sorted neighbour colour tuples, flattened.
using RefinementKey = std::vector<std::int32_t>;

struct RefinementKeyHash {
  std::size_t operator()(const RefinementKey& key) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ key.size();
    for (std::int32_t x : key) {
      h ^= static_cast<std::uint32_t>(x);
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

enum class RegistryMode { Collect, Embed };

/// Lazily built injective map from refinement keys to dense colour ids.
///
/// Ids below `base` belong to the categorical colour table. `base` itself is
/// the individualisation colour, `base + 1` the unseen colour, and refined
/// colours are numbered from `base + 2` in order of first insertion.
class ColourRegistry {
 public:
  explicit ColourRegistry(ColourId base = 0) : base_(base) {
    if (base < 0) fail(ErrorKind::CorruptRegistry, "negative colour table size");
  }

  ColourId base() const { return base_; }
  ColourId individualised() const { return base_; }
  ColourId unseen() const { return base_ + 1; }
  ColourId first_refined() const { return base_ + 2; }
  ColourId next_id() const { return first_refined() + static_cast<ColourId>(keys_.size()); }
  std::size_t size() const { return keys_.size(); }

  std::optional<ColourId> find(const RefinementKey& key) const {
    auto it = ids_.find(key);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  ColourId insert(const RefinementKey& key) {
    if (auto id = find(key)) return *id;
    ColourId id = next_id();
    ids_.emplace(key, id);
    keys_.push_back(key);
    return id;
  }

  const RefinementKey& key_of(ColourId id) const {
    if (id < first_refined() || id >= next_id())
      fail(ErrorKind::CorruptRegistry, "colour " + std::to_string(id) + " is not a refined colour");
    return keys_[static_cast<std::size_t>(id - first_refined())];
  }

  /// Keys in id order; entry i has id first_refined() + i.
  const std::vector<RefinementKey>& keys() const { return keys_; }

  /// Rebuilds a registry from (key, id) pairs, e.g. read back from a model
  /// file. The ids must be exactly first_refined() .. first_refined()+n-1 and
  /// the keys pairwise distinct.
  static ColourRegistry restore(ColourId base, std::vector<std::pair<RefinementKey, ColourId>> entries) {
    ColourRegistry reg(base);
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    for (auto& [key, id] : entries) {
      if (id != reg.next_id())
        fail(ErrorKind::CorruptRegistry, "colour ids are not dense: expected " + std::to_string(reg.next_id()) +
                                             ", found " + std::to_string(id));
      if (reg.find(key)) fail(ErrorKind::CorruptRegistry, "key listed twice (colour " + std::to_string(id) + ")");
      reg.insert(key);
    }
    return reg;
  }

  friend bool operator==(const ColourRegistry& a, const ColourRegistry& b) {
    return a.base_ == b.base_ && a.keys_ == b.keys_;
  }

 private:
  ColourId base_;
  std::unordered_map<RefinementKey, ColourId, RefinementKeyHash> ids_;
  std::vector<RefinementKey> keys_;
};

/// Exclusive handle used while collecting colours: unknown keys get new ids.
class CollectingRegistry {
 public:
  static constexpr RegistryMode mode = RegistryMode::Collect;

  explicit CollectingRegistry(ColourRegistry& registry) : registry_(&registry) {}

  ColourId resolve(const RefinementKey& key) const { return registry_->insert(key); }
  const ColourRegistry& registry() const { return *registry_; }

 private:
  ColourRegistry* registry_;
};

/// Shared read-only handle used while embedding: unknown keys map to the
/// unseen colour and the registry is never modified.
class FrozenRegistry {
 public:
  static constexpr RegistryMode mode = RegistryMode::Embed;

  explicit FrozenRegistry(const ColourRegistry& registry) : registry_(&registry) {}

  ColourId resolve(const RefinementKey& key) const { return registry_->find(key).value_or(registry_->unseen()); }
  const ColourRegistry& registry() const { return *registry_; }

 private:
  const ColourRegistry* registry_;
};

template <class H>
concept RegistryHandle = requires(const H& h, const RefinementKey& key) {
  { h.resolve(key) } -> std::same_as<ColourId>;
  { h.registry() } -> std::same_as<const ColourRegistry&>;
  { H::mode } -> std::convertible_to<RegistryMode>;
};

}  // namespace wlkit
