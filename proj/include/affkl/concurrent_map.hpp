#pragma once

#include <algorithm>
#include <cstddef>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <vector>

namespace affkl {

/// Hash map guarded by a reader/writer lock with insert-if-absent semantics.
///
/// Memo tables compute outside the lock and publish afterwards, so two
/// threads may compute the same key; the first insertion wins and later
/// ones are discarded. Callers rely on the computation being deterministic.
template <class Key, class Value, class Hash = std::hash<Key>>
class ConcurrentMap {
 public:
  std::optional<Value> find(const Key& key) const {
    std::shared_lock lock(mutex_);
    auto it = table_.find(key);
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const Key& key) const {
    std::shared_lock lock(mutex_);
    return table_.count(key) != 0;
  }

  /// Returns the stored value, which is `value` unless another thread got there first.
  Value insert_if_absent(Key key, Value value) {
    std::unique_lock lock(mutex_);
    auto [it, inserted] = table_.try_emplace(std::move(key), std::move(value));
    return it->second;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return table_.size();
  }

  void clear() {
    std::unique_lock lock(mutex_);
    table_.clear();
  }

  std::vector<std::pair<Key, Value>> snapshot() const {
    std::shared_lock lock(mutex_);
    return {table_.begin(), table_.end()};
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, Value, Hash> table_;
};

}  // namespace affkl
