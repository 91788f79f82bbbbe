#pragma once

#include <memory>
#include <mutex>
#include <utility>

namespace stc {

/// Publishes immutable versions of a value to concurrent readers.
///
/// Readers take a shared_ptr to the current version and may keep using it
/// while a single writer prepares and swaps in the next one. Writers are
/// serialized; a reader never observes a partially mutated value.
template <class T>
class SnapshotCell {
 public:
  explicit SnapshotCell(T initial) : current_(std::make_shared<const T>(std::move(initial))) {}

  std::shared_ptr<const T> load() const {
    std::lock_guard lock(swap_mutex_);
    return current_;
  }

  /// Copies the current version, applies `mutate` to the copy and publishes
  /// it. If `mutate` throws, the current version is left untouched.
  template <class F>
  std::shared_ptr<const T> update(F&& mutate) {
    std::lock_guard writer(write_mutex_);
    auto next = std::make_shared<T>(*load());
    std::forward<F>(mutate)(*next);
    std::shared_ptr<const T> published = std::move(next);
    {
      std::lock_guard lock(swap_mutex_);
      current_ = published;
    }
    return published;
  }

 private:
  mutable std::mutex swap_mutex_;
  std::mutex write_mutex_;
  std::shared_ptr<const T> current_;
};

}  // namespace stc
