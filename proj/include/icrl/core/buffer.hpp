#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "icrl/core/attempt.hpp"

namespace icrl {

/// Chronological store of past attempts. With a capacity it behaves as a
/// deque: pushing onto a full buffer evicts the oldest entry.
class ExperienceBuffer {
 public:
  explicit ExperienceBuffer(std::optional<std::size_t> capacity = std::nullopt);

  /// Throws StructuralError unless attempt.episode_index exceeds the last
  /// pushed index.
  void push(AttemptRecord attempt);

  std::span<const AttemptRecord> entries() const { return entries_; }
  /// The newest `n` entries (all of them when n >= size()).
  std::span<const AttemptRecord> newest(std::size_t n) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::optional<std::size_t> capacity() const { return capacity_; }

 private:
  std::optional<std::size_t> capacity_;
  std::vector<AttemptRecord> entries_;
  std::optional<int> last_index_;
};

}  // namespace icrl
