#include "icrl/core/buffer.hpp"

#include <string>

namespace icrl {

ExperienceBuffer::ExperienceBuffer(std::optional<std::size_t> capacity) : capacity_(capacity) {
  if (capacity_ && *capacity_ == 0) throw StructuralError("buffer capacity must be positive");
}

void ExperienceBuffer::push(AttemptRecord attempt) {
  if (attempt.episode_index < 1) {
    throw StructuralError("episode_index must be positive, got " +
                          std::to_string(attempt.episode_index));
  }
  if (last_index_ && attempt.episode_index <= *last_index_) {
    throw StructuralError("episode_index " + std::to_string(attempt.episode_index) +
                          " does not follow " + std::to_string(*last_index_));
  }
  last_index_ = attempt.episode_index;
  entries_.push_back(std::move(attempt));
  if (capacity_ && entries_.size() > *capacity_) entries_.erase(entries_.begin());
}

std::span<const AttemptRecord> ExperienceBuffer::newest(std::size_t n) const {
  std::span<const AttemptRecord> all = entries_;
  if (n >= all.size()) return all;
  return all.subspan(all.size() - n);
}

}  // namespace icrl
