#include "rearr/permutation.hpp"

namespace rearr {

bool IntervalSet::contains(std::uint64_t x) const {
  auto it = map_.upper_bound(x);
  if (it == map_.begin()) return false;
  --it;
  return it->second >= x;
}

int IntervalSet::insertion_delta(std::uint64_t x) const {
  if (contains(x)) throw DuplicateIndexError(x);
  const bool left = x > 0 && contains(x - 1);
  auto right_it = map_.find(x + 1);
  const bool right = right_it != map_.end();
  if (left && right) return -1;
  if (left || right) return 0;
  return +1;
}

int IntervalSet::insert(std::uint64_t x) {
  const int delta = insertion_delta(x);
  ++covered_;

  auto right_it = map_.find(x + 1);
  const bool right = right_it != map_.end();
  const bool left = x > 0 && contains(x - 1);

  if (left) {
    auto it = map_.upper_bound(x - 1);
    --it;  // interval ending at x-1
    if (right) {
      it->second = right_it->second;
      map_.erase(right_it);
    } else {
      it->second = x;
    }
    return delta;
  }
  if (right) {
    const std::uint64_t end = right_it->second;
    map_.erase(right_it);
    map_[x] = end;
    return delta;
  }
  map_[x] = x;
  return delta;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> IntervalSet::intervals() const {
  return {map_.begin(), map_.end()};
}

void PermutationPrefix::push_index(std::uint64_t idx) {
  const int delta = set_.insert(idx);  // throws on duplicate, before any change here
  images_.push_back(idx);
  const std::uint32_t count =
      static_cast<std::uint32_t>(static_cast<int>(counts_.empty() ? 0u : counts_.back()) + delta);
  counts_.push_back(count);
  if (count > max_) max_ = count;
}

}  // namespace rearr
