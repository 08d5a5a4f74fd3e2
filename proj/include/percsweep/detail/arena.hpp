#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace percsweep::detail {

/// Index-addressed record pool with a free list. Released slots are reused
/// before the pool grows; with a capacity set, the pool never grows past it.
template <class Record>
class Arena {
 public:
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

  explicit Arena(std::size_t capacity = kUnbounded) : capacity_(capacity) {
    if (capacity != kUnbounded) {
      records_.reserve(capacity);
      live_flags_.reserve(capacity);
    }
  }

  /// Returns the slot index, or kNull when the capacity is exhausted.
  std::uint32_t allocate() {
    std::uint32_t index;
    if (!free_.empty()) {
      index = free_.back();
      free_.pop_back();
      records_[index] = Record{};
    } else {
      if (records_.size() >= capacity_) return kNull;
      index = static_cast<std::uint32_t>(records_.size());
      records_.emplace_back();
      live_flags_.push_back(0);
    }
    live_flags_[index] = 1;
    ++live_;
    return index;
  }

  void release(std::uint32_t index) {
    live_flags_[index] = 0;
    free_.push_back(index);
    --live_;
  }

  Record& operator[](std::uint32_t index) { return records_[index]; }
  const Record& operator[](std::uint32_t index) const { return records_[index]; }

  bool is_live(std::uint32_t index) const { return index < live_flags_.size() && live_flags_[index] != 0; }
  std::size_t live() const { return live_; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(records_.size()); }

  static constexpr std::uint32_t kNull = std::numeric_limits<std::uint32_t>::max();

 private:
  std::size_t capacity_;
  std::vector<Record> records_;
  std::vector<std::uint8_t> live_flags_;
  std::vector<std::uint32_t> free_;
  std::size_t live_ = 0;
};

}  // namespace percsweep::detail
