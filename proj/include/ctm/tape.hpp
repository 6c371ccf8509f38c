#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ctm {

using Position = std::int64_t;

// Two-way unbounded binary tape. Storage grows on demand on either side;
// the visited window [min_visited, max_visited] always contains the head.
class Tape {
 public:
  explicit Tape(std::uint8_t blank = 0, std::size_t reserve_per_side = 64);

  std::uint8_t blank() const { return blank_; }
  Position head() const { return head_; }
  Position min_visited() const { return min_; }
  Position max_visited() const { return max_; }
  std::size_t visited_width() const {
    return static_cast<std::size_t>(max_ - min_ + 1);
  }

  std::uint8_t read() const { return cells_[static_cast<std::size_t>(head_ + offset_)]; }
  void write(std::uint8_t symbol) {
    cells_[static_cast<std::size_t>(head_ + offset_)] = symbol;
  }

  /// Symbol at any position; unvisited cells read as blank.
  std::uint8_t at(Position pos) const {
    if (pos < min_ || pos > max_) return blank_;
    return cells_[static_cast<std::size_t>(pos + offset_)];
  }

  bool visited(Position pos) const { return pos >= min_ && pos <= max_; }

  /// Moves by -1 or +1. Returns true when the new head cell was never
  /// visited before.
  bool move(int direction) {
    head_ += direction;
    if (head_ > max_) {
      max_ = head_;
      if (static_cast<std::size_t>(head_ + offset_) >= cells_.size()) grow();
      return true;
    }
    if (head_ < min_) {
      min_ = head_;
      if (head_ + offset_ < 0) grow();
      return true;
    }
    return false;
  }

  /// Visited cells left to right as '0'/'1'.
  std::string window() const;

  /// Resets to an all-blank tape with the head at the origin.
  void reset(std::uint8_t blank);

  /// Copies the visited state of `other` without reallocating when the
  /// existing storage suffices.
  void assign(const Tape& other);

 private:
  void grow();

  std::vector<std::uint8_t> cells_;
  Position offset_ = 0;  // storage index of position 0
  Position head_ = 0;
  Position min_ = 0;
  Position max_ = 0;
  std::uint8_t blank_ = 0;
};

}  // namespace ctm
