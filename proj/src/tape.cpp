#include "ctm/tape.hpp"

#include <algorithm>

namespace ctm {

Tape::Tape(std::uint8_t blank, std::size_t reserve_per_side)
    : cells_(2 * std::max<std::size_t>(reserve_per_side, 4) + 1, blank),
      offset_(static_cast<Position>(std::max<std::size_t>(reserve_per_side, 4))),
      blank_(blank) {}

std::string Tape::window() const {
  std::string out;
  out.reserve(visited_width());
  for (Position p = min_; p <= max_; ++p)
    out += static_cast<char>('0' + cells_[static_cast<std::size_t>(p + offset_)]);
  return out;
}

void Tape::reset(std::uint8_t blank) {
  if (blank != blank_) {
    std::fill(cells_.begin(), cells_.end(), blank);
  } else {
    std::fill(cells_.begin() + (min_ + offset_), cells_.begin() + (max_ + offset_ + 1),
              blank);
  }
  blank_ = blank;
  head_ = min_ = max_ = 0;
}

void Tape::assign(const Tape& other) {
  if (other.blank_ != blank_ || other.cells_.size() > cells_.size() ||
      other.min_ + offset_ < 0 ||
      static_cast<std::size_t>(other.max_ + offset_) >= cells_.size()) {
    *this = other;
    return;
  }
  std::fill(cells_.begin() + (min_ + offset_), cells_.begin() + (max_ + offset_ + 1),
            blank_);
  std::copy(other.cells_.begin() + (other.min_ + other.offset_),
            other.cells_.begin() + (other.max_ + other.offset_ + 1),
            cells_.begin() + (other.min_ + offset_));
  head_ = other.head_;
  min_ = other.min_;
  max_ = other.max_;
}

void Tape::grow() {
  const std::size_t old_size = cells_.size();
  const std::size_t extra = old_size;  // doubles, half on each side
  std::vector<std::uint8_t> bigger(old_size + 2 * extra, blank_);
  std::copy(cells_.begin(), cells_.end(), bigger.begin() + static_cast<std::ptrdiff_t>(extra));
  cells_ = std::move(bigger);
  offset_ += static_cast<Position>(extra);
}

}  // namespace ctm
