#include "rashomon/bitset.hpp"

#include <bit>

namespace rashomon {

RowSet::RowSet(std::size_t width) : width_(width), words_((width + 63) / 64, 0) {}

RowSet RowSet::all(std::size_t width) {
  RowSet s(width);
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  if (const std::size_t tail = width & 63; tail != 0 && !s.words_.empty()) {
    s.words_.back() = (std::uint64_t{1} << tail) - 1;
  }
  return s;
}

std::size_t RowSet::count() const noexcept {
  std::size_t n = 0;
  for (const auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool RowSet::empty() const noexcept {
  for (const auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

RowSet RowSet::operator&(const RowSet& other) const {
  RowSet out(width_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] & other.words_[i];
  return out;
}

RowSet RowSet::minus(const RowSet& other) const {
  RowSet out(width_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] & ~other.words_[i];
  return out;
}

std::size_t RowSet::count_and(const RowSet& other) const noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    n += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
  }
  return n;
}

std::vector<std::size_t> RowSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    std::uint64_t w = words_[wi];
    while (w != 0) {
      out.push_back(wi * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

std::size_t RowSet::hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ width_;
  for (const auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace rashomon
