#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace rashomon {

/// Fixed-width set of row indices backed by 64-bit words.
///
/// All binary operations require operands of the same width; the enumerator
/// builds every subproblem from the dataset's column masks, so widths always
/// agree there.
class RowSet {
 public:
  RowSet() = default;
  explicit RowSet(std::size_t width);

  static RowSet all(std::size_t width);

  std::size_t width() const noexcept { return width_; }
  std::size_t count() const noexcept;
  bool empty() const noexcept;

  bool test(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  RowSet operator&(const RowSet& other) const;
  /// Elements of *this that are not in `other`.
  RowSet minus(const RowSet& other) const;
  std::size_t count_and(const RowSet& other) const noexcept;

  std::vector<std::size_t> indices() const;

  std::size_t hash() const noexcept;
  bool operator==(const RowSet& other) const noexcept = default;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

struct RowSetHash {
  std::size_t operator()(const RowSet& s) const noexcept { return s.hash(); }
};

}  // namespace rashomon
