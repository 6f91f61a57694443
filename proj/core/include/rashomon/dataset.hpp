#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rashomon/bitset.hpp"

namespace rashomon {

using RowIndex = std::uint32_t;
using FeatureIndex = std::uint32_t;
using ClassId = std::int32_t;

/// Immutable table of binary features and integer class labels.
///
/// Besides the row-major feature matrix the dataset keeps one RowSet per
/// feature column (rows where the feature is 1) and one per class, so tree
/// search can split and count with word-wide operations.
class BinaryDataset {
 public:
  BinaryDataset(std::vector<std::uint8_t> features, std::size_t n_features,
                std::vector<ClassId> labels, std::vector<std::string> feature_names,
                std::size_t n_classes);

  std::size_t n_rows() const noexcept { return labels_.size(); }
  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t n_classes() const noexcept { return n_classes_; }

  std::span<const std::uint8_t> row(std::size_t r) const noexcept {
    return {features_.data() + r * n_features_, n_features_};
  }
  std::uint8_t feature(std::size_t r, std::size_t f) const noexcept {
    return features_[r * n_features_ + f];
  }
  ClassId label(std::size_t r) const noexcept { return labels_[r]; }
  const std::vector<ClassId>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }

  /// Rows whose feature `f` is 1.
  const RowSet& column(std::size_t f) const noexcept { return columns_[f]; }
  /// Rows labeled `c`.
  const RowSet& class_rows(std::size_t c) const noexcept { return class_rows_[c]; }

  RowSet row_set(std::span<const RowIndex> rows) const;

  /// Same features, new labels (validated against n_classes).
  BinaryDataset with_labels(std::vector<ClassId> labels) const;
  /// Subset of rows, in the given order.
  BinaryDataset select_rows(std::span<const RowIndex> rows) const;

 private:
  std::vector<std::uint8_t> features_;
  std::size_t n_features_;
  std::vector<ClassId> labels_;
  std::vector<std::string> feature_names_;
  std::size_t n_classes_;
  std::vector<RowSet> columns_;
  std::vector<RowSet> class_rows_;
};

/// Features-only window onto a list of dataset rows. Selectors receive
/// candidate rows through this type; it has no way to reach labels.
class FeatureView {
 public:
  FeatureView(const BinaryDataset& data, std::vector<RowIndex> rows)
      : data_(&data), rows_(std::move(rows)) {}

  std::size_t size() const noexcept { return rows_.size(); }
  std::size_t n_features() const noexcept { return data_->n_features(); }
  std::span<const std::uint8_t> row(std::size_t i) const noexcept {
    return data_->row(rows_[i]);
  }
  /// Dataset row index of the i-th viewed row.
  RowIndex row_index(std::size_t i) const noexcept { return rows_[i]; }
  const std::vector<RowIndex>& row_indices() const noexcept { return rows_; }

 private:
  const BinaryDataset* data_;
  std::vector<RowIndex> rows_;
};

/// Reads a header-first CSV whose last column is the class label.
/// `min_classes` widens C when the file does not show every class.
BinaryDataset load_csv(const std::filesystem::path& path, std::size_t min_classes = 2);
BinaryDataset parse_csv(std::string_view text, std::size_t min_classes = 2);
void write_csv(const BinaryDataset& data, const std::filesystem::path& path);
std::string to_csv(const BinaryDataset& data);

struct SplitIndices {
  std::vector<RowIndex> train;
  std::vector<RowIndex> candidate;
  std::vector<RowIndex> test;
  std::uint64_t seed = 0;
};

/// Test rows are drawn first (ceil(test_frac * n)), then
/// floor(init_train_frac * remainder) rows start labeled; the rest form the
/// candidate pool. Index lists are returned sorted.
SplitIndices split(const BinaryDataset& data, double test_frac, double init_train_frac,
                   std::uint64_t seed);

/// Replaces each label with probability `flip_prob` by a uniformly drawn
/// different class.
BinaryDataset inject_label_noise(const BinaryDataset& data, double flip_prob,
                                 std::uint64_t seed);

/// Uniform subsample of `n` rows (sorted), used to cut large files down.
BinaryDataset subsample_rows(const BinaryDataset& data, std::size_t n, std::uint64_t seed);

}  // namespace rashomon
