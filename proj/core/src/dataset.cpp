#include "rashomon/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "rashomon/errors.hpp"
#include "rashomon/random.hpp"

namespace rashomon {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

}  // namespace

BinaryDataset::BinaryDataset(std::vector<std::uint8_t> features, std::size_t n_features,
                             std::vector<ClassId> labels, std::vector<std::string> feature_names,
                             std::size_t n_classes)
    : features_(std::move(features)),
      n_features_(n_features),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      n_classes_(n_classes) {
  if (labels_.empty()) throw ValidationError("dataset has no rows");
  if (n_classes_ < 2) throw ValidationError("dataset needs at least 2 classes");
  if (features_.size() != labels_.size() * n_features_) {
    throw ValidationError("feature matrix size does not match n_rows * n_features");
  }
  if (feature_names_.empty()) {
    for (std::size_t f = 0; f < n_features_; ++f) feature_names_.push_back("f" + std::to_string(f));
  }
  if (feature_names_.size() != n_features_) {
    throw ValidationError("feature name count does not match n_features");
  }
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i] > 1) {
      throw ValidationError("feature value at row " + std::to_string(i / n_features_) +
                            ", column " + std::to_string(i % n_features_) + " is not 0/1");
    }
  }
  const std::size_t n = labels_.size();
  class_rows_.assign(n_classes_, RowSet(n));
  for (std::size_t r = 0; r < n; ++r) {
    const ClassId y = labels_[r];
    if (y < 0 || static_cast<std::size_t>(y) >= n_classes_) {
      throw ValidationError("label " + std::to_string(y) + " at row " + std::to_string(r) +
                            " outside [0, " + std::to_string(n_classes_) + ")");
    }
    class_rows_[static_cast<std::size_t>(y)].set(r);
  }
  columns_.assign(n_features_, RowSet(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t f = 0; f < n_features_; ++f) {
      if (features_[r * n_features_ + f] != 0) columns_[f].set(r);
    }
  }
}

RowSet BinaryDataset::row_set(std::span<const RowIndex> rows) const {
  RowSet s(n_rows());
  for (const auto r : rows) s.set(r);
  return s;
}

BinaryDataset BinaryDataset::with_labels(std::vector<ClassId> labels) const {
  return BinaryDataset(features_, n_features_, std::move(labels), feature_names_, n_classes_);
}

BinaryDataset BinaryDataset::select_rows(std::span<const RowIndex> rows) const {
  std::vector<std::uint8_t> feats;
  feats.reserve(rows.size() * n_features_);
  std::vector<ClassId> labels;
  labels.reserve(rows.size());
  for (const auto r : rows) {
    const auto src = row(r);
    feats.insert(feats.end(), src.begin(), src.end());
    labels.push_back(labels_[r]);
  }
  return BinaryDataset(std::move(feats), n_features_, std::move(labels), feature_names_,
                       n_classes_);
}

BinaryDataset parse_csv(std::string_view text, std::size_t min_classes) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t nl = text.find('\n', start);
      const auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                         : nl - start);
      lines.push_back(line);
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ValidationError("empty CSV: no header row");
  if (lines.size() == 1) throw ValidationError("CSV has a header but no data rows");

  auto header = split_cells(lines[0]);
  if (!header.empty() && header[0].size() >= 3 &&
      header[0].substr(0, 3) == "\xEF\xBB\xBF") {
    header[0].remove_prefix(3);
  }
  if (header.size() < 2) {
    throw ParseError("CSV header needs at least one feature column and a label column");
  }
  const std::size_t n_features = header.size() - 1;
  std::vector<std::string> names(header.begin(), header.end() - 1);

  std::vector<std::uint8_t> features;
  std::vector<ClassId> labels;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto cells = split_cells(lines[li]);
    const std::size_t row = li - 1;
    if (cells.size() != header.size()) {
      throw ParseError("row " + std::to_string(row) + " (line " + std::to_string(li + 1) +
                       "): expected " + std::to_string(header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < n_features; ++c) {
      if (cells[c] == "0") {
        features.push_back(0);
      } else if (cells[c] == "1") {
        features.push_back(1);
      } else {
        throw ParseError("row " + std::to_string(row) + " (line " + std::to_string(li + 1) +
                         "), column " + std::to_string(c) + " '" + names[c] +
                         "': expected 0 or 1, got '" + std::string(cells[c]) + "'");
      }
    }
    const auto cell = cells.back();
    ClassId y = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), y);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || y < 0) {
      throw ParseError("row " + std::to_string(row) + " (line " + std::to_string(li + 1) +
                       "), label column: expected a non-negative integer, got '" +
                       std::string(cell) + "'");
    }
    labels.push_back(y);
  }

  const std::set<ClassId> seen(labels.begin(), labels.end());
  const auto max_label = static_cast<std::size_t>(*seen.rbegin());
  if (seen.size() != max_label + 1) {
    throw ValidationError("class labels must be contiguous 0..C-1; found " +
                          std::to_string(seen.size()) + " distinct ids with maximum " +
                          std::to_string(max_label));
  }
  const std::size_t n_classes = std::max(max_label + 1, std::max<std::size_t>(min_classes, 2));
  return BinaryDataset(std::move(features), n_features, std::move(labels), std::move(names),
                       n_classes);
}

BinaryDataset load_csv(const std::filesystem::path& path, std::size_t min_classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open dataset file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), min_classes);
}

std::string to_csv(const BinaryDataset& data) {
  std::string out;
  for (const auto& name : data.feature_names()) {
    out += name;
    out += ',';
  }
  out += "label\n";
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    for (const auto v : data.row(r)) {
      out += v != 0 ? '1' : '0';
      out += ',';
    }
    out += std::to_string(data.label(r));
    out += '\n';
  }
  return out;
}

void write_csv(const BinaryDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << to_csv(data);
}

SplitIndices split(const BinaryDataset& data, double test_frac, double init_train_frac,
                   std::uint64_t seed) {
  if (!(test_frac > 0.0 && test_frac < 1.0)) {
    throw ConfigError("test_frac must lie in (0, 1)");
  }
  if (!(init_train_frac > 0.0 && init_train_frac < 1.0)) {
    throw ConfigError("init_train_frac must lie in (0, 1)");
  }
  constexpr double kSlack = 1e-9;
  const std::size_t n = data.n_rows();
  const auto n_test = static_cast<std::size_t>(std::ceil(test_frac * static_cast<double>(n) - kSlack));
  const std::size_t remainder = n - std::min(n, n_test);
  const auto n_train =
      static_cast<std::size_t>(std::floor(init_train_frac * static_cast<double>(remainder) + kSlack));
  if (n_test == 0 || n_test >= n || n_train == 0 || n_train >= remainder) {
    throw ConfigError("split fractions leave an empty partition for " + std::to_string(n) +
                      " rows (test=" + std::to_string(n_test) + ", train=" +
                      std::to_string(n_train) + ")");
  }

  std::vector<RowIndex> perm(n);
  std::iota(perm.begin(), perm.end(), RowIndex{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[uniform_below(rng, i + 1)]);
  }

  SplitIndices out;
  out.seed = seed;
  out.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  out.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test),
                   perm.begin() + static_cast<std::ptrdiff_t>(n_test + n_train));
  out.candidate.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test + n_train), perm.end());
  std::sort(out.test.begin(), out.test.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.candidate.begin(), out.candidate.end());
  return out;
}

BinaryDataset inject_label_noise(const BinaryDataset& data, double flip_prob,
                                 std::uint64_t seed) {
  if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) {
    throw ConfigError("flip_prob must lie in [0, 1]");
  }
  const auto n_classes = static_cast<std::uint64_t>(data.n_classes());
  Rng rng(seed);
  std::vector<ClassId> labels = data.labels();
  for (auto& y : labels) {
    const double u = uniform_unit(rng);
    if (u < flip_prob) {
      auto other = static_cast<ClassId>(uniform_below(rng, n_classes - 1));
      if (other >= y) ++other;
      y = other;
    }
  }
  return data.with_labels(std::move(labels));
}

BinaryDataset subsample_rows(const BinaryDataset& data, std::size_t n, std::uint64_t seed) {
  if (n == 0 || n > data.n_rows()) {
    throw ConfigError("subsample size must lie in [1, n_rows]");
  }
  std::vector<RowIndex> perm(data.n_rows());
  std::iota(perm.begin(), perm.end(), RowIndex{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(perm[i], perm[i + uniform_below(rng, perm.size() - i)]);
  }
  perm.resize(n);
  std::sort(perm.begin(), perm.end());
  return data.select_rows(perm);
}

}  // namespace rashomon
