#include "rashomon/tree.hpp"

#include <cctype>
#include <charconv>
#include <vector>

#include "rashomon/errors.hpp"

namespace rashomon {

SparseTree::SparseTree() {
  static const auto kDefault = std::make_shared<const Node>();
  node_ = kDefault;
}

SparseTree SparseTree::leaf(ClassId label) {
  auto node = std::make_shared<Node>();
  node->label = label;
  return SparseTree(std::move(node));
}

SparseTree SparseTree::split(FeatureIndex feature, SparseTree zero_branch, SparseTree one_branch) {
  auto node = std::make_shared<Node>();
  node->is_leaf = false;
  node->feature = feature;
  node->depth = 1 + std::max(zero_branch.depth(), one_branch.depth());
  node->n_leaves = zero_branch.n_leaves() + one_branch.n_leaves();
  node->zero = std::move(zero_branch.node_);
  node->one = std::move(one_branch.node_);
  return SparseTree(std::move(node));
}

ClassId SparseTree::predict(std::span<const std::uint8_t> row) const {
  const Node* n = node_.get();
  while (!n->is_leaf) {
    if (n->feature >= row.size()) {
      throw ContractViolation("row width " + std::to_string(row.size()) +
                              " too small for feature " + std::to_string(n->feature));
    }
    n = row[n->feature] != 0 ? n->one.get() : n->zero.get();
  }
  return n->label;
}

ClassId SparseTree::predict_unchecked(std::span<const std::uint8_t> row) const noexcept {
  const Node* n = node_.get();
  while (!n->is_leaf) n = row[n->feature] != 0 ? n->one.get() : n->zero.get();
  return n->label;
}

namespace {

void append_u16(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>(v & 0xFF));
}

}  // namespace

std::string SparseTree::key() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(n_leaves()) * 6);
  std::vector<const Node*> stack{node_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->is_leaf) {
      out.push_back('L');
      append_u16(out, static_cast<std::uint32_t>(n->label));
    } else {
      out.push_back('S');
      append_u16(out, n->feature);
      stack.push_back(n->one.get());
      stack.push_back(n->zero.get());
    }
  }
  return out;
}

std::string SparseTree::to_string() const {
  if (is_leaf()) return "(leaf " + std::to_string(label()) + ")";
  return "(f" + std::to_string(feature()) + " " + zero_branch().to_string() + " " +
         one_branch().to_string() + ")";
}

namespace {

class SexprParser {
 public:
  explicit SexprParser(std::string_view text) : text_(text) {}

  SparseTree parse_all() {
    SparseTree t = parse_node();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("tree text at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::uint32_t number() {
    std::uint32_t v = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc{}) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  SparseTree parse_node() {
    expect('(');
    skip_ws();
    SparseTree out = SparseTree::leaf(0);
    if (text_.substr(pos_, 4) == "leaf") {
      pos_ += 4;
      skip_ws();
      out = SparseTree::leaf(static_cast<ClassId>(number()));
    } else if (pos_ < text_.size() && text_[pos_] == 'f') {
      ++pos_;
      const auto f = number();
      SparseTree zero = parse_node();
      SparseTree one = parse_node();
      out = SparseTree::split(f, std::move(zero), std::move(one));
    } else {
      fail("expected 'leaf' or 'f<index>'");
    }
    expect(')');
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void validate_node(const SparseTree& t, std::size_t n_features, std::vector<bool>& on_path) {
  if (t.is_leaf()) return;
  const auto f = t.feature();
  if (f >= n_features) {
    throw ContractViolation("feature index " + std::to_string(f) + " >= n_features " +
                            std::to_string(n_features));
  }
  if (on_path[f]) {
    throw ContractViolation("feature " + std::to_string(f) + " repeats on a root-to-leaf path");
  }
  on_path[f] = true;
  validate_node(t.zero_branch(), n_features, on_path);
  validate_node(t.one_branch(), n_features, on_path);
  on_path[f] = false;
}

}  // namespace

SparseTree SparseTree::parse(std::string_view text) { return SexprParser(text).parse_all(); }

void SparseTree::validate(std::size_t n_features, int depth_cap) const {
  std::vector<bool> on_path(n_features, false);
  validate_node(*this, n_features, on_path);
  if (depth_cap >= 0 && depth() > depth_cap) {
    throw ContractViolation("tree depth " + std::to_string(depth()) + " exceeds cap " +
                            std::to_string(depth_cap));
  }
}

Objective Objective::make(std::size_t misclass_count, std::size_t n_rows, std::size_t n_leaves,
                          double lambda) {
  Objective o;
  o.misclass_count = misclass_count;
  o.misclass_rate = static_cast<double>(misclass_count) / static_cast<double>(n_rows);
  o.n_leaves = n_leaves;
  o.lambda = lambda;
  o.regularized = o.misclass_rate + lambda * static_cast<double>(n_leaves);
  return o;
}

Objective objective(const SparseTree& tree, const BinaryDataset& data,
                    std::span<const RowIndex> rows, double lambda) {
  if (rows.empty()) throw ContractViolation("objective needs at least one row");
  std::size_t wrong = 0;
  for (const auto r : rows) {
    if (tree.predict(data.row(r)) != data.label(r)) ++wrong;
  }
  return Objective::make(wrong, rows.size(), static_cast<std::size_t>(tree.n_leaves()), lambda);
}

std::vector<ClassId> predict_rows(const SparseTree& tree, const BinaryDataset& data,
                                  std::span<const RowIndex> rows) {
  std::vector<ClassId> out;
  out.reserve(rows.size());
  for (const auto r : rows) out.push_back(tree.predict(data.row(r)));
  return out;
}

}  // namespace rashomon
