#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rashomon/dataset.hpp"
#include "rashomon/tree.hpp"

namespace rashomon {

/// Voting committee of trees with optional positive weights.
class Committee {
 public:
  explicit Committee(std::vector<SparseTree> members);
  Committee(std::vector<SparseTree> members, std::vector<double> weights);

  std::size_t size() const noexcept { return members_.size(); }
  const std::vector<SparseTree>& members() const noexcept { return members_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double total_weight() const noexcept { return total_weight_; }

 private:
  std::vector<SparseTree> members_;
  std::vector<double> weights_;
  double total_weight_ = 0.0;
};

/// tally[y] = summed weight of members predicting y.
std::vector<double> vote_counts(const Committee& committee, std::span<const std::uint8_t> row,
                                std::size_t n_classes);

/// Shannon entropy (nats) of a vote tally; zero-vote classes contribute 0.
double tally_entropy(std::span<const double> tally);
/// Index of the largest tally; ties go to the smallest class id.
ClassId tally_argmax(std::span<const double> tally);

double vote_entropy(const Committee& committee, std::span<const std::uint8_t> row,
                    std::size_t n_classes);
ClassId ensemble_predict(const Committee& committee, std::span<const std::uint8_t> row,
                         std::size_t n_classes);

}  // namespace rashomon
