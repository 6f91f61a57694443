#include "rashomon/committee.hpp"

#include <cmath>

#include "rashomon/errors.hpp"

namespace rashomon {

Committee::Committee(std::vector<SparseTree> members)
    : Committee(members, std::vector<double>(members.size(), 1.0)) {}

Committee::Committee(std::vector<SparseTree> members, std::vector<double> weights)
    : members_(std::move(members)), weights_(std::move(weights)) {
  if (members_.empty()) throw ContractViolation("committee needs at least one member");
  if (weights_.size() != members_.size()) {
    throw ContractViolation("committee weight count does not match member count");
  }
  for (const double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ContractViolation("committee weights must be > 0");
    total_weight_ += w;
  }
}

std::vector<double> vote_counts(const Committee& committee, std::span<const std::uint8_t> row,
                                std::size_t n_classes) {
  std::vector<double> tally(n_classes, 0.0);
  const auto& members = committee.members();
  const auto& weights = committee.weights();
  for (std::size_t m = 0; m < members.size(); ++m) {
    const ClassId y = members[m].predict(row);
    if (y < 0 || static_cast<std::size_t>(y) >= n_classes) {
      throw ContractViolation("member predicted class " + std::to_string(y) + " outside [0, " +
                              std::to_string(n_classes) + ")");
    }
    tally[static_cast<std::size_t>(y)] += weights[m];
  }
  return tally;
}

double tally_entropy(std::span<const double> tally) {
  double total = 0.0;
  for (const double t : tally) total += t;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (const double t : tally) {
    if (t <= 0.0) continue;
    const double p = t / total;
    h -= p * std::log(p);
  }
  return h > 0.0 ? h : 0.0;
}

ClassId tally_argmax(std::span<const double> tally) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < tally.size(); ++c) {
    if (tally[c] > tally[best]) best = c;
  }
  return static_cast<ClassId>(best);
}

double vote_entropy(const Committee& committee, std::span<const std::uint8_t> row,
                    std::size_t n_classes) {
  return tally_entropy(vote_counts(committee, row, n_classes));
}

ClassId ensemble_predict(const Committee& committee, std::span<const std::uint8_t> row,
                         std::size_t n_classes) {
  return tally_argmax(vote_counts(committee, row, n_classes));
}

}  // namespace rashomon
