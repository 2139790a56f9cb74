#pragma once

#include <cstdint>
#include <vector>

#include "teamnego/domain.hpp"

namespace teamnego {

enum class AcceptanceLabel { Accepted, Rejected };

// Two-hypothesis naive Bayes over unpredictable partial offers. Laplace
// smoothing is applied to the per-value conditionals and to the hypothesis
// priors, so an untrained model answers 0.5 everywhere.
class BayesianAcceptanceModel {
 public:
  BayesianAcceptanceModel() = default;
  explicit BayesianAcceptanceModel(const NegotiationDomain& d, double alpha = 1.0);

  void update(const UnpredictablePartialOffer& p, AcceptanceLabel label);

  // p(accepted | partial), normalized over the two hypotheses.
  double posterior_accept(const UnpredictablePartialOffer& p) const;

  std::uint64_t samples(AcceptanceLabel label) const;
  // Smoothed p(value | hypothesis); un_position indexes the domain's
  // unpredictable issues in ascending issue-id order.
  double conditional(std::size_t un_position, std::int32_t value,
                     AcceptanceLabel h) const;
  double prior(AcceptanceLabel h) const;

  struct CountRow {
    int issue_id = 0;
    std::int32_t value = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    double p_given_accepted = 0.0;
    double p_given_rejected = 0.0;
  };
  // One row per (unpredictable issue, value), for debugging and tests.
  std::vector<CountRow> dump() const;

 private:
  const NegotiationDomain* domain_ = nullptr;
  double alpha_ = 1.0;
  std::uint64_t n_samples_[2] = {0, 0};
  std::vector<std::vector<std::uint64_t>> counts_[2];  // [hypothesis][un pos][value]
};

}  // namespace teamnego