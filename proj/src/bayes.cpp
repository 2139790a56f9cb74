#include "teamnego/bayes.hpp"

#include <cstddef>

#include "teamnego/errors.hpp"

namespace teamnego {

BayesianAcceptanceModel::BayesianAcceptanceModel(const NegotiationDomain& d, double alpha)
    : domain_(&d), alpha_(alpha) {
  if (alpha < 0.0) throw ConfigError("acceptance model needs alpha >= 0");
  if (!d.un_all_discrete())
    throw ConfigError("acceptance model needs discrete unpredictable issues");
  for (int h = 0; h < 2; ++h) {
    counts_[h].resize(d.un_issues().size());
    for (std::size_t k = 0; k < d.un_issues().size(); ++k)
      counts_[h][k].assign(d.issue(d.un_issues()[k]).label_count(), 0);
  }
}

void BayesianAcceptanceModel::update(const UnpredictablePartialOffer& p, AcceptanceLabel label) {
  if (!domain_) throw ConfigError("acceptance model not bound to a domain");
  domain_->check_partial(p);
  auto h = static_cast<std::size_t>(label == AcceptanceLabel::Rejected);
  n_samples_[h] += 1;
  for (std::size_t k = 0; k < p.labels.size(); ++k)
    counts_[h][k][static_cast<std::size_t>(p.labels[k])] += 1;
}

double BayesianAcceptanceModel::prior(AcceptanceLabel h) const {
  double total = static_cast<double>(n_samples_[0] + n_samples_[1]);
  if (total + 2.0 * alpha_ == 0.0) return 0.5;
  auto i = static_cast<std::size_t>(h == AcceptanceLabel::Rejected);
  return (static_cast<double>(n_samples_[i]) + alpha_) / (total + 2.0 * alpha_);
}

double BayesianAcceptanceModel::conditional(std::size_t un_position, std::int32_t value,
                                            AcceptanceLabel h) const {
  if (!domain_) throw ConfigError("acceptance model not bound to a domain");
  auto i = static_cast<std::size_t>(h == AcceptanceLabel::Rejected);
  const auto& row = counts_[i][un_position];
  double n_h = static_cast<double>(n_samples_[i]);
  double denom = n_h + alpha_ * static_cast<double>(row.size());
  if (denom == 0.0) return 1.0 / static_cast<double>(row.size());
  return (static_cast<double>(row[static_cast<std::size_t>(value)]) + alpha_) / denom;
}

double BayesianAcceptanceModel::posterior_accept(const UnpredictablePartialOffer& p) const {
  if (!domain_) throw ConfigError("acceptance model not bound to a domain");
  domain_->check_partial(p);
  double num[2];
  for (auto h : {AcceptanceLabel::Accepted, AcceptanceLabel::Rejected}) {
    auto i = static_cast<std::size_t>(h == AcceptanceLabel::Rejected);
    num[i] = prior(h);
    for (std::size_t k = 0; k < p.labels.size(); ++k) num[i] *= conditional(k, p.labels[k], h);
  }
  double total = num[0] + num[1];
  if (total == 0.0) return 0.5;
  return num[0] / total;
}

std::uint64_t BayesianAcceptanceModel::samples(AcceptanceLabel label) const {
  return n_samples_[static_cast<std::size_t>(label == AcceptanceLabel::Rejected)];
}

std::vector<BayesianAcceptanceModel::CountRow> BayesianAcceptanceModel::dump() const {
  if (!domain_) throw ConfigError("acceptance model not bound to a domain");
  std::vector<CountRow> rows;
  const auto& un = domain_->un_issues();
  for (std::size_t k = 0; k < un.size(); ++k) {
    auto labels = domain_->issue(un[k]).label_count();
    for (std::size_t v = 0; v < labels; ++v) {
      CountRow r;
      r.issue_id = un[k];
      r.value = static_cast<std::int32_t>(v);
      r.accepted = counts_[0][k][v];
      r.rejected = counts_[1][k][v];
      r.p_given_accepted = conditional(k, r.value, AcceptanceLabel::Accepted);
      r.p_given_rejected = conditional(k, r.value, AcceptanceLabel::Rejected);
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace teamnego