#pragma once

#include <optional>

#include "teamnego/domain.hpp"
#include "teamnego/rng.hpp"
#include "teamnego/strategies.hpp"

namespace teamnego {

// Per-issue similarity between two full offers, equally weighted: real
// issues contribute the negated normalized distance, discrete issues an
// exact-match indicator.
double offer_similarity(const NegotiationDomain& d, const Offer& a,
                        const Offer& b);

Offer random_offer(const NegotiationDomain& d, Rng& rng);

// Random search for a full offer at the member's aspiration level that is
// closest to the opponent's last offer. Without a reference offer, or when
// no sample reaches the aspiration, falls back to the best sampled utility.
Offer similarity_member_propose(const MemberContext& m,
                         const std::optional<Offer>& opponent_last, double t,
                         Rng& rng, int budget = 5000);

}  // namespace teamnego