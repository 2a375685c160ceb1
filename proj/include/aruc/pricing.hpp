#pragma once

#include <string>
#include <utility>
#include <vector>

#include "aruc/model.hpp"
#include "aruc/robust.hpp"

namespace aruc {

struct PaymentRow {
    std::string generator;
    double commitment = 0.0;
    double energy = 0.0;
    double uncertainty = 0.0;
    double uplift = 0.0;
    double total() const { return commitment + energy + uncertainty + uplift; }
};

struct PaymentTable {
    std::string scheme;
    std::vector<PaymentRow> rows;
    double grand_total() const;
    std::string to_csv() const;  // scheme,generator,commitment,energy,uncertainty,uplift,total
};

// Day-ahead pay-as-bid: bids times committed quantities, nothing else.
PaymentTable pay_as_bid_day_ahead(const AroSolution& sol, const UCInstance& inst);

// Day-ahead uniform pricing: balance price on the non-adaptive dispatch,
// commitment-fixing duals as uplift, and the priced uncertainty components.
// Totals match pay-as-bid generator by generator.
PaymentTable adaptive_uniform_day_ahead(const AroSolution& sol, const DualCertificate& cert,
                                        const UCInstance& inst);

// Settlement at the worst-case realization; asserts the pay-as-bid route f
// equals the priced route g per generator and that both add up to the
// optimal objective (throws InternalConsistencyError otherwise).
std::pair<PaymentTable, PaymentTable> worst_case_settlement(const AroSolution& sol,
                                                            const DualCertificate& cert,
                                                            const UCInstance& inst);

// Deterministic two-phase marginal pricing (commitment MILP, then LP duals
// at fixed commitments). Totals equal deterministic pay-as-bid.
PaymentTable deterministic_marginal(const UCInstance& inst);

struct ConvexHullResult {
    std::vector<double> prices;             // per period
    double dual_objective = 0.0;
    double uc_objective = 0.0;
    double duality_gap = 0.0;               // uc_objective - dual_objective
    std::vector<double> lost_opportunity;   // per generator, >= 0
    std::vector<double> reconciliation;     // as-bid payment minus price revenue
};

// Lagrangian-dual (convex hull) prices via exhaustive schedule enumeration
// and dispatch-polytope vertices; lexicographically smallest optimal price
// vector. Intended for small multiperiod instances.
ConvexHullResult convex_hull_prices(const UCInstance& inst);

}  // namespace aruc
