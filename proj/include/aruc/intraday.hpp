#pragma once

#include <string>
#include <vector>

#include "aruc/model.hpp"
#include "aruc/robust.hpp"

namespace aruc {

struct IntradayResult {
    double realized_total = 0.0;    // sum of realized residual load
    std::vector<double> dispatch;   // optimal incremental dispatch per generator
    double cost = 0.0;              // incremental dispatch cost
    double adaptive_bound = 0.0;    // day-ahead adaptive part at this residual
    double marginal_price = 0.0;
};

// Next-day economic dispatch of the realized residual load against the
// capacity left over by the day-ahead commitments (single-period model).
// The marginal price is the left price of the merit order, which is an
// optimal balance dual of the dispatch LP.
IntradayResult intraday_dispatch(const UCInstance& inst, const AroSolution& sol,
                                 const std::vector<double>& residual_load);

// Evaluates the dispatch at `grid` equally spaced residual totals in
// [0, gamma_q], all placed on the first node.
std::vector<IntradayResult> realization_sweep(const UCInstance& inst, const AroSolution& sol,
                                              int grid);

std::string sweep_to_csv(const std::vector<IntradayResult>& sweep);

struct ProfitReport {
    std::string generator;
    double centralized = 0.0;    // profit of the market schedule at market prices
    double decentralized = 0.0;  // best self-schedule profit at the same prices
    bool self_schedule_incentive = false;
};

// Generator i's self-scheduling audit: solves its individual profit MILP at
// the centralized prices and worst-case realization. With enforce set, a
// positive gap (or nonzero centralized profit) raises
// InternalConsistencyError; audit mode just reports.
ProfitReport decentralized_profit(const UCInstance& inst, const DualCertificate& cert,
                                  const AroSolution& sol, int generator, bool enforce = true);

}  // namespace aruc
