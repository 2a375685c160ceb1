#pragma once

#include <string>
#include <vector>

#include "aruc/norms.hpp"

namespace aruc {

// One generator's offer. Single-period instances use commit_cost/energy_cost/
// cap_max only; multiperiod instances add no-load and start-up costs, ramp
// limits and minimum up/down times. An infinite ramp_rate disables every ramp
// row for that generator.
struct GeneratorSpec {
    std::string id;
    double commit_cost = 0.0;    // F, per committed period (single-period model)
    double energy_cost = 0.0;    // C, per MWh
    double cap_max = 0.0;        // expected maximum output
    double cap_min = 0.0;
    double no_load_cost = 0.0;   // per hour on (multiperiod)
    double startup_cost = 0.0;
    double ramp_rate = kInfMw;   // MW/hour
    double startup_rate = kInfMw;
    double shutdown_rate = kInfMw;
    int min_up = 1;
    int min_down = 1;
    bool initial_on = false;
    double initial_dispatch = 0.0;

    static constexpr double kInfMw = 1e30;
    bool ramp_limited() const { return ramp_rate < kInfMw; }
};

struct DemandNode {
    std::string id;
    std::vector<double> expected_load;  // one value per period
};

struct UncertaintySpec {
    NormOrder norm_order = NormOrder::One;
    std::vector<double> gamma_q;  // load budget per period
    std::vector<double> delta_p;  // capacity budget per period

    // The load residuals live in the norm_order ball of radius gamma_q.
    // Capacity protection is per generator: each unit may lose up to delta_p
    // simultaneously, so the capacity set is the Linf box of that radius
    // whatever the load-set family is.
    NormOrder load_set_order() const { return norm_order; }
    NormOrder capacity_set_order() const { return NormOrder::Inf; }
};

struct UCInstance {
    std::vector<GeneratorSpec> generators;
    std::vector<DemandNode> demand_nodes;
    int periods = 1;
    UncertaintySpec uncertainty;

    int num_generators() const { return static_cast<int>(generators.size()); }
    int num_nodes() const { return static_cast<int>(demand_nodes.size()); }
    double total_load(int t) const;
    void validate() const;  // throws ValidationError
};

struct RealizationVector {
    // load_residual[t][j], capacity_residual[t][k]
    std::vector<std::vector<double>> load_residual;
    std::vector<std::vector<double>> capacity_residual;

    bool within(const UCInstance& inst, double tol = 1e-9) const;
};

// Instance document I/O (JSON). Parse errors name the offending field;
// invariant violations raise ValidationError naming the rule.
UCInstance load_instance(const std::string& document);
UCInstance load_instance_file(const std::string& path);
std::string serialize_instance(const UCInstance& inst);

// Built-in paper instances: "scarf", "scarf-capacity", "chen-multiperiod".
UCInstance builtin_instance(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace aruc
