#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aruc/model.hpp"

namespace aruc {

struct VerificationCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;
    bool all_pass() const;
    void add(const std::string& name, bool pass, const std::string& detail = "");
};

// Runs the full invariant and theorem suite on one instance: structural laws
// of the solved policy, dual identities, the three pricing theorems, the
// deterministic reduction, budget monotonicity, sampled feasibility and the
// intraday bound checks (single-period instances). Sampling uses the given
// seed so runs are reproducible.
VerificationReport verify_instance(const UCInstance& inst, std::uint64_t seed = 0);

}  // namespace aruc
