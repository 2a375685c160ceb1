#pragma once

#include <span>
#include <string>
#include <vector>

namespace aruc {

// Norm families used by the uncertainty sets: L1 (budget), L2 (ellipsoidal),
// Linf (box).
enum class NormOrder { One, Two, Inf };

NormOrder parse_norm_order(const std::string& s);       // "L1" | "L2" | "Linf"
std::string to_string(NormOrder order);

double norm(std::span<const double> v, NormOrder order);

// L1 and Linf are dual to each other, L2 is self-dual.
NormOrder dual_order(NormOrder order);

struct BallMax {
    double value = 0.0;           // radius * dual-norm of c
    std::vector<double> argmax;   // a point of the ball attaining the value
};

// Closed-form maximizer of c'x over the `order`-ball of the given radius.
// Ties on the L1 ball are broken toward the lowest index; zero coefficients
// get zero mass so the argmax is deterministic.
BallMax max_linear_over_ball(std::span<const double> c, NormOrder order, double radius);

}  // namespace aruc
