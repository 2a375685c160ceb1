#include "aruc/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aruc/errors.hpp"

namespace aruc {

NormOrder parse_norm_order(const std::string& s) {
    if (s == "L1" || s == "l1" || s == "1") return NormOrder::One;
    if (s == "L2" || s == "l2" || s == "2") return NormOrder::Two;
    if (s == "Linf" || s == "linf" || s == "inf") return NormOrder::Inf;
    throw ParseError("unknown norm order '" + s + "' (expected L1, L2 or Linf)");
}

std::string to_string(NormOrder order) {
    switch (order) {
        case NormOrder::One: return "L1";
        case NormOrder::Two: return "L2";
        case NormOrder::Inf: return "Linf";
    }
    return "?";
}

double norm(std::span<const double> v, NormOrder order) {
    double acc = 0.0;
    switch (order) {
        case NormOrder::One:
            for (double x : v) acc += std::abs(x);
            return acc;
        case NormOrder::Two:
            for (double x : v) acc += x * x;
            return std::sqrt(acc);
        case NormOrder::Inf:
            for (double x : v) acc = std::max(acc, std::abs(x));
            return acc;
    }
    return 0.0;
}

NormOrder dual_order(NormOrder order) {
    switch (order) {
        case NormOrder::One: return NormOrder::Inf;
        case NormOrder::Two: return NormOrder::Two;
        case NormOrder::Inf: return NormOrder::One;
    }
    return NormOrder::Two;
}

BallMax max_linear_over_ball(std::span<const double> c, NormOrder order, double radius) {
    BallMax out;
    out.argmax.assign(c.size(), 0.0);
    out.value = radius * norm(c, dual_order(order));
    if (radius == 0.0 || c.empty()) {
        out.value = 0.0;
        return out;
    }
    switch (order) {
        case NormOrder::One: {
            // All mass on the largest |c_j|, lowest index first.
            std::size_t best = 0;
            double best_abs = 0.0;
            for (std::size_t j = 0; j < c.size(); ++j) {
                if (std::abs(c[j]) > best_abs) {
                    best_abs = std::abs(c[j]);
                    best = j;
                }
            }
            if (best_abs == 0.0) {
                out.value = 0.0;
                return out;
            }
            out.argmax[best] = c[best] > 0 ? radius : -radius;
            break;
        }
        case NormOrder::Two: {
            double n2 = norm(c, NormOrder::Two);
            if (n2 == 0.0) {
                out.value = 0.0;
                return out;
            }
            for (std::size_t j = 0; j < c.size(); ++j) out.argmax[j] = radius * c[j] / n2;
            break;
        }
        case NormOrder::Inf: {
            for (std::size_t j = 0; j < c.size(); ++j) {
                if (c[j] > 0)
                    out.argmax[j] = radius;
                else if (c[j] < 0)
                    out.argmax[j] = -radius;
            }
            break;
        }
    }
    return out;
}

}  // namespace aruc
