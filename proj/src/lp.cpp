#include "aruc/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <optional>

#include "aruc/errors.hpp"

namespace aruc {

namespace {

constexpr double kPivotTol = 1e-9;   // minimum acceptable pivot magnitude
constexpr double kDualTol = 1e-9;    // reduced-cost attractiveness threshold
constexpr double kFeasTol = 1e-7;    // row feasibility
constexpr double kDegenTol = 1e-11;  // step sizes below this count as degenerate
constexpr int kBlandAfter = 1000;    // degenerate pivots before Bland's rule
constexpr int kRefactorEvery = 64;

enum class VarState { Basic, AtLower, AtUpper, FreeZero };

// Bounded-variable revised simplex over the computational form
//   min c'v  s.t.  [A I I] v = b,  lb <= v <= ub
// with one slack and one artificial column per row. The artificial columns
// carry phase-1 infeasibility and are pinned to zero afterwards.
class Simplex {
public:
    Simplex(const LpProblem& p, const std::vector<double>& lower, const std::vector<double>& upper)
        : p_(p), n_(p.num_vars()), m_(p.num_rows()), total_(n_ + 2 * m_) {
        iter_limit_ = 100L * (m_ + n_);
        cols_.assign(total_, {});
        lb_.assign(total_, 0.0);
        ub_.assign(total_, 0.0);
        val_.assign(total_, 0.0);
        state_.assign(total_, VarState::AtLower);

        for (int j = 0; j < n_; ++j) {
            lb_[j] = lower[j];
            ub_[j] = upper[j];
            if (std::isfinite(lb_[j])) {
                state_[j] = VarState::AtLower;
                val_[j] = lb_[j];
            } else if (std::isfinite(ub_[j])) {
                state_[j] = VarState::AtUpper;
                val_[j] = ub_[j];
            } else {
                state_[j] = VarState::FreeZero;
                val_[j] = 0.0;
            }
        }
        b_ = Eigen::VectorXd::Zero(m_);
        for (int r = 0; r < m_; ++r) {
            const auto& row = p.rows[r];
            for (auto [j, a] : row.coef)
                if (a != 0.0) cols_[j].emplace_back(r, a);
            int s = n_ + r;
            cols_[s].emplace_back(r, 1.0);
            switch (row.rel) {
                case Rel::Le: lb_[s] = 0.0; ub_[s] = kInf; break;
                case Rel::Ge: lb_[s] = -kInf; ub_[s] = 0.0; break;
                case Rel::Eq: lb_[s] = 0.0; ub_[s] = 0.0; break;
            }
            state_[s] = VarState::AtLower;
            if (!std::isfinite(lb_[s])) state_[s] = VarState::AtUpper;
            val_[s] = 0.0;
            b_(r) = row.rhs;
        }
        // Crash basis: each row's slack enters the basis when the initial
        // residual respects its bounds; otherwise the row's artificial
        // column carries the infeasibility into phase 1.
        basis_.resize(m_);
        beta_ = Eigen::VectorXd::Zero(m_);
        Eigen::VectorXd resid = b_;
        for (int j = 0; j < n_; ++j)
            if (val_[j] != 0.0)
                for (auto [r, a] : cols_[j]) resid(r) -= a * val_[j];
        for (int r = 0; r < m_; ++r) {
            int s = n_ + r;
            int a = n_ + m_ + r;
            cols_[a].emplace_back(r, 1.0);
            lb_[a] = 0.0;
            ub_[a] = 0.0;
            if (resid(r) >= lb_[s] - 1e-12 && resid(r) <= ub_[s] + 1e-12) {
                state_[s] = VarState::Basic;
                basis_[r] = s;
                state_[a] = VarState::AtLower;
                val_[a] = 0.0;
            } else {
                lb_[a] = std::min(0.0, resid(r));
                ub_[a] = std::max(0.0, resid(r));
                state_[a] = VarState::Basic;
                basis_[r] = a;
                // the slack stays nonbasic at zero as initialized
            }
            beta_(r) = resid(r);
        }
        in_basis_.assign(total_, false);
        for (int k : basis_) in_basis_[k] = true;
        factorize();
    }

    LpSolution run() {
        iterations_ = 0;
        LpSolution sol;
        // Phase 1: drive artificial residuals to zero.
        Eigen::VectorXd c1 = Eigen::VectorXd::Zero(total_);
        bool need_phase1 = false;
        for (int r = 0; r < m_; ++r) {
            int a = n_ + m_ + r;
            if (basis_[r] != a) continue;
            need_phase1 = true;
            if (beta_(r) > 0)
                c1(a) = 1.0;
            else if (beta_(r) < 0)
                c1(a) = -1.0;
        }
        bool unbounded = need_phase1 ? iterate(c1, nullptr) : false;
        if (unbounded) throw InternalConsistencyError("phase-1 objective cannot be unbounded");
        double infeas = need_phase1 ? phase_objective(c1) : 0.0;
        double scale = 1.0 + b_.cwiseAbs().maxCoeff();
        if (infeas > kFeasTol * scale) {
            sol.status = LpStatus::Infeasible;
            Eigen::VectorXd y = btran(basic_costs(c1));
            sol.farkas_ray.assign(y.data(), y.data() + m_);
            sol.iterations = iterations_;
            last_optimal_ = false;
            return sol;
        }
        // Pin artificials for phase 2.
        for (int r = 0; r < m_; ++r) {
            int a = n_ + m_ + r;
            lb_[a] = 0.0;
            ub_[a] = 0.0;
            if (!in_basis_[a]) {
                state_[a] = VarState::AtLower;
                val_[a] = 0.0;
            }
        }
        return finish_primal(sol);
    }

    // Warm re-solve after bound changes: the old basis stays dual feasible,
    // so a bounded-variable dual simplex restores primal feasibility.
    // Returns nothing when the repair stalls; the caller falls back to a
    // cold solve.
    std::optional<LpSolution> resolve(const std::vector<double>& lower,
                                      const std::vector<double>& upper) {
        if (!last_optimal_) return std::nullopt;
        iterations_ = 0;
        for (int j = 0; j < n_; ++j) {
            lb_[j] = lower[j];
            ub_[j] = upper[j];
            if (in_basis_[j]) continue;
            switch (state_[j]) {
                case VarState::AtLower:
                    if (std::isfinite(lb_[j])) {
                        val_[j] = lb_[j];
                    } else if (std::isfinite(ub_[j])) {
                        state_[j] = VarState::AtUpper;
                        val_[j] = ub_[j];
                    } else {
                        state_[j] = VarState::FreeZero;
                        val_[j] = 0.0;
                    }
                    break;
                case VarState::AtUpper:
                    if (std::isfinite(ub_[j])) {
                        val_[j] = ub_[j];
                    } else if (std::isfinite(lb_[j])) {
                        state_[j] = VarState::AtLower;
                        val_[j] = lb_[j];
                    } else {
                        state_[j] = VarState::FreeZero;
                        val_[j] = 0.0;
                    }
                    break;
                default:
                    break;
            }
        }
        factorize();
        LpSolution sol;
        int repair = dual_repair();
        if (repair < 0) return std::nullopt;
        if (repair > 0) {
            sol.status = LpStatus::Infeasible;
            sol.farkas_ray.assign(m_, 0.0);
            sol.iterations = iterations_;
            last_optimal_ = false;
            return sol;
        }
        return finish_primal(sol);
    }

private:
    LpSolution finish_primal(LpSolution& sol) {
        Eigen::VectorXd c2 = Eigen::VectorXd::Zero(total_);
        double sgn = (p_.sense == Sense::Maximize) ? -1.0 : 1.0;
        for (int j = 0; j < n_; ++j) c2(j) = sgn * p_.cost[j];
        int ray_var = -1;
        double ray_dir = 0.0;
        bool unbounded = iterate(c2, &ray_var, &ray_dir);
        sol.iterations = iterations_;
        if (unbounded) {
            sol.status = LpStatus::Unbounded;
            sol.unbounded_ray.assign(n_, 0.0);
            Eigen::VectorXd d = ftran(dense_col(ray_var));
            if (ray_var < n_) sol.unbounded_ray[ray_var] = ray_dir;
            for (int i = 0; i < m_; ++i)
                if (basis_[i] < n_) sol.unbounded_ray[basis_[i]] = -ray_dir * d(i);
            last_optimal_ = false;
            return sol;
        }
        sol.status = LpStatus::Optimal;
        sol.x.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) sol.x[j] = val_[j];
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_) sol.x[basis_[i]] = beta_(i);
        double lin = 0.0;
        for (int j = 0; j < n_; ++j) lin += p_.cost[j] * sol.x[j];
        sol.objective = lin + p_.objective_offset;

        Eigen::VectorXd y = btran(basic_costs(c2));
        sol.row_dual.assign(m_, 0.0);
        sol.reduced_cost.assign(n_, 0.0);
        for (int r = 0; r < m_; ++r) sol.row_dual[r] = sgn * y(r);
        for (int j = 0; j < n_; ++j) sol.reduced_cost[j] = sgn * (c2(j) - sparse_dot(j, y));
        last_optimal_ = true;
        return sol;
    }

    // Bounded-variable dual simplex starting from a dual-feasible basis.
    // Returns 0 when primal feasibility is restored, 1 when the problem is
    // primal infeasible, -1 when the repair gives up.
    int dual_repair() {
        Eigen::VectorXd c2 = Eigen::VectorXd::Zero(total_);
        double sgn = (p_.sense == Sense::Maximize) ? -1.0 : 1.0;
        for (int j = 0; j < n_; ++j) c2(j) = sgn * p_.cost[j];
        const long cap = iter_limit_;
        while (true) {
            if (iterations_ > cap) return -1;
            int pos = -1;
            double worst = kFeasTol;
            bool below = false;
            for (int i = 0; i < m_; ++i) {
                int k = basis_[i];
                double lo_v = lb_[k] - beta_(i), hi_v = beta_(i) - ub_[k];
                if (lo_v > worst) {
                    worst = lo_v;
                    pos = i;
                    below = true;
                }
                if (hi_v > worst) {
                    worst = hi_v;
                    pos = i;
                    below = false;
                }
            }
            if (pos < 0) return 0;
            Eigen::VectorXd unit = Eigen::VectorXd::Zero(m_);
            unit(pos) = 1.0;
            Eigen::VectorXd erow = btran(unit);
            Eigen::VectorXd y = btran(basic_costs(c2));
            int enter = -1;
            double best_ratio = kInf, best_alpha = 0.0;
            for (int j = 0; j < total_; ++j) {
                if (in_basis_[j] || lb_[j] == ub_[j]) continue;
                double alpha = sparse_dot(j, erow);
                if (std::abs(alpha) <= kPivotTol) continue;
                bool candidate;
                if (state_[j] == VarState::FreeZero)
                    candidate = true;
                else if (below)
                    candidate = (state_[j] == VarState::AtLower && alpha < 0) ||
                                (state_[j] == VarState::AtUpper && alpha > 0);
                else
                    candidate = (state_[j] == VarState::AtLower && alpha > 0) ||
                                (state_[j] == VarState::AtUpper && alpha < 0);
                if (!candidate) continue;
                double rc = c2(j) - sparse_dot(j, y);
                double ratio = std::abs(rc) / std::abs(alpha);
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && std::abs(alpha) > std::abs(best_alpha))) {
                    best_ratio = ratio;
                    best_alpha = alpha;
                    enter = j;
                }
            }
            if (enter < 0) return 1;  // no entering column: primal infeasible
            int leaving = basis_[pos];
            double target = below ? lb_[leaving] : ub_[leaving];
            Eigen::VectorXd d = ftran(dense_col(enter));
            if (std::abs(d(pos)) <= kPivotTol) return -1;
            double step = (beta_(pos) - target) / d(pos);
            ++iterations_;
            beta_ -= step * d;
            val_[leaving] = target;
            state_[leaving] = below ? VarState::AtLower : VarState::AtUpper;
            in_basis_[leaving] = false;
            double enter_val = val_[enter] + step;
            basis_[pos] = enter;
            in_basis_[enter] = true;
            state_[enter] = VarState::Basic;
            beta_(pos) = enter_val;
            if (static_cast<int>(etas_pos_.size()) >= kRefactorEvery) {
                factorize();
            } else {
                etas_pos_.push_back(pos);
                etas_vec_.push_back(d);
            }
        }
    }

private:
    Eigen::VectorXd basic_costs(const Eigen::VectorXd& c) const {
        Eigen::VectorXd cb(m_);
        for (int i = 0; i < m_; ++i) cb(i) = c(basis_[i]);
        return cb;
    }

    double phase_objective(const Eigen::VectorXd& c) const {
        double obj = 0.0;
        for (int j = 0; j < total_; ++j)
            if (!in_basis_[j] && c(j) != 0.0) obj += c(j) * val_[j];
        for (int i = 0; i < m_; ++i) obj += c(basis_[i]) * beta_(i);
        return obj;
    }

    void factorize() {
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m_, m_);
        for (int i = 0; i < m_; ++i)
            for (auto [r, a] : cols_[basis_[i]]) B(r, i) = a;
        lu_.compute(B);
        etas_pos_.clear();
        etas_vec_.clear();
        // Recompute basic values from scratch to shed accumulated drift.
        Eigen::VectorXd rhs = b_;
        for (int j = 0; j < total_; ++j)
            if (!in_basis_[j] && val_[j] != 0.0)
                for (auto [r, a] : cols_[j]) rhs(r) -= a * val_[j];
        beta_ = lu_.solve(rhs);
    }

    Eigen::VectorXd dense_col(int j) const {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(m_);
        for (auto [r, a] : cols_[j]) v(r) += a;
        return v;
    }

    double sparse_dot(int j, const Eigen::VectorXd& y) const {
        double s = 0.0;
        for (auto [r, a] : cols_[j]) s += a * y(r);
        return s;
    }

    Eigen::VectorXd ftran(const Eigen::VectorXd& v) const {
        Eigen::VectorXd z = lu_.solve(v);
        for (std::size_t e = 0; e < etas_pos_.size(); ++e) {
            int p = etas_pos_[e];
            const Eigen::VectorXd& d = etas_vec_[e];
            double t = z(p) / d(p);
            if (t != 0.0) {
                z -= d * t;
                z(p) = t;
            } else {
                z(p) = 0.0;
            }
        }
        return z;
    }

    Eigen::VectorXd btran(const Eigen::VectorXd& c) const {
        Eigen::VectorXd z = c;
        for (std::size_t e = etas_pos_.size(); e-- > 0;) {
            int p = etas_pos_[e];
            const Eigen::VectorXd& d = etas_vec_[e];
            double acc = z(p);
            for (int i = 0; i < m_; ++i)
                if (i != p) acc -= d(i) * z(i);
            z(p) = acc / d(p);
        }
        return lu_.adjoint().solve(z);
    }

    // Runs the simplex to optimality for cost vector c. Returns true when the
    // problem is unbounded in this phase (only possible in phase 2).
    bool iterate(const Eigen::VectorXd& c, int* ray_var, double* ray_dir = nullptr) {
        int degenerate = 0;
        bool bland = false;
        while (true) {
            if (iterations_ > iter_limit_)
                throw ResourceLimitError("simplex pivot limit " + std::to_string(iter_limit_) +
                                         " exceeded");
            Eigen::VectorXd y = btran(basic_costs(c));
            int enter = -1;
            double dir = 0.0, best = kDualTol;
            for (int j = 0; j < total_; ++j) {
                if (in_basis_[j] || lb_[j] == ub_[j]) continue;
                double rc = c(j) - sparse_dot(j, y);
                double score = 0.0, d = 0.0;
                switch (state_[j]) {
                    case VarState::AtLower:
                        if (rc < -kDualTol) { score = -rc; d = 1.0; }
                        break;
                    case VarState::AtUpper:
                        if (rc > kDualTol) { score = rc; d = -1.0; }
                        break;
                    case VarState::FreeZero:
                        if (std::abs(rc) > kDualTol) { score = std::abs(rc); d = rc < 0 ? 1.0 : -1.0; }
                        break;
                    case VarState::Basic: break;
                }
                if (score == 0.0) continue;
                if (bland) { enter = j; dir = d; break; }
                if (score > best) { best = score; enter = j; dir = d; }
            }
            if (enter < 0) return false;  // optimal for this phase

            Eigen::VectorXd d = ftran(dense_col(enter));
            // Ratio test: entering variable's own range plus basic bounds.
            double limit = kInf;
            int leave_pos = -1;       // -1 means bound flip of the entering var
            bool leave_to_upper = false;
            double own = kInf;
            if (dir > 0 && std::isfinite(ub_[enter])) own = ub_[enter] - val_[enter];
            if (dir < 0 && std::isfinite(lb_[enter])) own = val_[enter] - lb_[enter];
            limit = own;
            double best_piv = 0.0;
            for (int i = 0; i < m_; ++i) {
                double rate = -dir * d(i);  // change of beta_(i) per unit step
                if (rate > kPivotTol) {
                    int k = basis_[i];
                    if (!std::isfinite(ub_[k])) continue;
                    double ratio = (ub_[k] - beta_(i)) / rate;
                    if (ratio < -kFeasTol) ratio = 0.0;
                    take_candidate(ratio, i, true, std::abs(d(i)), bland, limit, leave_pos,
                                   leave_to_upper, best_piv);
                } else if (rate < -kPivotTol) {
                    int k = basis_[i];
                    if (!std::isfinite(lb_[k])) continue;
                    double ratio = (beta_(i) - lb_[k]) / (-rate);
                    if (ratio < -kFeasTol) ratio = 0.0;
                    take_candidate(ratio, i, false, std::abs(d(i)), bland, limit, leave_pos,
                                   leave_to_upper, best_piv);
                }
            }
            if (!std::isfinite(limit)) {
                if (ray_var) {
                    *ray_var = enter;
                    if (ray_dir) *ray_dir = dir;
                }
                return true;
            }
            double step = std::max(limit, 0.0);
            if (step <= kDegenTol) {
                if (++degenerate >= kBlandAfter) bland = true;
            } else {
                degenerate = 0;
            }
            ++iterations_;
            beta_ -= dir * step * d;
            if (leave_pos < 0) {
                // Entering variable runs to its opposite bound.
                val_[enter] = dir > 0 ? ub_[enter] : lb_[enter];
                state_[enter] = dir > 0 ? VarState::AtUpper : VarState::AtLower;
                continue;
            }
            int leaving = basis_[leave_pos];
            val_[leaving] = leave_to_upper ? ub_[leaving] : lb_[leaving];
            state_[leaving] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
            in_basis_[leaving] = false;
            double enter_val = val_[enter] + dir * step;
            basis_[leave_pos] = enter;
            in_basis_[enter] = true;
            state_[enter] = VarState::Basic;
            beta_(leave_pos) = enter_val;
            if (static_cast<int>(etas_pos_.size()) >= kRefactorEvery) {
                factorize();
            } else {
                etas_pos_.push_back(leave_pos);
                etas_vec_.push_back(d);
            }
        }
    }

    void take_candidate(double ratio, int pos, bool to_upper, double piv, bool bland,
                        double& limit, int& leave_pos, bool& leave_to_upper,
                        double& best_piv) const {
        constexpr double kTieTol = 1e-9;
        bool better;
        if (ratio < limit - kTieTol) {
            better = true;
        } else if (ratio <= limit + kTieTol) {
            if (bland) {
                better = leave_pos < 0 || basis_[pos] < basis_[leave_pos];
            } else {
                better = leave_pos < 0 || piv > best_piv;
            }
        } else {
            return;
        }
        if (better) {
            limit = std::min(limit, std::max(ratio, 0.0));
            leave_pos = pos;
            leave_to_upper = to_upper;
            best_piv = piv;
        }
    }

    const LpProblem& p_;
    int n_, m_, total_;
    long iter_limit_;
    long iterations_ = 0;
    std::vector<std::vector<std::pair<int, double>>> cols_;
    Eigen::VectorXd b_;
    std::vector<double> lb_, ub_, val_;
    std::vector<VarState> state_;
    std::vector<int> basis_;
    std::vector<bool> in_basis_;
    Eigen::VectorXd beta_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    std::vector<int> etas_pos_;
    std::vector<Eigen::VectorXd> etas_vec_;
    bool last_optimal_ = false;
};

}  // namespace

struct WarmImpl {
    explicit WarmImpl(const LpProblem& p, const std::vector<double>& lo,
                      const std::vector<double>& hi)
        : engine(p, lo, hi) {}
    Simplex engine;
};

LpWarmSolver::LpWarmSolver(const LpProblem& p) : p_(p) { p.validate(); }

LpWarmSolver::~LpWarmSolver() = default;

LpSolution LpWarmSolver::solve(const std::vector<double>& lower,
                               const std::vector<double>& upper) {
    if (p_.num_rows() == 0) return solve_lp(p_, lower, upper);
    if (impl_) {
        auto warm = impl_->engine.resolve(lower, upper);
        if (warm) return *warm;
    }
    impl_ = std::make_unique<WarmImpl>(p_, lower, upper);
    return impl_->engine.run();
}

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

int LpProblem::add_var(double lb, double ub, double c) {
    cost.push_back(c);
    lower.push_back(lb);
    upper.push_back(ub);
    return static_cast<int>(cost.size()) - 1;
}

int LpProblem::add_row(Rel rel, double rhs, std::vector<std::pair<int, double>> coef) {
    rows.push_back(Row{std::move(coef), rel, rhs});
    return static_cast<int>(rows.size()) - 1;
}

void LpProblem::add_coef(int row, int var, double value) {
    rows.at(row).coef.emplace_back(var, value);
}

void LpProblem::validate() const {
    int n = num_vars();
    if (lower.size() != cost.size() || upper.size() != cost.size())
        throw DimensionError("bounds arrays do not match the cost vector");
    for (int j = 0; j < n; ++j) {
        if (!std::isfinite(cost[j])) throw DimensionError("non-finite cost coefficient");
        if (lower[j] > upper[j] + 1e-12)
            throw DimensionError("variable " + std::to_string(j) + " has crossed bounds");
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!std::isfinite(rows[r].rhs))
            throw DimensionError("row " + std::to_string(r) + " has non-finite rhs");
        for (auto [j, a] : rows[r].coef) {
            if (j < 0 || j >= n)
                throw DimensionError("row " + std::to_string(r) + " references variable " +
                                     std::to_string(j) + " out of range");
            if (!std::isfinite(a))
                throw DimensionError("row " + std::to_string(r) + " has non-finite coefficient");
        }
    }
}

LpSolution solve_lp(const LpProblem& p) { return solve_lp(p, p.lower, p.upper); }

namespace {

// Row-free problems reduce to independent bound choices.
LpSolution solve_unconstrained(const LpProblem& p, const std::vector<double>& lower,
                               const std::vector<double>& upper) {
    LpSolution sol;
    double sgn = p.sense == Sense::Maximize ? -1.0 : 1.0;
    sol.x.assign(p.num_vars(), 0.0);
    sol.reduced_cost = p.cost;
    for (int j = 0; j < p.num_vars(); ++j) {
        double c = sgn * p.cost[j];
        if (c > 0) {
            if (!std::isfinite(lower[j])) { sol.status = LpStatus::Unbounded; }
            sol.x[j] = std::isfinite(lower[j]) ? lower[j] : 0.0;
        } else if (c < 0) {
            if (!std::isfinite(upper[j])) { sol.status = LpStatus::Unbounded; }
            sol.x[j] = std::isfinite(upper[j]) ? upper[j] : 0.0;
        } else {
            sol.x[j] = std::isfinite(lower[j]) ? lower[j] : (std::isfinite(upper[j]) ? upper[j] : 0.0);
        }
    }
    if (sol.status == LpStatus::Unbounded) {
        sol.unbounded_ray.assign(p.num_vars(), 0.0);
        for (int j = 0; j < p.num_vars(); ++j) {
            double c = sgn * p.cost[j];
            if (c > 0 && !std::isfinite(lower[j])) sol.unbounded_ray[j] = -1.0;
            if (c < 0 && !std::isfinite(upper[j])) sol.unbounded_ray[j] = 1.0;
        }
        return sol;
    }
    sol.objective = p.objective_offset;
    for (int j = 0; j < p.num_vars(); ++j) sol.objective += p.cost[j] * sol.x[j];
    return sol;
}

}  // namespace

LpSolution solve_lp(const LpProblem& p, const std::vector<double>& lower,
                    const std::vector<double>& upper) {
    p.validate();
    if (lower.size() != p.cost.size() || upper.size() != p.cost.size())
        throw DimensionError("bound overrides do not match the variable count");
    if (p.num_rows() == 0) return solve_unconstrained(p, lower, upper);
    Simplex s(p, lower, upper);
    return s.run();
}

SlacknessReport check_complementary_slackness(const LpProblem& p, const LpSolution& s) {
    if (s.status != LpStatus::Optimal)
        throw StateError("complementary slackness requires an optimal solution");
    SlacknessReport rep;
    for (int r = 0; r < p.num_rows(); ++r) {
        double act = 0.0;
        for (auto [j, a] : p.rows[r].coef) act += a * s.x[j];
        double slack = p.rows[r].rhs - act;
        double v = std::abs(s.row_dual[r] * slack);
        rep.items.push_back({true, r, v});
        rep.max_violation = std::max(rep.max_violation, v);
    }
    for (int j = 0; j < p.num_vars(); ++j) {
        double rc = s.reduced_cost[j];
        double v = 0.0;
        if (std::abs(rc) > 1e-12) {
            // Distance to whichever bound the sign of the reduced cost demands.
            bool wants_lower = (p.sense == Sense::Minimize) ? rc > 0 : rc < 0;
            double bound = wants_lower ? p.lower[j] : p.upper[j];
            if (std::isfinite(bound))
                v = std::abs(rc * (s.x[j] - bound));
            else
                v = std::abs(rc) * (1.0 + std::abs(s.x[j]));
        }
        rep.items.push_back({false, j, v});
        rep.max_violation = std::max(rep.max_violation, v);
    }
    rep.pass = rep.max_violation <= 1e-6;
    return rep;
}

LpProblem dual_problem(const LpProblem& p, DualVarMap* map) {
    if (p.sense != Sense::Minimize)
        throw UnsupportedError("dual_problem expects a minimization primal");
    LpProblem d;
    d.sense = Sense::Maximize;
    DualVarMap local;
    DualVarMap& mp = map ? *map : local;
    mp.row_dual.resize(p.num_rows());
    mp.at_lower.assign(p.num_vars(), -1);
    mp.at_upper.assign(p.num_vars(), -1);
    for (int r = 0; r < p.num_rows(); ++r) {
        double lo = -kInf, hi = kInf;
        if (p.rows[r].rel == Rel::Le) hi = 0.0;
        if (p.rows[r].rel == Rel::Ge) lo = 0.0;
        mp.row_dual[r] = d.add_var(lo, hi, p.rows[r].rhs);
    }
    for (int j = 0; j < p.num_vars(); ++j) {
        if (std::isfinite(p.lower[j])) mp.at_lower[j] = d.add_var(0.0, kInf, p.lower[j]);
        if (std::isfinite(p.upper[j])) mp.at_upper[j] = d.add_var(0.0, kInf, -p.upper[j]);
    }
    // One stationarity row per primal variable: A'y + zl - zu = c.
    std::vector<std::vector<std::pair<int, double>>> col(p.num_vars());
    for (int r = 0; r < p.num_rows(); ++r)
        for (auto [j, a] : p.rows[r].coef) col[j].emplace_back(mp.row_dual[r], a);
    for (int j = 0; j < p.num_vars(); ++j) {
        auto coef = col[j];
        if (mp.at_lower[j] >= 0) coef.emplace_back(mp.at_lower[j], 1.0);
        if (mp.at_upper[j] >= 0) coef.emplace_back(mp.at_upper[j], -1.0);
        d.add_row(Rel::Eq, p.cost[j], std::move(coef));
    }
    return d;
}

}  // namespace aruc
