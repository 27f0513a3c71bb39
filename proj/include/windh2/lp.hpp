#pragma once

#include "windh2/core.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace windh2 {

enum class Relation { LessEq, Equal, GreaterEq };
enum class SolveStatus { Optimal, Infeasible, Unbounded };

template <class Scalar>
struct ConstraintT {
    Vector<Scalar> coeffs;
    Relation rel = Relation::LessEq;
    Scalar rhs = Scalar(0);
};

/// max objective . x  subject to row constraints, variable bounds and
/// optional {0,1} integrality on selected variables.
template <class Scalar>
struct LinearProgramT {
    Vector<Scalar> objective;
    std::vector<ConstraintT<Scalar>> constraints;
    Vector<Scalar> lower;  // -inf allowed
    Vector<Scalar> upper;  // +inf allowed
    std::vector<int> integrality;

    int num_vars() const { return static_cast<int>(objective.size()); }

    void validate() const {
        const int n = num_vars();
        if (n <= 0) throw std::invalid_argument("lp: no variables");
        if (lower.size() != n || upper.size() != n)
            throw std::invalid_argument("lp: bound dimensions disagree with objective");
        for (int j = 0; j < n; ++j) {
            if (std::isnan(lower[j]) || std::isnan(upper[j]))
                throw std::invalid_argument("lp: NaN bound");
            if (lower[j] > upper[j])
                throw std::invalid_argument("lp: lower > upper for variable " + std::to_string(j));
            if (!std::isfinite(objective[j]))
                throw std::invalid_argument("lp: objective coefficient not finite");
        }
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            const auto& c = constraints[i];
            if (c.coeffs.size() != n)
                throw std::invalid_argument("lp: constraint " + std::to_string(i) + " dimension mismatch");
            if (!c.coeffs.allFinite() || !std::isfinite(c.rhs))
                throw std::invalid_argument("lp: constraint " + std::to_string(i) + " has non-finite data");
        }
        for (int j : integrality)
            if (j < 0 || j >= n)
                throw std::invalid_argument("lp: integrality index out of range");
    }
};

template <class Scalar>
struct LpSolutionT {
    SolveStatus status = SolveStatus::Infeasible;
    Vector<Scalar> x;
    Scalar objective_value = Scalar(0);
};

using Constraint = ConstraintT<double>;
using LinearProgram = LinearProgramT<double>;
using LpSolution = LpSolutionT<double>;

namespace lp_detail {

/// Bounded-variable primal simplex on a dense tableau. Phase 1 minimizes the
/// sum of bound infeasibilities of the slack basis; Phase 2 runs Dantzig
/// pricing with lowest-index tie-breaking and a Bland fallback after 1000
/// consecutive degenerate steps. Rows that share an identical coefficient
/// vector are folded into one ranged row before solving.
template <class Scalar>
class SimplexSolver {
public:
    explicit SimplexSolver(const LinearProgramT<Scalar>& lp) : lp_(lp) { lp.validate(); }

    LpSolutionT<Scalar> solve() {
        if (!build_rows()) return make_infeasible();
        initialize();
        if (!phase1()) return make_infeasible();
        const bool bounded = phase2();
        if (!bounded) {
            LpSolutionT<Scalar> s;
            s.status = SolveStatus::Unbounded;
            return s;
        }
        polish();
        LpSolutionT<Scalar> s;
        s.status = SolveStatus::Optimal;
        s.x = x_.head(n_);
        s.objective_value = lp_.objective.dot(s.x);
        return s;
    }

private:
    enum class VarState : char { Basic, AtLower, AtUpper, FreeZero, Fixed };

    static constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();
    static constexpr Scalar kFeasTol = Scalar(1e-7);
    static constexpr Scalar kPivotTol = Scalar(1e-9);
    static constexpr Scalar kStepTol = Scalar(1e-11);
    static constexpr int kBlandTrigger = 1000;

    const LinearProgramT<Scalar>& lp_;

    int n_ = 0;      // structural variables
    int m_ = 0;      // internal (merged) rows
    int ncols_ = 0;  // n_ + m_

    Matrix<Scalar> A_;       // scaled structural part of the internal rows, m x n
    Vector<Scalar> brhs_;    // scaled rhs per internal row
    Matrix<Scalar> T_;       // current tableau B^-1 [A I], m x ncols
    Vector<Scalar> lb_, ub_; // bounds for structural vars and row slacks
    Vector<Scalar> cost_;    // objective over all columns (slacks zero)
    Vector<Scalar> x_;       // current values, all columns
    Vector<Scalar> zrow_;    // phase-2 reduced costs
    std::vector<VarState> state_;
    std::vector<int> basis_;      // row -> column
    std::vector<char> row_infeas_; // phase-1 bookkeeping: 0 ok, 1 over, 2 under
    Scalar ztol_ = Scalar(0);
    bool bland_ = false;
    int degenerate_run_ = 0;

    LpSolutionT<Scalar> make_infeasible() const {
        LpSolutionT<Scalar> s;
        s.status = SolveStatus::Infeasible;
        return s;
    }

    // Fold duplicate-coefficient rows into ranged rows; scale rows by their
    // max-abs coefficient. Returns false on a directly contradictory pair.
    bool build_rows() {
        n_ = lp_.num_vars();
        const int mraw = static_cast<int>(lp_.constraints.size());
        std::vector<int> row_of;           // raw row -> internal row
        std::vector<Scalar> row_lo, row_hi;
        std::vector<const Vector<Scalar>*> row_coeffs;
        std::unordered_map<std::size_t, std::vector<int>> groups;
        row_of.reserve(mraw);

        auto hash_row = [](const Vector<Scalar>& v) {
            return std::hash<std::string_view>{}(std::string_view(
                reinterpret_cast<const char*>(v.data()), sizeof(Scalar) * v.size()));
        };

        for (int i = 0; i < mraw; ++i) {
            const auto& c = lp_.constraints[i];
            Scalar lo = -kInf, hi = kInf;
            if (c.rel == Relation::LessEq) hi = c.rhs;
            else if (c.rel == Relation::GreaterEq) lo = c.rhs;
            else lo = hi = c.rhs;

            if (c.coeffs.template lpNorm<Eigen::Infinity>() == Scalar(0)) {
                // 0 . x constrained: either vacuous or contradictory
                if (Scalar(0) < lo - kFeasTol || Scalar(0) > hi + kFeasTol) return false;
                continue;
            }
            int target = -1;
            auto& bucket = groups[hash_row(c.coeffs)];
            for (int cand : bucket)
                if (*row_coeffs[cand] == c.coeffs) { target = cand; break; }
            if (target < 0) {
                target = static_cast<int>(row_coeffs.size());
                row_coeffs.push_back(&c.coeffs);
                row_lo.push_back(lo);
                row_hi.push_back(hi);
                bucket.push_back(target);
            } else {
                row_lo[target] = std::max(row_lo[target], lo);
                row_hi[target] = std::min(row_hi[target], hi);
            }
        }

        m_ = static_cast<int>(row_coeffs.size());
        ncols_ = n_ + m_;
        A_.resize(m_, n_);
        brhs_.resize(m_);
        lb_.resize(ncols_);
        ub_.resize(ncols_);
        lb_.head(n_) = lp_.lower;
        ub_.head(n_) = lp_.upper;

        for (int i = 0; i < m_; ++i) {
            if (row_lo[i] > row_hi[i] + kFeasTol) return false;
            const Scalar scale = std::max(Scalar(1), row_coeffs[i]->template lpNorm<Eigen::Infinity>());
            A_.row(i) = row_coeffs[i]->transpose() / scale;
            // anchor the slack at the finite end: a.x + s = b with s in [0, hi-lo]
            const Scalar anchor = std::isfinite(row_hi[i]) ? row_hi[i] : row_lo[i];
            brhs_[i] = anchor / scale;
            if (std::isfinite(row_hi[i])) {
                lb_[n_ + i] = Scalar(0);
                ub_[n_ + i] = std::isfinite(row_lo[i]) ? (row_hi[i] - row_lo[i]) / scale : kInf;
            } else {
                lb_[n_ + i] = -kInf;
                ub_[n_ + i] = Scalar(0);
            }
        }
        return true;
    }

    void initialize() {
        T_.resize(m_, ncols_);
        T_.leftCols(n_) = A_;
        T_.rightCols(m_).setIdentity();
        cost_ = Vector<Scalar>::Zero(ncols_);
        cost_.head(n_) = lp_.objective;
        x_ = Vector<Scalar>::Zero(ncols_);
        state_.assign(ncols_, VarState::FreeZero);
        basis_.resize(m_);
        row_infeas_.assign(m_, 0);

        for (int j = 0; j < ncols_; ++j) {
            if (lb_[j] == ub_[j]) {
                state_[j] = VarState::Fixed;
                x_[j] = lb_[j];
            } else if (std::isfinite(lb_[j])) {
                state_[j] = VarState::AtLower;
                x_[j] = lb_[j];
            } else if (std::isfinite(ub_[j])) {
                state_[j] = VarState::AtUpper;
                x_[j] = ub_[j];
            }
        }
        // slack basis; basic values absorb the residual of the nonbasic point
        Vector<Scalar> act = Vector<Scalar>::Zero(m_);
        if (n_ > 0) act.noalias() = A_ * x_.head(n_);
        for (int i = 0; i < m_; ++i) {
            const int s = n_ + i;
            basis_[i] = s;
            state_[s] = VarState::Basic;
            x_[s] = brhs_[i] - act[i];
        }
        ztol_ = Scalar(1e-9) * (Scalar(1) + cost_.template lpNorm<Eigen::Infinity>());
        bland_ = false;
        degenerate_run_ = 0;
    }

    int refresh_infeasibilities() {
        int count = 0;
        for (int i = 0; i < m_; ++i) {
            const int j = basis_[i];
            if (x_[j] > ub_[j] + kFeasTol) row_infeas_[i] = 1;
            else if (x_[j] < lb_[j] - kFeasTol) row_infeas_[i] = 2;
            else row_infeas_[i] = 0;
            count += row_infeas_[i] != 0;
        }
        return count;
    }

    struct RatioResult {
        int row = -1;       // blocking row, -1 for bound flip
        Scalar step = Scalar(0);
        bool at_upper = false;  // which bound the leaving variable hits
        bool unbounded = false;
    };

    // Direction sigma in {+1,-1}: entering variable moves x_j + sigma*t.
    // In phase 1 infeasible basics block when they reach the bound they
    // violate; feasible basics block at either bound.
    RatioResult ratio_test(int jent, int sigma, bool phase1) const {
        RatioResult best;
        best.step = kInf;
        int best_var = std::numeric_limits<int>::max();
        const Scalar span = ub_[jent] - lb_[jent];
        if (std::isfinite(span)) {
            best.row = -1;
            best.step = span;
            best_var = jent;
        }
        for (int i = 0; i < m_; ++i) {
            const Scalar ahat = Scalar(sigma) * T_(i, jent);
            if (std::abs(ahat) <= kPivotTol) continue;
            const int jb = basis_[i];
            const Scalar v = x_[jb];
            Scalar t = kInf;
            bool at_upper = false;
            if (phase1 && row_infeas_[i] == 1) {
                if (ahat > Scalar(0)) { t = (v - ub_[jb]) / ahat; at_upper = true; }
            } else if (phase1 && row_infeas_[i] == 2) {
                if (ahat < Scalar(0)) { t = (v - lb_[jb]) / ahat; at_upper = false; }
            } else {
                if (ahat > Scalar(0)) {
                    if (std::isfinite(lb_[jb])) { t = (v - lb_[jb]) / ahat; at_upper = false; }
                } else {
                    if (std::isfinite(ub_[jb])) { t = (v - ub_[jb]) / ahat; at_upper = true; }
                }
            }
            if (!std::isfinite(t)) continue;
            t = std::max(t, Scalar(0));
            const Scalar tie = Scalar(1e-9) * (Scalar(1) + std::abs(best.step));
            if (t < best.step - tie || (t <= best.step + tie && jb < best_var)) {
                best.row = i;
                best.step = t;
                best.at_upper = at_upper;
                best_var = jb;
            }
        }
        if (!std::isfinite(best.step)) best.unbounded = true;
        return best;
    }

    void apply_step(int jent, int sigma, const RatioResult& r) {
        const Scalar t = r.step;
        if (t > Scalar(0)) {
            x_[jent] += Scalar(sigma) * t;
            for (int i = 0; i < m_; ++i) {
                const Scalar a = T_(i, jent);
                if (a != Scalar(0)) x_[basis_[i]] -= Scalar(sigma) * a * t;
            }
        }
        if (t <= kStepTol) {
            if (++degenerate_run_ > kBlandTrigger) bland_ = true;
        } else {
            degenerate_run_ = 0;
            bland_ = false;
        }
        if (r.row < 0) {
            // bound flip, no basis change
            state_[jent] = (sigma > 0) ? VarState::AtUpper : VarState::AtLower;
            x_[jent] = (sigma > 0) ? ub_[jent] : lb_[jent];
            return;
        }
        const int jleave = basis_[r.row];
        x_[jleave] = r.at_upper ? ub_[jleave] : lb_[jleave];
        state_[jleave] = r.at_upper ? VarState::AtUpper : VarState::AtLower;
        if (lb_[jleave] == ub_[jleave]) state_[jleave] = VarState::Fixed;
        state_[jent] = VarState::Basic;
        basis_[r.row] = jent;

        // pivot the tableau and the reduced-cost row
        const Scalar piv = T_(r.row, jent);
        Vector<Scalar> col = T_.col(jent);
        Eigen::Matrix<Scalar, 1, Eigen::Dynamic> prow = T_.row(r.row) / piv;
        T_.noalias() -= col * prow;
        T_.row(r.row) = prow;
        const Scalar zj = zrow_[jent];
        if (zj != Scalar(0)) zrow_.transpose().noalias() -= zj * prow;
    }

    bool phase1() {
        zrow_ = Vector<Scalar>::Zero(ncols_);  // unused until phase 2
        int iter_cap = 200 * (m_ + n_) + 20000;
        while (true) {
            if (refresh_infeasibilities() == 0) return true;
            Vector<Scalar> d = Vector<Scalar>::Zero(m_);
            for (int i = 0; i < m_; ++i)
                if (row_infeas_[i] == 1) d[i] = Scalar(1);
                else if (row_infeas_[i] == 2) d[i] = Scalar(-1);
            Vector<Scalar> w = T_.transpose() * d;
            const Scalar wtol = Scalar(1e-9) * (Scalar(1) + w.template lpNorm<Eigen::Infinity>());

            int jent = -1, sigma = 0;
            Scalar score = wtol;
            for (int j = 0; j < ncols_; ++j) {
                if (state_[j] == VarState::Basic || state_[j] == VarState::Fixed) continue;
                const bool can_up = state_[j] == VarState::AtLower || state_[j] == VarState::FreeZero;
                const bool can_dn = state_[j] == VarState::AtUpper || state_[j] == VarState::FreeZero;
                Scalar gain = Scalar(0);
                int s = 0;
                if (can_up && w[j] > gain) { gain = w[j]; s = 1; }
                if (can_dn && -w[j] > gain) { gain = -w[j]; s = -1; }
                if (s != 0 && gain > score) {
                    jent = j; sigma = s; score = gain;
                    if (bland_) break;
                }
            }
            if (jent < 0) return false;  // stuck infeasible
            RatioResult r = ratio_test(jent, sigma, true);
            if (r.unbounded)
                throw std::runtime_error("lp solver: phase-1 ratio test found no blocking bound");
            apply_step(jent, sigma, r);
            if (--iter_cap <= 0)
                throw std::runtime_error("lp solver: phase-1 iteration limit exceeded");
        }
    }

    bool phase2() {
        // reduced costs for the current basis
        zrow_ = cost_;
        for (int i = 0; i < m_; ++i) {
            const Scalar cb = cost_[basis_[i]];
            if (cb != Scalar(0)) zrow_.transpose().noalias() -= cb * T_.row(i);
        }
        degenerate_run_ = 0;
        int iter_cap = 200 * (m_ + n_) + 20000;
        while (true) {
            int jent = -1, sigma = 0;
            Scalar score = ztol_;
            for (int j = 0; j < ncols_; ++j) {
                if (state_[j] == VarState::Basic || state_[j] == VarState::Fixed) continue;
                const bool can_up = state_[j] == VarState::AtLower || state_[j] == VarState::FreeZero;
                const bool can_dn = state_[j] == VarState::AtUpper || state_[j] == VarState::FreeZero;
                Scalar gain = Scalar(0);
                int s = 0;
                if (can_up && zrow_[j] > gain) { gain = zrow_[j]; s = 1; }
                if (can_dn && -zrow_[j] > gain) { gain = -zrow_[j]; s = -1; }
                if (s != 0 && gain > score) {
                    jent = j; sigma = s; score = gain;
                    if (bland_) break;
                }
            }
            if (jent < 0) return true;  // optimal
            RatioResult r = ratio_test(jent, sigma, false);
            if (r.unbounded) return false;
            apply_step(jent, sigma, r);
            if (--iter_cap <= 0)
                throw std::runtime_error("lp solver: phase-2 iteration limit exceeded");
        }
    }

    // Recompute basic values from the basis factorization when tableau drift
    // shows up in the row residuals; then verify the feasibility contract.
    void polish() {
        if (m_ > 0) {
            Vector<Scalar> act = brhs_;
            act.noalias() -= A_ * x_.head(n_);
            Scalar resid = Scalar(0);
            for (int i = 0; i < m_; ++i) resid = std::max(resid, std::abs(act[i] - x_[n_ + i]));
            if (resid > Scalar(1e-9)) refine_basics();
        }
        Scalar worst = Scalar(0);
        if (m_ > 0) {
            Vector<Scalar> act = A_ * x_.head(n_);
            for (int i = 0; i < m_; ++i) {
                const Scalar s = x_[n_ + i];
                worst = std::max(worst, std::abs(act[i] + s - brhs_[i]));
                worst = std::max(worst, std::max(lb_[n_ + i] - s, s - ub_[n_ + i]));
            }
        }
        for (int j = 0; j < n_; ++j) {
            if (std::isfinite(lb_[j])) worst = std::max(worst, lb_[j] - x_[j]);
            if (std::isfinite(ub_[j])) worst = std::max(worst, x_[j] - ub_[j]);
        }
        if (worst > Scalar(1e-6))
            throw std::runtime_error("lp solver: solution violates feasibility tolerance");
    }

    void refine_basics() {
        Matrix<Scalar> B(m_, m_);
        Vector<Scalar> rhs = brhs_;
        for (int i = 0; i < m_; ++i) {
            const int j = basis_[i];
            if (j < n_) B.col(i) = A_.col(j);
            else B.col(i) = Vector<Scalar>::Unit(m_, j - n_);
        }
        for (int j = 0; j < ncols_; ++j) {
            if (state_[j] == VarState::Basic || x_[j] == Scalar(0)) continue;
            if (j < n_) rhs.noalias() -= A_.col(j) * x_[j];
            else rhs[j - n_] -= x_[j];
        }
        Vector<Scalar> xb = B.partialPivLu().solve(rhs);
        for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
    }
};

}  // namespace lp_detail

/// Solves the continuous relaxation; any integrality marks are ignored.
template <class Scalar>
LpSolutionT<Scalar> solve_lp(const LinearProgramT<Scalar>& lp) {
    lp_detail::SimplexSolver<Scalar> solver(lp);
    return solver.solve();
}

/// Best-first branch and bound over the {0,1} variables, branching on the
/// most fractional one (ties to the lowest index). Nodes whose relaxation
/// bound cannot beat the incumbent are pruned.
template <class Scalar>
LpSolutionT<Scalar> solve_milp(const LinearProgramT<Scalar>& lp) {
    lp.validate();
    if (lp.integrality.empty()) return solve_lp(lp);
    static constexpr Scalar kIntTol = Scalar(1e-6);

    LinearProgramT<Scalar> base = lp;
    std::vector<int> bins = lp.integrality;
    std::sort(bins.begin(), bins.end());
    bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
    for (int j : bins) {
        base.lower[j] = std::max(base.lower[j], Scalar(0));
        base.upper[j] = std::min(base.upper[j], Scalar(1));
        if (base.lower[j] > base.upper[j]) {
            LpSolutionT<Scalar> s;
            s.status = SolveStatus::Infeasible;
            return s;
        }
    }

    struct Node {
        Scalar bound;
        int depth;
        long id;
        Vector<Scalar> x;
        std::vector<std::pair<int, Scalar>> fixes;
    };
    auto worse = [](const Node& a, const Node& b) {
        if (a.bound != b.bound) return a.bound < b.bound;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.id > b.id;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);

    auto fractional = [&](const Vector<Scalar>& x) {
        int arg = -1;
        Scalar most = kIntTol;
        for (int j : bins) {
            const Scalar f = Scalar(0.5) - std::abs(x[j] - Scalar(0.5));
            if (f > most) { most = f; arg = j; }
        }
        return arg;
    };

    bool have_incumbent = false;
    LpSolutionT<Scalar> incumbent;
    long next_id = 0;
    bool unbounded = false;

    auto submit = [&](std::vector<std::pair<int, Scalar>> fixes, int depth) {
        LinearProgramT<Scalar> node_lp = base;
        node_lp.integrality.clear();
        for (const auto& [j, v] : fixes) { node_lp.lower[j] = v; node_lp.upper[j] = v; }
        LpSolutionT<Scalar> rel = solve_lp(node_lp);
        if (rel.status == SolveStatus::Unbounded) { unbounded = true; return; }
        if (rel.status != SolveStatus::Optimal) return;
        const Scalar prune = have_incumbent
            ? incumbent.objective_value + Scalar(1e-9) * (Scalar(1) + std::abs(incumbent.objective_value))
            : -std::numeric_limits<Scalar>::infinity();
        if (have_incumbent && rel.objective_value <= prune) return;
        if (fractional(rel.x) < 0) {
            if (!have_incumbent || rel.objective_value > incumbent.objective_value) {
                incumbent = rel;
                have_incumbent = true;
            }
            return;
        }
        open.push(Node{rel.objective_value, depth, next_id++, std::move(rel.x), std::move(fixes)});
    };

    submit({}, 0);
    while (!open.empty() && !unbounded) {
        Node node = open.top();
        open.pop();
        const Scalar prune = have_incumbent
            ? incumbent.objective_value + Scalar(1e-9) * (Scalar(1) + std::abs(incumbent.objective_value))
            : -std::numeric_limits<Scalar>::infinity();
        if (have_incumbent && node.bound <= prune) break;  // best-first: done
        const int j = fractional(node.x);
        if (j < 0) continue;
        for (Scalar v : {Scalar(0), Scalar(1)}) {
            auto fixes = node.fixes;
            fixes.emplace_back(j, v);
            submit(std::move(fixes), node.depth + 1);
        }
    }
    if (unbounded) {
        LpSolutionT<Scalar> s;
        s.status = SolveStatus::Unbounded;
        return s;
    }
    if (!have_incumbent) {
        LpSolutionT<Scalar> s;
        s.status = SolveStatus::Infeasible;
        return s;
    }
    return incumbent;
}

/// Human-readable dump, one constraint per line, for external cross-checking.
void dump_lp(const LinearProgram& lp, std::ostream& os);
void dump_lp(const LinearProgram& lp, const std::string& path);

}  // namespace windh2
