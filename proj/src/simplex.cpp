#include "hyperfn/simplex.hpp"

#include <cstddef>

#include "hyperfn/errors.hpp"

namespace hyperfn {
namespace {

// Dense exact tableau.  Free user variables are split x = p - q with
// p, q >= 0, then slacks/artificials are appended per row.  Problems here
// are tiny (a handful of variables, at most a few hundred rows), so no
// effort is spent on sparsity or revised-simplex bookkeeping.
class Tableau {
  public:
    Tableau(const RationalVector& objective,
            const std::vector<LinearConstraint>& cons)
        : n_user_(objective.size()) {
        for (const auto& c : cons) {
            if (c.coeffs.size() != n_user_)
                throw DimensionMismatch("lp: constraint dimension mismatch");
        }
        const std::size_t m = cons.size();
        // Split columns [p | q], then one slack per inequality row, then one
        // artificial per Ge/Eq row (and per Le row with negative rhs after
        // normalization; handled uniformly below).
        std::size_t n_split = 2 * n_user_;
        std::size_t n_slack = 0;
        for (const auto& c : cons)
            if (c.rel != Relation::Eq) ++n_slack;
        n_cols_ = n_split + n_slack;

        rows_.assign(m, RationalVector(n_cols_, Rational(0)));
        rhs_.assign(m, Rational(0));
        basis_.assign(m, SIZE_MAX);

        std::size_t slack_at = n_split;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& c = cons[i];
            Rational sgn = 1;
            // Normalize so rhs >= 0.
            Rational b = c.rhs;
            Relation rel = c.rel;
            if (b < 0) {
                sgn = -1;
                b = -b;
                if (rel == Relation::Le) rel = Relation::Ge;
                else if (rel == Relation::Ge) rel = Relation::Le;
            }
            for (std::size_t j = 0; j < n_user_; ++j) {
                rows_[i][j] = sgn * c.coeffs[j];
                rows_[i][n_user_ + j] = -sgn * c.coeffs[j];
            }
            rhs_[i] = b;
            if (c.rel != Relation::Eq) {
                // slack: +1 for <=, -1 (surplus) for >=
                rows_[i][slack_at] = (rel == Relation::Le) ? Rational(1) : Rational(-1);
                if (rel == Relation::Le) basis_[i] = slack_at;
                ++slack_at;
            }
        }

        // Artificial columns for rows without a basic slack.
        for (std::size_t i = 0; i < m; ++i) {
            if (basis_[i] == SIZE_MAX) {
                for (auto& r : rows_) r.push_back(0);
                rows_[i][n_cols_] = 1;
                artificial_.push_back(n_cols_);
                basis_[i] = n_cols_;
                ++n_cols_;
            }
        }

        obj_.assign(n_cols_, Rational(0));
        for (std::size_t j = 0; j < n_user_; ++j) {
            obj_[j] = objective[j];
            obj_[n_user_ + j] = -objective[j];
        }
    }

    // Phase 1: drive artificials to zero.  Returns false when infeasible.
    bool phase1() {
        if (artificial_.empty()) return true;
        RationalVector cost(n_cols_, Rational(0));
        for (auto j : artificial_) cost[j] = -1;  // maximize -(sum of artificials)
        run(cost);
        Rational v = 0;
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (is_artificial(basis_[i])) v += rhs_[i];
        if (v != 0) return false;
        // Pivot any degenerate artificial out of the basis.
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (!is_artificial(basis_[i])) continue;
            bool pivoted = false;
            for (std::size_t j = 0; j < n_cols_ && !pivoted; ++j) {
                if (is_artificial(j)) continue;
                if (rows_[i][j] != 0) {
                    pivot(i, j);
                    pivoted = true;
                }
            }
            // All-zero row: redundant constraint, artificial stays basic at 0.
        }
        return true;
    }

    // Phase 2; throws on unboundedness.
    void phase2() { run(obj_, /*forbid_artificial=*/true); }

    Rational objective_value() const {
        Rational v = 0;
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (basis_[i] < obj_.size()) v += obj_[basis_[i]] * rhs_[i];
        return v;
    }

    RationalVector user_solution() const {
        RationalVector x(n_user_, Rational(0));
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const std::size_t b = basis_[i];
            if (b < n_user_) x[b] += rhs_[i];
            else if (b < 2 * n_user_) x[b - n_user_] -= rhs_[i];
        }
        return x;
    }

  private:
    bool is_artificial(std::size_t j) const {
        for (auto a : artificial_)
            if (a == j) return true;
        return false;
    }

    void pivot(std::size_t r, std::size_t c) {
        const Rational p = rows_[r][c];
        for (auto& v : rows_[r]) v /= p;
        rhs_[r] /= p;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i == r) continue;
            const Rational f = rows_[i][c];
            if (f == 0) continue;
            for (std::size_t j = 0; j < n_cols_; ++j) rows_[i][j] -= f * rows_[r][j];
            rhs_[i] -= f * rhs_[r];
        }
        basis_[r] = c;
    }

    // Maximize cost.x with Bland's rule.
    void run(const RationalVector& cost, bool forbid_artificial = false) {
        for (;;) {
            // Reduced costs: c_j - c_B . B^{-1} A_j (tableau rows already
            // express B^{-1} A).
            std::size_t enter = SIZE_MAX;
            for (std::size_t j = 0; j < n_cols_; ++j) {
                if (forbid_artificial && is_artificial(j)) continue;
                bool basic = false;
                for (auto b : basis_)
                    if (b == j) { basic = true; break; }
                if (basic) continue;
                Rational rc = cost[j];
                for (std::size_t i = 0; i < rows_.size(); ++i)
                    if (basis_[i] < cost.size()) rc -= cost[basis_[i]] * rows_[i][j];
                if (rc > 0) { enter = j; break; }  // Bland: first improving index
            }
            if (enter == SIZE_MAX) return;  // optimal

            std::size_t leave = SIZE_MAX;
            Rational best;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                if (rows_[i][enter] <= 0) continue;
                Rational ratio = rhs_[i] / rows_[i][enter];
                if (leave == SIZE_MAX || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == SIZE_MAX) throw Error("lp: unbounded objective");
            pivot(leave, enter);
        }
    }

    std::size_t n_user_;
    std::size_t n_cols_ = 0;
    std::vector<RationalVector> rows_;
    RationalVector rhs_;
    RationalVector obj_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> artificial_;
};

}  // namespace

std::optional<LpSolution> lp_maximize(const RationalVector& objective,
                                      const std::vector<LinearConstraint>& constraints) {
    Tableau t(objective, constraints);
    if (!t.phase1()) return std::nullopt;
    t.phase2();
    return LpSolution{t.objective_value(), t.user_solution()};
}

bool lp_feasible(const std::vector<LinearConstraint>& constraints,
                 RationalVector* witness) {
    if (constraints.empty()) {
        if (witness) witness->clear();
        return true;
    }
    RationalVector zero(constraints.front().coeffs.size(), Rational(0));
    Tableau t(zero, constraints);
    if (!t.phase1()) return false;
    if (witness) *witness = t.user_solution();
    return true;
}

}  // namespace hyperfn
