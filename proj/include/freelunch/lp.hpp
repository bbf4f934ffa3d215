#pragma once

#include "freelunch/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace freelunch::lp {

struct Constraint {
    Vec row;
    Rational rhs;
};

/// maximize objective·x subject to
///   equalities:   row·x == rhs
///   inequalities: row·x <= rhs
///   lower[j] <= x[j] <= upper[j]   (absent bound = unbounded side)
///
/// The constructor defaults every variable to x >= 0.
struct Problem {
    explicit Problem(int num_vars = 0);

    int num_vars;
    Vec objective;
    std::vector<Constraint> equalities;
    std::vector<Constraint> inequalities;
    std::vector<std::optional<Rational>> lower;
    std::vector<std::optional<Rational>> upper;

    void make_free(int j) { lower[static_cast<std::size_t>(j)].reset(); upper[static_cast<std::size_t>(j)].reset(); }
    void add_equality(Vec row, Rational rhs) { equalities.push_back({std::move(row), std::move(rhs)}); }
    void add_inequality(Vec row, Rational rhs) { inequalities.push_back({std::move(row), std::move(rhs)}); }
};

enum class Status { optimal, infeasible, unbounded };

/// Proof of infeasibility: with r = eq·E + ineq·L and rho = eq·e + ineq·l
/// (ineq >= 0), every feasible x satisfies r·x <= rho, while the minimum of
/// r·x over the variable bounds exceeds rho.
struct Farkas {
    Vec eq;
    Vec ineq;
};

struct Outcome {
    Status status = Status::infeasible;
    Vec solution;
    Rational objective_value;
    /// Row multipliers of the final basis (optimal only), same order as the
    /// problem's rows. For the canonical form max c·x, Ax <= b, x >= 0 they
    /// are an optimal dual solution.
    Vec eq_duals;
    Vec ineq_duals;
    /// Present when status == infeasible.
    std::optional<Farkas> farkas;
};

/// Exact two-phase primal simplex over the rationals with Bland's rule.
/// Throws InvalidInput on dimension mismatch.
Outcome solve(const Problem& p);

/// Every violated constraint of x, empty iff x is feasible.
std::vector<std::string> violations(const Problem& p, const Vec& x);

/// Independent re-check of an infeasibility certificate.
bool verify_farkas(const Problem& p, const Farkas& cert);

}  // namespace freelunch::lp
