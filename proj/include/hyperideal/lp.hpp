#pragma once

// Dense two-phase simplex method with Bland's anti-cycling rule, sized for
// the few hundred rows of an angle-structure feasibility problem.

#include <Eigen/Dense>

namespace hyperideal {

/// maximize c.x subject to eq_A x = eq_b, le_A x <= le_b, x >= 0.
struct LinearProgram {
    Eigen::MatrixXd eq_A;
    Eigen::VectorXd eq_b;
    Eigen::MatrixXd le_A;
    Eigen::VectorXd le_b;
    Eigen::VectorXd c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Optimal;
    Eigen::VectorXd x;
    double objective = 0.0;
    /// Phase-one optimum: total violation that could not be removed (0 when feasible).
    double infeasibility = 0.0;
    /// Phase-one multipliers of the equality rows followed by the inequality rows;
    /// when the status is Infeasible, y with y^T [eq_A; le_A | slacks] >= 0 and y^T b < 0.
    Eigen::VectorXd certificate;
    int pivots = 0;
};

LpResult solve_lp(const LinearProgram& lp, double tol = 1e-9);

}  // namespace hyperideal
