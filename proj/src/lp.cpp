#include "hyperideal/lp.hpp"

#include <vector>

namespace hyperideal {

namespace {

struct Tableau {
    Eigen::MatrixXd t;  // rows 0..m-1 constraints, last column rhs
    std::vector<int> basis;
    int pivots = 0;

    int rows() const { return static_cast<int>(t.rows()); }
    int rhs() const { return static_cast<int>(t.cols()) - 1; }

    void pivot(int r, int col) {
        t.row(r) /= t(r, col);
        for (int i = 0; i < rows(); ++i)
            if (i != r && t(i, col) != 0.0) t.row(i) -= t(i, col) * t.row(r);
        basis[r] = col;
        ++pivots;
    }

    /// Reduced costs of `cost` (maximization) for the current basis.
    Eigen::RowVectorXd reduced(const Eigen::RowVectorXd& cost) const {
        Eigen::RowVectorXd cb(rows());
        for (int i = 0; i < rows(); ++i) cb[i] = cost[basis[i]];
        return cost - cb * t.leftCols(rhs());
    }

    /// Bland's rule; false when unbounded.
    bool optimize(const Eigen::RowVectorXd& cost, int allowed_cols, double tol) {
        for (;;) {
            const Eigen::RowVectorXd red = reduced(cost);
            int enter = -1;
            for (int j = 0; j < allowed_cols; ++j)
                if (red[j] > tol) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            double best = 0;
            for (int i = 0; i < rows(); ++i) {
                if (t(i, enter) <= tol) continue;
                const double ratio = t(i, rhs()) / t(i, enter);
                if (leave < 0 || ratio < best - tol || (ratio <= best + tol && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, double tol) {
    const int n = static_cast<int>(lp.c.size());
    const int me = static_cast<int>(lp.eq_b.size());
    const int ml = static_cast<int>(lp.le_b.size());
    const int m = me + ml;
    // columns: x (n), slacks (ml), artificials (m), rhs
    const int cols = n + ml + m;
    Tableau tab;
    tab.t = Eigen::MatrixXd::Zero(m, cols + 1);
    std::vector<double> sign(m, 1.0);
    for (int i = 0; i < me; ++i) {
        tab.t.row(i).head(n) = lp.eq_A.row(i);
        tab.t(i, cols) = lp.eq_b[i];
    }
    for (int i = 0; i < ml; ++i) {
        tab.t.row(me + i).head(n) = lp.le_A.row(i);
        tab.t(me + i, n + i) = 1.0;
        tab.t(me + i, cols) = lp.le_b[i];
    }
    tab.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        if (tab.t(i, cols) < 0) {
            tab.t.row(i) *= -1.0;
            sign[i] = -1.0;
        }
        tab.t(i, n + ml + i) = 1.0;
        tab.basis[i] = n + ml + i;
    }

    LpResult res;
    Eigen::RowVectorXd phase1 = Eigen::RowVectorXd::Zero(cols);
    phase1.tail(m).setConstant(-1.0);
    tab.optimize(phase1, cols, tol);
    res.infeasibility = tab.t.col(cols).dot(Eigen::VectorXd(
        Eigen::VectorXd::NullaryExpr(m, [&](Eigen::Index i) { return tab.basis[i] >= n + ml ? 1.0 : 0.0; })));
    // multipliers: reduced costs of the artificial columns
    const Eigen::RowVectorXd red = tab.reduced(phase1);
    res.certificate.resize(m);
    for (int i = 0; i < m; ++i) res.certificate[i] = -(red[n + ml + i] + 1.0) * sign[i];
    const double scale = 1.0 + tab.t.col(cols).cwiseAbs().maxCoeff();
    if (res.infeasibility > tol * scale) {
        res.status = LpStatus::Infeasible;
        res.pivots = tab.pivots;
        return res;
    }

    // drive zero-level artificials out of the basis; rows that cannot be pivoted are redundant
    std::vector<int> keep;
    for (int i = 0; i < m; ++i) {
        if (tab.basis[i] < n + ml) {
            keep.push_back(i);
            continue;
        }
        int col = -1;
        for (int j = 0; j < n + ml && col < 0; ++j)
            if (std::abs(tab.t(i, j)) > 1e-7) col = j;
        if (col >= 0) {
            tab.pivot(i, col);
            keep.push_back(i);
        }
    }
    Tableau reduced;
    reduced.t.resize(static_cast<int>(keep.size()), n + ml + 1);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        reduced.t.row(k).head(n + ml) = tab.t.row(keep[k]).head(n + ml);
        reduced.t(k, n + ml) = tab.t(keep[k], cols);
        reduced.basis.push_back(tab.basis[keep[k]]);
    }
    reduced.pivots = tab.pivots;

    Eigen::RowVectorXd cost = Eigen::RowVectorXd::Zero(n + ml);
    cost.head(n) = lp.c.transpose();
    const bool bounded = reduced.optimize(cost, n + ml, tol);
    res.pivots = reduced.pivots;
    res.x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < reduced.rows(); ++i)
        if (reduced.basis[i] < n) res.x[reduced.basis[i]] = reduced.t(i, n + ml);
    res.objective = lp.c.dot(res.x);
    res.status = bounded ? LpStatus::Optimal : LpStatus::Unbounded;
    return res;
}

}  // namespace hyperideal
