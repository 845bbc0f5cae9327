#pragma once

// Adaptive integration of the Klein-model volume density 1 / (1 - |x|^2)^2
// over convex polytopes contained in the closed unit ball.

#include "hyperideal/minkowski.hpp"

#include <vector>

namespace hyperideal {

/// Euclidean tetrahedron (apex, a, b, c). When apex_ideal is set the apex lies
/// on the unit sphere and the integrand is regularized analytically.
struct KleinCell {
    Vec3 apex, a, b, c;
    bool apex_ideal = false;
};

/// Cone decomposition from an interior center through face fans. Each cell has
/// at most one ideal vertex, which becomes its apex.
std::vector<KleinCell> decompose_polytope(const std::vector<Vec3>& points, const std::vector<bool>& ideal,
                                          const std::vector<std::vector<int>>& faces);

struct CellIntegral {
    double value = 0.0;
    double error = 0.0;
    int boxes = 0;
    bool converged = true;
};

/// Exact integration along the rays from the apex, then globally adaptive
/// tensor Gauss-Legendre over the base triangle in collapsed coordinates
/// (u, eta), bisecting one direction at a time.
CellIntegral integrate_cell(const KleinCell& cell, double tol, int max_depth);

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int boxes = 0;
    bool converged = true;
};

/// Reference implementation: cells in order, one thread.
QuadratureResult integrate_cells_serial(const std::vector<KleinCell>& cells, double tol, int max_depth);
/// Cells distributed over OpenMP threads; per-cell results are summed in cell
/// order so the value is bitwise identical to the serial one.
QuadratureResult integrate_cells_parallel(const std::vector<KleinCell>& cells, double tol, int max_depth);

}  // namespace hyperideal
