#pragma once

// Realization of a hyperideal polyhedron from its combinatorics and exterior
// dihedral angles: angle structures on the cone triangulation, volume
// maximization, exactness checks and development into the Klein model.

#include "hyperideal/cellulation.hpp"
#include "hyperideal/errors.hpp"
#include "hyperideal/simplex.hpp"

#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace hyperideal {

/// Thrown by realize() when the angle data fails the admissibility checks.
class InadmissibleInput : public Error {
public:
    explicit InadmissibleInput(Verdict v)
        : Error(ErrorCode::InadmissibleAngles, v.reason), verdict_(std::move(v)) {}
    const Verdict& verdict() const { return verdict_; }

private:
    Verdict verdict_;
};

/// Linear constraints on the interior angles of the cone triangulation. The
/// variable vector stacks six interior angles per tetrahedron in kEdgeVertices order.
struct ConstraintSet {
    ConeTriangulation cone;
    /// Ideal flag per vertex of the cellulation.
    std::vector<bool> ideal;
    std::vector<IdealTags> tet_ideal;
    /// Edge of the cone triangulation carrying each angle slot: boundary edges
    /// first (indices of cone.boundary), then cone.interior_edges.
    std::vector<std::array<int, 6>> slot_edge;
    /// Prescribed total interior angle around each edge of the cone triangulation.
    std::vector<double> edge_target;

    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    std::vector<std::string> row_labels;
    int rank = 0;
    /// Rows of A that are linear combinations of others.
    int dependent_rows = 0;
    /// Orthonormal basis of ker A.
    Eigen::MatrixXd null_basis;
    /// Point of the affine set maximizing the smallest inequality margin.
    Eigen::VectorXd interior_point;
    double interior_margin = 0.0;

    int num_tetrahedra() const { return static_cast<int>(tet_ideal.size()); }
    int num_variables() const { return 6 * num_tetrahedra(); }
    /// Smallest margin of x against angles in (0, pi) and non-ideal corner sums below pi.
    double margin(const Eigen::VectorXd& x) const;
    /// Largest t with margin(x + t d) >= floor (assuming margin(x) >= floor).
    double max_step(const Eigen::VectorXd& x, const Eigen::VectorXd& d, double floor) const;
};

/// Builds the constraint system for exterior angles w (per edge of sigma) and
/// finds a strictly feasible point by linear programming. Throws Infeasible.
ConstraintSet assemble_constraints(const Cellulation& sigma, const std::vector<bool>& ideal,
                                   const std::vector<double>& w);

/// One admissible hyperideal simplex per tetrahedron, stored as interior angles.
struct ShearedStructure {
    std::vector<Vec6> interior;

    static ShearedStructure from_vector(const Eigen::VectorXd& x);
    Eigen::VectorXd to_vector() const;
    Vec6 exterior(int t) const { return Vec6::Constant(std::numbers::pi) - interior[t]; }
};

struct VolumeAndGradient {
    double value = 0.0;
    /// d(total volume)/d(interior angles), unit horoscales in each simplex's frame.
    Eigen::VectorXd gradient;
};

VolumeAndGradient total_volume_and_gradient(const ConstraintSet& cs, const Eigen::VectorXd& x,
                                            const VolumeOptions& opt = {});
/// The gradient alone (edge lengths only, no quadrature).
Eigen::VectorXd total_gradient(const ConstraintSet& cs, const Eigen::VectorXd& x);

struct SolverOptions {
    /// Convergence threshold on the reduced gradient norm.
    double gradient_tol = 1e-9;
    int max_iter = 200;
    /// Interior safeguard on every inequality.
    double safeguard = 1e-6;
    /// Consecutive safeguard-limited steps that count as collapse.
    int collapse_after = 5;
    double hessian_step = 1e-5;
};

struct SolveReport {
    Eigen::VectorXd x;
    int iterations = 0;
    double reduced_gradient = 0.0;
};

/// Equality-constrained Newton ascent of the total volume from a strictly
/// feasible x0. When the iterates jam against the boundary, restarts from x0
/// along a log-barrier path before a final plain phase. Throws
/// BoundaryCollapse or MaxIterations.
SolveReport maximize(const ConstraintSet& cs, const Eigen::VectorXd& x0, const SolverOptions& opt = {});

struct Residuals {
    /// Largest disagreement of a glued face's shape between its two tetrahedra.
    double length_mismatch = 0.0;
    /// Largest translational holonomy around an interior edge with two ideal ends.
    double shear = 0.0;
};

Residuals exactness_residuals(const ConstraintSet& cs, const Eigen::VectorXd& x);

/// Position along the geodesic between ideal points p and q, from the horosphere
/// at p, of the foot of the perpendicular from the third vertex of a triangle
/// with the given edge lengths (l_pq, l_pa, l_qa).
inline double foot_position(double l_pq, double l_pa, double l_qa) { return 0.5 * (l_pa + l_pq - l_qa); }

struct Diagnostics {
    int iterations = 0;
    double reduced_gradient = 0.0;
    double length_mismatch = 0.0;
    double shear = 0.0;
    /// Largest disagreement between two placements of the same vertex.
    double gluing = 0.0;
    /// Largest |measured - prescribed| exterior angle.
    double angle_error = 0.0;
    /// Largest Euclidean distance of a vertex from its face's plane.
    double planarity = 0.0;
};

struct Realization {
    Cellulation sigma;
    std::vector<bool> ideal;
    std::vector<double> target_w;
    /// Vertex positions in the Klein model, indexed like sigma's vertices.
    std::vector<ProjPoint> vertices;
    /// Outward de Sitter normals per face of sigma.
    std::vector<Vec4> face_normals;
    /// Exterior dihedral angle per edge of sigma, measured from the face normals.
    std::vector<double> measured_w;
    double volume = 0.0;
    Diagnostics diagnostics;
    /// The maximizer, usable as a warm start.
    Eigen::VectorXd angles;
};

/// Lift of a realized vertex: unit de Sitter vector, or (1, p) for ideal ones.
Vec4 vertex_lift(const ProjPoint& p);

/// Glues the simplices of x, measures the result and normalizes the frame.
/// Throws GluingMismatch.
Realization develop(const ConstraintSet& cs, const Eigen::VectorXd& x, const Cellulation& sigma,
                    const std::vector<double>& w, double tol = 1e-7);

/// Face planes from vertex positions and the exterior angles they make.
void measure_realization(Realization& r);

struct RealizeOptions {
    SolverOptions solver;
    VolumeOptions quadrature{1e-8, 40, true};
    double geometry_tol = 1e-7;
    bool compute_volume = true;
};

/// Full pipeline: admissibility checks, cone triangulation, constraints,
/// maximization, exactness residuals and development.
Realization realize(const Cellulation& sigma, const std::vector<bool>& ideal, const std::vector<double>& w,
                    const RealizeOptions& opt = {}, const std::optional<Eigen::VectorXd>& warm_start = std::nullopt);

/// Conformal barycenter of points on the unit sphere: the unit time-like vector
/// minimizing the sum of Busemann functions. Unique when no point has half the weight.
Vec4 conformal_barycenter(const std::vector<Vec3>& points);
/// Conformal barycenter of the endpoints at infinity of the edge lines.
Vec4 realization_center(const Realization& r);

/// Labeled Minkowski Gram entries of the vertex lifts, ideal lifts normalized
/// against realization_center; equal for congruent realizations.
std::vector<double> congruence_invariants(const Realization& r);
/// max |a - b| / max(1, |a|) over matching entries.
double invariant_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace hyperideal
