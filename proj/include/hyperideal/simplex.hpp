#pragma once

// Hyperideal simplices: construction from dihedral angles, truncation, edge
// lengths, volume and its first and second derivatives.

#include "hyperideal/minkowski.hpp"

#include <array>
#include <string>
#include <vector>

namespace hyperideal {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Edge k joins vertices kEdgeVertices[k]; order e12, e13, e14, e23, e24, e34.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Index of the edge joining vertices i and j (0-based, i != j).
int edge_index(int i, int j);
/// The edge with no vertex in common with edge k.
inline int opposite_edge(int k) { return 5 - k; }
/// The three edges incident to vertex v.
std::array<int, 3> vertex_edges(int v);

using IdealTags = std::array<bool, 4>;

struct AngleVerdict {
    bool accepted = false;
    /// Sum of exterior angles over the three edges at each vertex.
    std::array<double, 4> vertex_sums{};
    std::vector<std::string> reasons;
};

/// Exterior angles theta in (0, pi): each vertex sum must be >= 2 pi with
/// equality exactly at ideal-tagged vertices (within tol).
AngleVerdict admissible_simplex_angles(const Vec6& theta, const IdealTags& ideal, double tol = 1e-9);

/// Faces (3 values each) of the dual simplex must have edge sums >= 2 pi.
AngleVerdict dual_simplex_edge_check(const Vec6& l, double tol = 1e-9);

/// A hyperideal simplex. Face i is opposite vertex i; face normals point outward.
struct HyperidealSimplex {
    std::array<ProjPoint, 4> vertices;
    /// Exterior dihedral angles, edge order as kEdgeVertices.
    Vec6 theta = Vec6::Zero();
    IdealTags ideal{};
    std::array<Vec4, 4> normals;
    /// Unit de Sitter vectors for hyperideal vertices, (1, p) for ideal ones.
    std::array<Vec4, 4> lifts;

    /// Builds a simplex from Klein points (measures its angles). Points must be
    /// ideal or hyperideal, non-coplanar, with all edges crossing the ball.
    static HyperidealSimplex from_vertices(const std::array<ProjPoint, 4>& pts);

    Vec6 interior_angles() const;
    int ideal_count() const;
    HyperidealSimplex transformed(const Isometry& g) const;
};

/// The unique simplex with the given exterior angles, in canonical position:
/// the hyperbolic barycenter of its edges at the origin, vertex 1 on the
/// positive z-axis, vertex 2 in the half-plane {y = 0, x > 0}, positive orientation.
HyperidealSimplex simplex_from_angles(const Vec6& theta, const IdealTags& ideal);
/// Convenience overload in terms of interior angles alpha = pi - theta.
HyperidealSimplex simplex_from_interior_angles(const Vec6& alpha, const IdealTags& ideal);

/// Exterior angles recomputed from the face normals.
Vec6 measured_exterior_angles(const HyperidealSimplex& s);

struct TruncatedSimplex {
    std::vector<Plane> planes;
    /// Klein coordinates of the polytope's vertices.
    std::vector<Vec3> points;
    std::vector<bool> point_ideal;
    /// Vertex index cycles; faces[k] lies on planes[k].
    std::vector<std::vector<int>> faces;
    /// True for the faces coming from the simplex, false for truncation faces.
    std::vector<bool> real_face;
};

TruncatedSimplex truncate(const HyperidealSimplex& s);

/// Edge lengths, defined up to adding c_v to the three entries at each ideal
/// vertex v (the horosphere choice).
struct EdgeLengthClass {
    Vec6 raw = Vec6::Zero();
    IdealTags ideal{};
    int n_ideal = 0;

    /// raw minus its projection on the horosphere directions.
    Vec6 reduced() const;
    bool equivalent(const EdgeLengthClass& other, double tol) const;
};

/// Horosphere at ideal vertex v is {<x, h_v * (1, p_v)> = -1}; entries for non-ideal vertices are ignored.
using Horoscales = std::array<double, 4>;
inline constexpr Horoscales kUnitHoroscales{1.0, 1.0, 1.0, 1.0};

EdgeLengthClass edge_lengths(const HyperidealSimplex& s, const Horoscales& h = kUnitHoroscales);

/// The (6 - #ideal)-dimensional tangent space of the stratum: directions in
/// angle space that keep every ideal vertex sum fixed. Orthonormal columns.
Eigen::MatrixXd stratum_tangent_basis(const IdealTags& ideal);

struct VolumeOptions {
    /// Target absolute error of the whole integral.
    double tolerance = 1e-10;
    /// Bisections per direction of a cell's base square.
    int max_depth = 40;
    bool parallel = true;
};

struct VolumeResult {
    double value = 0.0;
    double error_bound = 0.0;
    int cells = 0;
};

/// Hyperbolic volume of the truncated simplex.
double volume(const HyperidealSimplex& s, const VolumeOptions& opt = {});
VolumeResult volume_detailed(const HyperidealSimplex& s, const VolumeOptions& opt = {});
/// Volume of the simplex spanned by four ideal/hyperideal Klein points; 0 if they are coplanar.
double volume_of_points(const std::array<ProjPoint, 4>& pts, const VolumeOptions& opt = {});

/// dV/d(alpha_k) = -L_k / 2 with alpha the interior dihedral angles. On a
/// stratum with ideal vertices only the tangential part is meaningful.
Vec6 schlafli_gradient(const HyperidealSimplex& s, const Horoscales& h = kUnitHoroscales);

/// Hessian of the volume in stratum coordinates (columns of stratum_tangent_basis),
/// from central differences of the edge lengths.
Eigen::MatrixXd volume_hessian(const HyperidealSimplex& s, double step = 1e-5);

/// d(L)/d(alpha) on the strictly hyperideal stratum by central differences.
Mat6 length_jacobian(const Vec6& alpha, double step = 1e-6);

/// Interior angles of the strictly hyperideal simplex with the given edge
/// lengths, by damped Newton iteration.
Vec6 interior_angles_from_lengths(const Vec6& lengths, double tol = 1e-12, int max_iter = 100);

struct RegularSimplexReport {
    double l0 = 0.0;
    /// Closed-form derivatives: a at the edge itself, b at adjacent edges, c at the opposite edge.
    double a = 0, b = 0, c = 0;
    /// The same derivatives measured on the geometric one-parameter family.
    double a_geom = 0, b_geom = 0, c_geom = 0;
    /// Interior dihedral angle of the regular simplex.
    double angle = 0;
    Mat6 matrix = Mat6::Zero();
    Vec6 eigenvalues = Vec6::Zero();
    bool all_positive = false;
    double max_discrepancy = 0;
};

RegularSimplexReport regular_simplex_appendix_check(double l0);

}  // namespace hyperideal
