#pragma once

// Exact-formula layer: Minkowski space R^4_1 with signature (-,+,+,+), the
// hyperboloid and de Sitter quadrics, the Klein projective model and the
// polarity between points and planes.

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <random>

namespace hyperideal {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Carrier for hyperbolic points, de Sitter points, light-like directions and plane normals.
using MinkowskiVec = Vec4;

/// Tolerance on | |p| - 1 | used to classify Klein points.
inline constexpr double kClassTol = 1e-9;
/// Planes whose normals satisfy | |<n1,n2>| - 1 | below this are reported as parabolic.
inline constexpr double kParabolicTol = 1e-9;

inline double mdot(const Vec4& a, const Vec4& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
inline double mnorm2(const Vec4& a) { return mdot(a, a); }

/// diag(-1, 1, 1, 1)
const Mat4& minkowski_form();

/// Scale a space-like vector to <v,v> = 1.
Vec4 normalize_spacelike(const Vec4& v);
/// Scale a time-like vector to <v,v> = -1, keeping x0 > 0.
Vec4 normalize_timelike(const Vec4& v);
/// A vector Minkowski-orthogonal to a, b and c (not normalized).
Vec4 minkowski_orthogonal(const Vec4& a, const Vec4& b, const Vec4& c);

enum class PointClass { Finite, Ideal, Hyperideal };
const char* to_string(PointClass c);

/// A point of the Klein model together with its classification.
struct ProjPoint {
    Vec3 p = Vec3::Zero();
    PointClass cls = PointClass::Finite;

    static ProjPoint classify(const Vec3& p, double tol = kClassTol);
    /// Projects a non-zero vector of R^4_1 with x0 != 0 to the Klein model.
    static ProjPoint from_lift(const Vec4& x, double tol = kClassTol);

    /// Canonical lift: unit time-like for finite points, unit de Sitter for
    /// hyperideal points, (1, p) with |p| = 1 for ideal points.
    Vec4 lift() const;
};

/// Oriented totally geodesic plane {x in H^3 : <x,n> = 0}; the outward side is <x,n> > 0.
struct Plane {
    Vec4 n = Vec4(0, 0, 0, 1);

    static Plane from_normal(const Vec4& n);
    Plane flipped() const { return Plane{-n}; }
    double side(const Vec4& x) const { return mdot(x, n); }
};

/// Orientation- and time-orientation-preserving isometry of H^3 (an element of SO+(3,1)).
struct Isometry {
    Mat4 m = Mat4::Identity();

    static Isometry identity() { return {}; }
    static Isometry rotation(const Vec3& axis, double angle);
    /// Boost of the given rapidity along a unit spatial direction.
    static Isometry boost(const Vec3& dir, double rapidity);
    /// The boost sending the unit time-like vector x to (1,0,0,0).
    static Isometry centering(const Vec4& x);
    static Isometry random(std::mt19937_64& rng, double max_rapidity);

    Vec4 apply(const Vec4& x) const { return m * x; }
    ProjPoint apply(const ProjPoint& x, double tol = kClassTol) const;
    Plane apply(const Plane& P) const { return Plane::from_normal(m * P.n); }
    Isometry compose(const Isometry& inner) const { return Isometry{m * inner.m}; }
    Isometry inverse() const;
    /// max |G^T J G - J|
    double form_defect() const;
};

/// [x,y;a,b] = (x-a)(b-y) / ((y-a)(b-x)) with signed positions along the common line.
double cross_ratio(const Vec3& x, const Vec3& y, const Vec3& a, const Vec3& b);
inline double cross_ratio(const ProjPoint& x, const ProjPoint& y, const ProjPoint& a, const ProjPoint& b) {
    return cross_ratio(x.p, y.p, a.p, b.p);
}

/// Hilbert metric of the unit ball, equal to the hyperbolic distance.
double hilbert_distance(const ProjPoint& x, const ProjPoint& y);

Plane dual_point_to_plane(const ProjPoint& v);
ProjPoint dual_plane_to_point(const Plane& P);

struct EdgeMeasure {
    enum class Tag { Angle, Distance, Parabolic };
    Tag tag = Tag::Angle;
    double value = 0.0;
    /// Set for disjoint planes whose half-spaces are nested (<n1,n2> >= 1).
    bool nested = false;
};

/// Exterior dihedral angle between intersecting planes (cos theta = <n1,n2>),
/// or distance between disjoint ones.
EdgeMeasure desitter_edge_measure(const Plane& a, const Plane& b);

/// Distance between two lifted points. Hyperideal points are unit de Sitter
/// vectors, ideal points are light-like vectors u whose scale encodes the
/// horosphere {<x,u> = -1}, finite points are unit time-like vectors.
double lifted_distance(const Vec4& a, PointClass ca, const Vec4& b, PointClass cb);

/// Distance between Klein points; an ideal point needs a horosphere scale
/// (multiplicative factor on the lift (1,p)).
double point_pair_distance(const ProjPoint& x, const ProjPoint& y,
                           std::optional<double> horoscale_x = std::nullopt,
                           std::optional<double> horoscale_y = std::nullopt);

/// Signed position of the orthogonal projection of w onto the geodesic from the
/// ideal point u_from to the ideal point u_to, measured from the horosphere of u_from.
double horocyclic_position(const Vec4& w, const Vec4& u_from, const Vec4& u_to);

/// Exterior angles (pi minus the interior angle) of a compact triangle given by
/// three finite Klein points, from the hyperbolic law of cosines.
std::array<double, 3> triangle_exterior_angles(const std::array<Vec3, 3>& pts);

/// Outward unit normals of the planes through each side of the triangle that
/// are orthogonal to the triangle's plane; entry k is opposite vertex k.
std::array<Vec4, 3> triangle_side_normals(const std::array<Vec3, 3>& pts);

/// Edge lengths of the polar triangle in de Sitter space; entry k is the
/// length of the edge dual to vertex k.
std::array<double, 3> dual_triangle_edge_lengths(const std::array<Vec3, 3>& pts);

/// Stereographic projection from the north pole (0,0,1).
Vec2 stereographic(const Vec3& p);
Vec3 inverse_stereographic(const Vec2& q);

}  // namespace hyperideal
