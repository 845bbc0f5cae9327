#pragma once

// Circle configurations at infinity: black circles bound the face planes,
// red circles bound the dual planes of strictly hyperideal vertices.

#include "hyperideal/realization.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hyperideal {

enum class CircleColor { Black, Red };
const char* to_string(CircleColor c);

/// A circle on S^2 together with one of the two disks it bounds.
struct SphericalCircle {
    /// Unit vector; the circle is {s : s . axis = cos(radius)}.
    Vec3 axis = Vec3(0, 0, 1);
    /// Spherical radius in (0, pi/2].
    double radius = std::numbers::pi / 2;
    /// Whether the disk is the cap around the axis or its complement.
    bool disk_is_cap = true;
    CircleColor color = CircleColor::Black;
    /// Face (black) or vertex (red) of the cellulation.
    int source = -1;

    /// Circle at infinity of the plane with unit de Sitter normal n; the disk
    /// is the side where <x, n> > 0.
    static SphericalCircle from_normal(const Vec4& n, CircleColor color, int source);
    Vec4 normal() const;
    SphericalCircle transformed(const Isometry& g) const;
};

/// Inversive product <n1, n2>: cosine of the intersection angle when the
/// circles meet, below -1 for disjoint disks, above 1 for nested ones.
double inversive_product(const SphericalCircle& a, const SphericalCircle& b);
/// pi minus the intersection angle, computed without cancellation near
/// tangency; for disjoint disks, the separation 2 asinh(|n1 + n2| / 2).
double tangency_gap(const SphericalCircle& a, const SphericalCircle& b);

enum class ArcKind { BlackBlack, RedBlack, RedRed };
const char* to_string(ArcKind k);

struct CircleArc {
    int a = 0, b = 0;  // circle indices
    ArcKind kind = ArcKind::BlackBlack;
    /// Edge of the cellulation for black-black and red-red arcs, -1 otherwise.
    int edge = -1;
    double product = 0.0;
    /// Intersection angle in [0, pi]; pi for disjoint disks, 0 for nested ones.
    double angle = 0.0;
    bool tangent = false;
};

struct CircleConfig {
    std::vector<SphericalCircle> circles;
    std::vector<CircleArc> arcs;

    int count(CircleColor c) const;
};

/// Recomputes product, angle and tangency flag of every arc from the circles.
void measure_arcs(CircleConfig& c, double tangency_tol = 1e-6);
CircleConfig transformed(const CircleConfig& c, const Isometry& g);

/// Black circle per face, red circle per strictly hyperideal vertex. Arcs:
/// black-black per edge, red-black per vertex-face incidence, red-red per
/// edge between two strictly hyperideal vertices.
CircleConfig config_from_realization(const Realization& r, double tangency_tol = 1e-6);

struct ConfigCheckOptions {
    double tol = 1e-6;
    /// Whether no point may lie in more than two black disks. The bound holds
    /// near the packing limit (every exterior angle at least pi/2) but not in
    /// general: around an ideal vertex of degree five some angle is smaller
    /// and three face disks can overlap.
    bool check_double_cover = true;
    /// Sample points for the double-cover bound.
    int grid_points = 20000;
};

struct ConfigVerdict {
    bool accepted = true;
    std::vector<std::string> reasons;
};

/// Red disks pairwise disjoint, red-black arcs orthogonal, arcs consistent
/// with their circles and provenance, and optionally no sample point in more
/// than two black disks.
ConfigVerdict validate_config(const CircleConfig& c, const ConfigCheckOptions& opt = {});

struct KoebeOptions {
    int steps = 20;
    double delta0 = 0.3;
    /// Geometric ratio of the remaining angle deficit between steps.
    double ratio = 0.7;
    /// Warm-start halvings of a failed step before giving up.
    int max_halvings = 4;
    /// Trailing steps used by the polynomial extrapolation to zero deficit.
    int extrapolation_points = 3;
    RealizeOptions realize;
};

struct KoebeStep {
    double t = 0.0;
    /// Angle deficit pi - w on every edge.
    double deficit = 0.0;
    double volume = 0.0;
    int iterations = 0;
    /// Largest pi - angle between black circles of adjacent faces.
    double black_gap = 0.0;
};

struct KoebeResult {
    /// Configuration at zero deficit: extrapolated, then polished onto the
    /// exact tangency and orthogonality conditions.
    CircleConfig config;
    std::vector<KoebeStep> steps;
    /// Largest tangency gap over black-black and red-red arcs of the limit.
    double tangency_residual = 0.0;
    /// Largest |angle - pi/2| over red-black arcs of the limit.
    double orthogonality_residual = 0.0;
    /// Largest tangency gap of the extrapolated circles before polishing.
    double extrapolation_residual = 0.0;
    /// Largest change of a normal coordinate made by the polish.
    double polish_shift = 0.0;
    int solves = 0;
};

/// Realizes sigma with every exterior angle equal to pi - (1 - t) delta0 on a
/// geometric grid in 1 - t, warm-starting each solve from the previous one, and
/// extrapolates the circles to t = 1, finishing with Gauss-Newton on the
/// tangency conditions. Near-pi angles make every vertex strictly
/// hyperideal, so a nonempty initial ideal set is rejected with OutOfDomain.
/// Throws ContinuationStalled.
KoebeResult koebe_continuation(const Cellulation& sigma, const std::optional<std::vector<bool>>& initial_ideal = {},
                               const KoebeOptions& opt = {});

struct SvgOptions {
    int size = 800;
    bool show_graph = false;
    /// Rotate the sphere first when a circle comes this close to the north pole.
    double pole_clearance = 0.05;
};

/// Stereographic drawing of the configuration, deterministic for fixed input.
std::string emit_svg(const CircleConfig& c, const SvgOptions& opt = {});

}  // namespace hyperideal
