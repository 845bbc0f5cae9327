// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "hyperideal/circles.hpp"
#include "hyperideal/realization.hpp"
#include "polyhedra.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

using namespace hyperideal;
using namespace testsupport;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

/// Vertex positions of every polyhedron realized along the way, for the
/// ideal/hyperideal dichotomy.
struct RealizedVertices {
    int instances = 0;
    double worst_ideal = 0;       // largest ||p| - 1| at ideal vertices
    double closest_other = 1e300;  // smallest |p| - 1 elsewhere
    int vertices = 0;

    void add(const Realization& r) {
        ++instances;
        for (int v = 0; v < r.sigma.num_vertices(); ++v) {
            double sum = 0;
            for (int e : r.sigma.vertex_edges(v)) sum += r.target_w[e];
            const double radius = r.vertices[v].p.norm();
            // the class is decided by the angle data alone
            if (std::abs(sum - 2 * kPi) < 1e-9)
                worst_ideal = std::max(worst_ideal, std::abs(radius - 1));
            else
                closest_other = std::min(closest_other, radius - 1);
            ++vertices;
        }
    }
};

RealizedVertices g_vertices;

Outcome regular_simplex() {
    const RegularSimplexReport rep = regular_simplex_appendix_check(1.2);
    // the matrix pattern has the all-ones vector as an eigenvector with
    // eigenvalue a + c + 4b; recompute it from the geometric derivatives
    const double ones = rep.a_geom + rep.c_geom + 4 * rep.b_geom;
    const double smallest = rep.eigenvalues.minCoeff();
    Outcome o;
    o.pass = rep.all_positive && smallest > 1e-3 && std::abs(smallest - ones) < 1e-6;
    o.detail = "smallest eigenvalue " + num(smallest) + ", geometric oracle " + num(ones);
    return o;
}

Outcome schlafli() {
    std::mt19937_64 rng(101);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const IdealTags tags = random_tags(rng, i % 5);
        const Vec6 alpha = random_interior_angles(rng, tags);
        const HyperidealSimplex s = simplex_from_interior_angles(alpha, tags);
        const Eigen::MatrixXd B = stratum_tangent_basis(tags);
        const Vec6 g = schlafli_gradient(s);
        const double h = 1e-4;
        Eigen::VectorXd fd(B.cols()), exact(B.cols());
        for (int k = 0; k < B.cols(); ++k) {
            const Vec6 d = B.col(k);
            fd[k] = (volume(simplex_from_interior_angles(alpha + h * d, tags)) -
                     volume(simplex_from_interior_angles(alpha - h * d, tags))) /
                    (2 * h);
            exact[k] = g.dot(d);
        }
        worst = std::max(worst, (fd - exact).norm() / exact.norm());
    }
    return {worst < 1e-5, "largest relative gradient error " + num(worst) + " over 100 simplices, strata 0-4"};
}

Outcome concavity() {
    std::mt19937_64 rng(102);
    double worst = -1e300;
    for (int stratum = 0; stratum <= 4; ++stratum)
        for (int i = 0; i < 50; ++i) {
            const IdealTags tags = random_tags(rng, stratum);
            const HyperidealSimplex s = simplex_from_interior_angles(random_interior_angles(rng, tags), tags);
            const Eigen::MatrixXd H = volume_hessian(s);
            const Eigen::MatrixXd Hs = 0.5 * (H + H.transpose());
            worst = std::max(worst, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Hs).eigenvalues().maxCoeff());
        }
    return {worst < -1e-6, "largest Hessian eigenvalue " + num(worst) + " over 250 simplices"};
}

Outcome simplex_round_trip() {
    std::mt19937_64 rng(103);
    double angle_err = 0, length_err = 0;
    for (int i = 0; i < 100; ++i) {
        const IdealTags tags = random_tags(rng, i % 5);
        const Vec6 theta = Vec6::Constant(kPi) - random_interior_angles(rng, tags);
        angle_err = std::max(angle_err,
                             (measured_exterior_angles(simplex_from_angles(theta, tags)) - theta).cwiseAbs().maxCoeff());
        const Vec6 alpha = random_interior_angles(rng, IdealTags{});
        const Vec6 L = edge_lengths(simplex_from_interior_angles(alpha, IdealTags{})).raw;
        length_err = std::max(length_err, (interior_angles_from_lengths(L) - alpha).cwiseAbs().maxCoeff());
    }
    return {angle_err < 1e-9 && length_err < 1e-8,
            "angle round trip " + num(angle_err) + ", length inversion " + num(length_err) + " over 100 cases"};
}

Outcome polyhedron_realization() {
    std::mt19937_64 rng(104);
    RealizeOptions opt;
    opt.compute_volume = false;
    double inv = 0, grad = 0, resid = 0;
    for (int i = 0; i < 25; ++i) {
        const GroundTruth gt = random_hyperideal_polyhedron(rng, 5 + i % 6, (i % 3) * 0.3);
        const Realization r = realize(gt.sigma, gt.ideal, gt.w, opt);
        g_vertices.add(r);
        inv = std::max(inv, invariant_distance(congruence_invariants(gt.truth), congruence_invariants(r)));
        grad = std::max(grad, r.diagnostics.reduced_gradient);
        resid = std::max({resid, r.diagnostics.length_mismatch, r.diagnostics.shear});
    }
    return {inv < 1e-6 && grad < 1e-9 && resid < 1e-7,
            "invariants " + num(inv) + ", reduced gradient " + num(grad) + ", exactness " + num(resid) +
                " over 25 polyhedra"};
}

/// Random point of the affine set keeping a fraction of the interior margin.
Eigen::VectorXd random_feasible(std::mt19937_64& rng, const ConstraintSet& cs) {
    std::normal_distribution<double> g;
    Eigen::VectorXd r(cs.null_basis.cols());
    for (auto& v : r) v = g(rng);
    const Eigen::VectorXd d = cs.null_basis * r.normalized();
    const double reach = cs.max_step(cs.interior_point, d, 0.3 * cs.interior_margin);
    return cs.interior_point + uniform(rng, 0.1, 1.0) * std::min(reach, 1.0) * d;
}

Outcome random_starts() {
    double spread = 0, grad = 0;
    for (int instance = 0; instance < 5; ++instance) {
        std::mt19937_64 rng(200 + instance);
        const GroundTruth gt = random_hyperideal_polyhedron(rng, 6 + instance, 0.4);
        const ConstraintSet cs = assemble_constraints(gt.sigma, gt.ideal, gt.w);
        std::vector<std::vector<double>> invariants;
        for (int start = 0; start < 10; ++start) {
            const SolveReport sol = maximize(cs, random_feasible(rng, cs));
            grad = std::max(grad, sol.reduced_gradient);
            const Realization r = develop(cs, sol.x, gt.sigma, gt.w);
            g_vertices.add(r);
            invariants.push_back(congruence_invariants(r));
        }
        for (std::size_t a = 0; a < invariants.size(); ++a)
            for (std::size_t b = a + 1; b < invariants.size(); ++b)
                spread = std::max(spread, invariant_distance(invariants[a], invariants[b]));
    }
    return {spread < 1e-6, "invariant spread " + num(spread) + " over 5 instances x 10 starts (reduced gradient " +
                               num(grad) + ")"};
}

Outcome vertex_classes() {
    // plus the all-ideal octahedron, where every vertex sum is exactly 2 pi
    const Faces octahedron = octahedron_faces();
    const Cellulation sigma = Cellulation::build(octahedron);
    std::vector<bool> ideal(sigma.num_vertices(), true);
    RealizeOptions opt;
    opt.compute_volume = false;
    g_vertices.add(realize(sigma, ideal, std::vector<double>(sigma.num_edges(), kPi / 2), opt));
    const RealizedVertices& v = g_vertices;
    return {v.instances > 0 && v.worst_ideal < 1e-7 && v.closest_other > 1e-6,
            "ideal | |p| - 1 | <= " + num(v.worst_ideal) + ", others |p| - 1 >= " + num(v.closest_other) + " over " +
                std::to_string(v.vertices) + " vertices of " + std::to_string(v.instances) + " realizations"};
}

Outcome duality() {
    std::mt19937_64 rng(105);
    double involution = 0, ortho = 0;
    int overlapping = 0;
    for (int i = 0; i < 100; ++i) {
        const ProjPoint v = ProjPoint::classify(random_direction(rng) * uniform(rng, 1.01, 5.0));
        involution = std::max(involution, (dual_plane_to_point(dual_point_to_plane(v)).p - v.p).norm());

        // a ball-crossing line through v meets the dual plane orthogonally (Klein metric)
        const Vec3 q = random_in_ball(rng, 0.95);
        const Vec3 a = q - v.p;
        const Vec3 x = v.p + (1.0 - v.p.dot(v.p)) / a.dot(v.p) * a;
        const Vec3 b1 = v.p.unitOrthogonal(), b2 = v.p.cross(b1).normalized();
        const double na = std::sqrt(klein_metric(x, a, a));
        for (const Vec3& b : {b1, b2})
            ortho = std::max(ortho, std::abs(klein_metric(x, a, b)) / (na * std::sqrt(klein_metric(x, b, b))));
    }
    int segments = 0;
    while (segments < 100) {
        const Vec3 v1 = random_direction(rng) * uniform(rng, 1.01, 4.0);
        const Vec3 v2 = random_direction(rng) * uniform(rng, 1.01, 4.0);
        if (segment_origin_distance(v1, v2) >= 1.0) continue;
        ++segments;
        const auto m = desitter_edge_measure(dual_point_to_plane(ProjPoint::classify(v1)),
                                             dual_point_to_plane(ProjPoint::classify(v2)));
        overlapping += m.tag == EdgeMeasure::Tag::Angle || m.nested;
    }
    return {involution < 1e-12 && ortho < 1e-8 && overlapping == 0,
            "involution " + num(involution) + ", orthogonality " + num(ortho) + ", intersecting dual pairs " +
                std::to_string(overlapping) + "/100"};
}

Outcome shift_identity() {
    std::mt19937_64 rng(106);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        // ideal diagonal p1 p3 in the plane z = 0, hyperideal p2 and p4 on either side
        const double a1 = uniform(rng, 0, 2 * kPi), a3 = a1 + uniform(rng, 2.0, 4.2);
        const Vec3 p1(std::cos(a1), std::sin(a1), 0), p3(std::cos(a3), std::sin(a3), 0);
        const Vec3 mid = 0.5 * (p1 + p3);
        const Vec3 nrm = Vec3(-(p3 - p1).y(), (p3 - p1).x(), 0).normalized();
        auto outside = [&](double side) {
            for (;;) {
                const double s = uniform(rng, 0.2, 2.5), along = uniform(rng, -0.6, 0.6);
                const Vec3 q = mid + side * s * nrm + along * (p3 - p1);
                if (q.norm() > 1.05 && segment_origin_distance(q, p1) < 0.99 && segment_origin_distance(q, p3) < 0.99)
                    return q;
            }
        };
        const Vec3 p2 = outside(1.0), p4 = outside(-1.0);
        Vec4 u1, u3;
        u1 << 1, p1;
        u3 << 1, p3;
        u1 *= uniform(rng, 0.5, 2.0);
        u3 *= uniform(rng, 0.5, 2.0);
        const Vec4 w2 = ProjPoint::classify(p2).lift(), w4 = ProjPoint::classify(p4).lift();
        using enum PointClass;
        const double l12 = lifted_distance(u1, Ideal, w2, Hyperideal), l23 = lifted_distance(w2, Hyperideal, u3, Ideal);
        const double l34 = lifted_distance(u3, Ideal, w4, Hyperideal), l41 = lifted_distance(w4, Hyperideal, u1, Ideal);
        // shift between the feet of the perpendiculars, measured independently by horocyclic projection
        const double shift = horocyclic_position(w2, u1, u3) - horocyclic_position(w4, u1, u3);
        worst = std::max(worst, std::abs(2 * shift - (l12 - l23 + l34 - l41)));
    }
    return {worst < 1e-9, "largest deviation " + num(worst) + " over 100 triangle pairs"};
}

Outcome checker_oracle() {
    std::mt19937_64 rng(107);
    const auto catalog = polyhedral_catalog(8);
    // from mostly rejected to mostly accepted, so both verdicts are exercised
    const std::vector<std::pair<double, double>> ranges{{0.2, 1.0}, {0.5, 1.9}, {0.8, 2.6},
                                                        {1.2, 3.1}, {1.6, 3.1}, {2.1, 3.1}};
    int cases = 0, agree = 0, circuits_ok = 0, paths_ok = 0;
    for (const Cellulation& c : catalog)
        for (const auto& [lo, hi] : ranges) {
            std::uniform_real_distribution<double> u(lo, hi);
            std::vector<double> w(c.num_edges());
            for (double& x : w) x = u(rng);
            const BruteForce bf = brute_force(c, w);
            const bool circuits = bf.min_link >= 2 * kPi - 1e-9 && bf.min_nonelementary_cycle > 2 * kPi + 1e-9;
            const bool paths = bf.min_link_path > kPi + 1e-9;
            const bool ok = check_circuits(c, w).verdict.accepted == circuits &&
                            check_simple_paths(c, w).verdict.accepted == paths;
            ++cases;
            agree += ok;
            circuits_ok += circuits;
            paths_ok += paths;
        }
    return {cases > 0 && agree == cases,
            std::to_string(agree) + "/" + std::to_string(cases) + " verdicts agree on " +
                std::to_string(catalog.size()) + " cellulations (oracle accepts circuits " +
                std::to_string(circuits_ok) + ", paths " + std::to_string(paths_ok) + ")"};
}

Outcome koebe() {
    double tangency = 0, ortho = 0;
    bool increasing = true;
    for (const Faces& faces : {tetrahedron_faces(), cube_faces(), octahedron_faces()}) {
        const KoebeResult r = koebe_continuation(Cellulation::build(faces));
        tangency = std::max(tangency, r.tangency_residual);
        ortho = std::max(ortho, r.orthogonality_residual);
        for (std::size_t i = 1; i < r.steps.size(); ++i) increasing &= r.steps[i].volume > r.steps[i - 1].volume;
    }
    return {tangency < 1e-6 && ortho < 1e-6 && increasing,
            "tangency " + num(tangency) + ", orthogonality " + num(ortho) + ", volume " +
                (increasing ? "strictly increasing" : "NOT increasing")};
}

Outcome triangles() {
    std::mt19937_64 rng(108);
    double min_excess = 1e300, worst = 0;
    int done = 0;
    while (done < 100) {
        std::array<Vec3, 3> t;
        for (auto& p : t) {
            const Vec3 d = random_in_ball(rng, 0.98);
            p = Vec3(d[0], d[1], 0);
        }
        if ((t[1] - t[0]).cross(t[2] - t[0]).norm() < 1e-3) continue;
        ++done;
        const auto ext = triangle_exterior_angles(t);
        min_excess = std::min(min_excess, ext[0] + ext[1] + ext[2] - 2 * kPi);
        const auto dual = dual_triangle_edge_lengths(t);
        for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(dual[k] - ext[k]));
    }
    return {min_excess > 0 && worst < 1e-8,
            "smallest excess over 2 pi " + num(min_excess) + ", dual length error " + num(worst)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget;  // seconds, 0 for none
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "regular simplex Hessian eigenvalues", 1, regular_simplex},
        {2, "Schlafli gradient", 120, schlafli},
        {3, "strict concavity", 300, concavity},
        {4, "simplex round trip", 0, simplex_round_trip},
        {5, "polyhedron realization", 600, polyhedron_realization},
        {6, "initialization independence", 0, random_starts},
        {7, "vertex-class dichotomy", 0, vertex_classes},
        {8, "duality", 0, duality},
        {9, "shift identity", 0, shift_identity},
        {10, "checker oracle equivalence", 0, checker_oracle},
        {11, "Koebe limit", 600, koebe},
        {12, "space-like triangle duality", 0, triangles},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget > 0 && secs > c.budget) {
            o.pass = false;
            o.detail += ", over the " + num(c.budget) + " s budget";
        }
        failed += !o.pass;
        std::printf("%s %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
