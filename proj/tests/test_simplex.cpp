#include "doctest.h"
#include "hyperideal/errors.hpp"
#include "hyperideal/simplex.hpp"
#include "support.hpp"

#include <numbers>

using namespace hyperideal;
using namespace testsupport;

namespace {
constexpr double kPi = std::numbers::pi;
const IdealTags kAllIdeal{true, true, true, true};
const IdealTags kNoIdeal{};
}  // namespace

TEST_CASE("Lobachevsky oracle") {
    CHECK(lobachevsky(kPi / 2) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(3 * lobachevsky(kPi / 3) == doctest::Approx(1.0149416064096536).epsilon(1e-14));
    CHECK(8 * lobachevsky(kPi / 4) == doctest::Approx(3.663862376708876).epsilon(1e-14));
    CHECK(lobachevsky(kPi / 6) == doctest::Approx(1.5 * lobachevsky(kPi / 3)).epsilon(1e-13));
}

TEST_CASE("angle admissibility") {
    CHECK(admissible_simplex_angles(Vec6::Constant(2 * kPi / 3), kAllIdeal).accepted);
    CHECK(admissible_simplex_angles(Vec6::Constant(2.2), kNoIdeal).accepted);
    const auto v = admissible_simplex_angles(Vec6::Constant(1.9), kNoIdeal);
    CHECK_FALSE(v.accepted);
    CHECK(v.vertex_sums[0] == doctest::Approx(5.7));
    CHECK_FALSE(admissible_simplex_angles(Vec6::Constant(2 * kPi / 3), kNoIdeal).accepted);
    CHECK_FALSE(admissible_simplex_angles(Vec6::Constant(2.2), kAllIdeal).accepted);
    CHECK_THROWS_AS(simplex_from_angles(Vec6::Constant(1.9), kNoIdeal), Error);
}

TEST_CASE("dual simplex edge check") {
    const auto eq = dual_simplex_edge_check(Vec6::Constant(2 * kPi / 3));
    CHECK(eq.accepted);
    for (double s : eq.vertex_sums) CHECK(s == doctest::Approx(2 * kPi));
    CHECK(dual_simplex_edge_check(Vec6::Constant(2.2)).accepted);
    CHECK_FALSE(dual_simplex_edge_check(Vec6::Constant(2.0)).accepted);
    std::mt19937_64 rng(20);
    for (int i = 0; i < 50; ++i) {
        const IdealTags tags = random_tags(rng, i % 5);
        const auto s = simplex_from_interior_angles(random_interior_angles(rng, tags), tags);
        CHECK(dual_simplex_edge_check(measured_exterior_angles(s)).accepted);
    }
}

TEST_CASE("construction from angles") {
    const auto reg = simplex_from_angles(Vec6::Constant(2 * kPi / 3), kAllIdeal);
    for (const auto& v : reg.vertices) {
        CHECK(v.cls == PointClass::Ideal);
        CHECK(v.p.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
    const auto hyp = simplex_from_angles(Vec6::Constant(2.2), kNoIdeal);
    const Vec6 L = edge_lengths(hyp).raw;
    CHECK(L.minCoeff() > 0);
    CHECK(L.maxCoeff() - L.minCoeff() < 1e-12);
    // canonical frame
    CHECK(hyp.vertices[0].p.head<2>().norm() < 1e-12);
    CHECK(hyp.vertices[0].p[2] > 0);
    CHECK(std::abs(hyp.vertices[1].p[1]) < 1e-12);
    CHECK(hyp.vertices[1].p[0] > 0);

    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        const IdealTags tags = random_tags(rng, i % 5);
        const Vec6 alpha = random_interior_angles(rng, tags);
        const auto s = simplex_from_interior_angles(alpha, tags);
        CHECK((measured_exterior_angles(s) - (Vec6::Constant(kPi) - alpha)).cwiseAbs().maxCoeff() < 1e-9);
        for (int v = 0; v < 4; ++v) {
            const double r = s.vertices[v].p.norm();
            if (tags[v])
                CHECK(std::abs(r - 1) < 1e-9);
            else
                CHECK(r > 1 + 1e-9);
        }
        // the same simplex rebuilt from its vertices
        const auto t = HyperidealSimplex::from_vertices(s.vertices);
        CHECK((t.theta - s.theta).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("construction from vertices rejects degenerate input") {
    const ProjPoint a = ProjPoint::classify(Vec3(2, 0, 0)), b = ProjPoint::classify(Vec3(0, 2, 0)),
                    c = ProjPoint::classify(Vec3(-2, -2, 0)), d = ProjPoint::classify(Vec3(0, 0, 2)),
                    inside = ProjPoint::classify(Vec3(0.1, 0, 0));
    CHECK_THROWS_AS(HyperidealSimplex::from_vertices({a, b, c, ProjPoint::classify(Vec3(1, 1, 0))}), Error);
    CHECK(volume_of_points({a, b, c, ProjPoint::classify(Vec3(1.5, 1.5, 0))}) == 0.0);
    CHECK_THROWS_AS(HyperidealSimplex::from_vertices({a, b, c, inside}), Error);
    // edge from (3,3,3)/... far vertices whose segment misses the ball
    try {
        HyperidealSimplex::from_vertices({ProjPoint::classify(Vec3(3, 0.5, 0)), ProjPoint::classify(Vec3(3, -0.5, 0)), c, d});
        FAIL("expected SegmentMissesBall");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SegmentMissesBall);
    }
}

TEST_CASE("truncation") {
    const auto ideal = truncate(simplex_from_angles(Vec6::Constant(2 * kPi / 3), kAllIdeal));
    CHECK(ideal.faces.size() == 4);
    CHECK(ideal.points.size() == 4);

    const auto hs = simplex_from_angles(Vec6::Constant(2.2), kNoIdeal);
    const auto t = truncate(hs);
    REQUIRE(t.faces.size() == 8);
    for (int f = 0; f < 8; ++f) CHECK(t.faces[f].size() == (t.real_face[f] ? 6u : 3u));
    for (const Vec3& p : t.points) CHECK(p.norm() < 1.0);

    std::mt19937_64 rng(22);
    for (int i = 0; i < 40; ++i) {
        const IdealTags tags = random_tags(rng, i % 4);
        const auto s = simplex_from_interior_angles(random_interior_angles(rng, tags), tags);
        const auto tr = truncate(s);
        // every cut face meets each real face sharing one of its edges at a right angle
        for (std::size_t c = 0; c < tr.faces.size(); ++c) {
            if (tr.real_face[c]) continue;
            for (std::size_t f = 0; f < tr.faces.size(); ++f) {
                if (!tr.real_face[f]) continue;
                int shared = 0;
                for (int p : tr.faces[c]) shared += std::count(tr.faces[f].begin(), tr.faces[f].end(), p);
                if (shared < 2) continue;
                const auto m = desitter_edge_measure(tr.planes[c], tr.planes[f]);
                CHECK(m.tag == EdgeMeasure::Tag::Angle);
                CHECK(std::abs(m.value - kPi / 2) < 1e-9);
            }
        }
        // every polytope vertex lies on the planes of the faces through it
        for (std::size_t f = 0; f < tr.faces.size(); ++f)
            for (int p : tr.faces[f]) {
                Vec4 h;
                h << 1, tr.points[p];
                CHECK(std::abs(mdot(h, tr.planes[f].n)) < 1e-9 * std::max(1.0, tr.planes[f].n.norm()));
            }
    }
}

TEST_CASE("edge lengths modulo horospheres") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 30; ++i) {
        const IdealTags tags = random_tags(rng, 1 + i % 4);
        const auto s = simplex_from_interior_angles(random_interior_angles(rng, tags), tags);
        Horoscales h = kUnitHoroscales;
        const EdgeLengthClass base = edge_lengths(s, h);
        int v = 0;
        while (!tags[v]) ++v;
        const double c = uniform(rng, -1.5, 1.5);
        h[v] = std::exp(c);
        const EdgeLengthClass moved = edge_lengths(s, h);
        for (int k = 0; k < 6; ++k) {
            const bool incident = kEdgeVertices[k][0] == v || kEdgeVertices[k][1] == v;
            CHECK(moved.raw[k] - base.raw[k] == doctest::Approx(incident ? c : 0.0).epsilon(1e-10));
        }
        CHECK(base.equivalent(moved, 1e-10));
        // the class only depends on the angles
        const auto again = simplex_from_angles(s.theta, tags).transformed(Isometry::random(rng, 1.0));
        CHECK(edge_lengths(again).equivalent(base, 1e-9));
    }
}

TEST_CASE("volume of ideal simplices against the Lobachevsky function") {
    CHECK(volume(simplex_from_angles(Vec6::Constant(2 * kPi / 3), kAllIdeal)) ==
          doctest::Approx(3 * lobachevsky(kPi / 3)).epsilon(1e-10));
    std::mt19937_64 rng(24);
    for (int i = 0; i < 20; ++i) {
        const Vec6 alpha = random_interior_angles(rng, kAllIdeal, 0.2, 2.5);
        const double ref = ideal_tetrahedron_volume(alpha[0], alpha[1]);
        CHECK(std::abs(volume(simplex_from_interior_angles(alpha, kAllIdeal)) - ref) < 1e-9);
    }
}

TEST_CASE("volume is continuous as hyperideal vertices approach the sphere") {
    const double limit = 3 * lobachevsky(kPi / 3);
    double previous = volume(simplex_from_angles(Vec6::Constant(2 * kPi / 3 + 1e-2), kNoIdeal));
    for (double eps : {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
        const auto r = volume_detailed(simplex_from_angles(Vec6::Constant(2 * kPi / 3 + eps), kNoIdeal));
        CHECK(r.value < previous);
        CHECK(r.value > limit);
        CHECK(r.error_bound < 1e-9);
        previous = r.value;
    }
    CHECK(previous - limit < 1e-5);
}

TEST_CASE("volume against Monte Carlo") {
    // Coarse independent check: the density is not square-integrable at ideal
    // vertices, so use a strictly hyperideal simplex.
    const auto s = simplex_from_angles(Vec6::Constant(2.4), kNoIdeal);
    const auto t = truncate(s);
    std::mt19937_64 rng(25);
    const int n = 400000;
    double sum = 0;
    for (int i = 0; i < n; ++i) {
        const Vec3 x(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
        Vec4 h;
        h << 1, x;
        bool inside = x.squaredNorm() < 1;
        for (const auto& P : t.planes) inside = inside && mdot(h, P.n) <= 0;
        if (inside) sum += 1 / std::pow(1 - x.squaredNorm(), 2);
    }
    const double mc = 8 * sum / n;
    CHECK(std::abs(mc - volume(s)) < 0.02 * volume(s));
}

TEST_CASE("volume is isometry invariant and zero for flat simplices") {
    std::mt19937_64 rng(26);
    for (int i = 0; i < 10; ++i) {
        const IdealTags tags = random_tags(rng, i % 5);
        const auto s = simplex_from_interior_angles(random_interior_angles(rng, tags), tags);
        const auto g = s.transformed(Isometry::random(rng, 0.8));
        CHECK(std::abs(volume(s) - volume(g)) < 1e-8);
    }
}

TEST_CASE("serial and parallel quadrature agree bitwise") {
    const auto s = simplex_from_angles(Vec6::Constant(2.3), kNoIdeal);
    VolumeOptions a, b;
    a.parallel = false;
    b.parallel = true;
    CHECK(volume(s, a) == volume(s, b));
}

TEST_CASE("Schläfli gradient") {
    const Vec6 g = schlafli_gradient(simplex_from_angles(Vec6::Constant(2.2), kNoIdeal));
    CHECK(g.maxCoeff() - g.minCoeff() < 1e-12);

    std::mt19937_64 rng(27);
    for (int i = 0; i < 10; ++i) {
        const IdealTags tags = random_tags(rng, i % 5);
        const Vec6 alpha = random_interior_angles(rng, tags);
        const auto s = simplex_from_interior_angles(alpha, tags);
        const Eigen::MatrixXd B = stratum_tangent_basis(tags);
        Eigen::VectorXd c(B.cols());
        for (int k = 0; k < c.size(); ++k) c[k] = uniform(rng, -1, 1);
        const Vec6 d = (B * c).normalized();
        const double h = 1e-4;
        const double fd = (volume(simplex_from_interior_angles(alpha + h * d, tags)) -
                           volume(simplex_from_interior_angles(alpha - h * d, tags))) /
                          (2 * h);
        const double an = schlafli_gradient(s).dot(d);
        CHECK(std::abs(fd - an) < 1e-5 * std::max(1e-3, std::abs(an)));
        if (s.ideal_count() > 0) {
            Horoscales hs;
            for (double& x : hs) x = std::exp(uniform(rng, -1, 1));
            CHECK(std::abs(schlafli_gradient(s, hs).dot(d) - an) < 1e-9);
        }
    }
}

TEST_CASE("volume Hessian is symmetric and negative definite") {
    std::mt19937_64 rng(28);
    for (int i = 0; i < 15; ++i) {
        const IdealTags tags = random_tags(rng, i % 4);
        const auto s = simplex_from_interior_angles(random_interior_angles(rng, tags), tags);
        const Eigen::MatrixXd H = volume_hessian(s);
        CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-6);
        const Eigen::MatrixXd Hs = 0.5 * (H + H.transpose());
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Hs).eigenvalues().maxCoeff() < -1e-6);
    }
}

TEST_CASE("length inversion") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 20; ++i) {
        const Vec6 alpha = random_interior_angles(rng, kNoIdeal);
        const Vec6 L = edge_lengths(simplex_from_interior_angles(alpha, kNoIdeal)).raw;
        CHECK((angles_from_lengths_by_gram(L) - alpha).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((interior_angles_from_lengths(L) - alpha).cwiseAbs().maxCoeff() < 1e-8);
    }
    const Mat6 J = length_jacobian(Vec6::Constant(kPi - 2.2));
    const Eigen::JacobiSVD<Mat6> svd(J);
    CHECK(svd.singularValues().minCoeff() > 1e-3);
}

TEST_CASE("regular simplex appendix check") {
    const auto rep = regular_simplex_appendix_check(1.2);
    CHECK(rep.all_positive);
    CHECK(rep.eigenvalues.minCoeff() > 1e-3);
    CHECK(rep.max_discrepancy < 1e-6);
    // at most three distinct eigenvalues
    std::vector<double> ev(rep.eigenvalues.data(), rep.eigenvalues.data() + 6);
    int distinct = 1;
    for (int i = 1; i < 6; ++i) distinct += ev[i] - ev[i - 1] > 1e-9;
    CHECK(distinct <= 3);
    CHECK_THROWS_AS(regular_simplex_appendix_check(-1.0), Error);
}
