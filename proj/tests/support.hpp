#pragma once

#include "hyperideal/minkowski.hpp"
#include "hyperideal/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace testsupport {

using hyperideal::Vec3;

inline Vec3 random_direction(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vec3 v;
    do v = Vec3(g(rng), g(rng), g(rng));
    while (v.norm() < 1e-6);
    return v.normalized();
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Uniform in the ball of the given radius.
inline Vec3 random_in_ball(std::mt19937_64& rng, double radius) {
    return random_direction(rng) * radius * std::cbrt(uniform(rng, 0.0, 1.0));
}

/// Klein metric at x evaluated on tangent vectors a, b.
inline double klein_metric(const Vec3& x, const Vec3& a, const Vec3& b) {
    const double s = 1.0 - x.squaredNorm();
    return a.dot(b) / s + x.dot(a) * x.dot(b) / (s * s);
}

/// Lobachevsky function -int_0^x log|2 sin t| dt, by Gauss-Legendre on the
/// regularized integrand log(sin t / t).
inline double lobachevsky(double x) {
    constexpr double pi = std::numbers::pi;
    x = std::fmod(x, pi);
    if (x < 0) x += pi;
    if (x == 0.0) return 0.0;
    if (x > pi / 2) return -lobachevsky(pi - x);
    // 20-point Gauss-Legendre nodes on [-1, 1] (positive half).
    static const double node[10] = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
                                    0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
                                    0.9639719272779138, 0.9931285991850949};
    static const double weight[10] = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
                                      0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
                                      0.0406014298003869, 0.0176140071391521};
    auto f = [](double t) { return t < 1e-8 ? -t * t / 6 : std::log(std::sin(t) / t); };
    const int panels = 16;
    double integral = 0;
    for (int p = 0; p < panels; ++p) {
        const double a = x * p / panels, b = x * (p + 1) / panels, m = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int k = 0; k < 10; ++k) integral += h * weight[k] * (f(m - h * node[k]) + f(m + h * node[k]));
    }
    // int_0^x log t dt = x log x - x
    return -x * std::log(2.0) - (x * std::log(x) - x) - integral;
}

/// Volume of the ideal tetrahedron with interior dihedral angles a, b, pi - a - b.
inline double ideal_tetrahedron_volume(double a, double b) {
    return lobachevsky(a) + lobachevsky(b) + lobachevsky(std::numbers::pi - a - b);
}

/// Random interior angles of a simplex with the given ideal vertices: every
/// ideal vertex sum is exactly pi, every other vertex sum is below pi - margin.
inline hyperideal::Vec6 random_interior_angles(std::mt19937_64& rng, const hyperideal::IdealTags& ideal,
                                               double lo = 0.08, double hi = 1.3, double margin = 0.08) {
    using hyperideal::Vec6;
    constexpr double pi = std::numbers::pi;
    int n = 0;
    for (bool b : ideal) n += b;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, 6);
    int r = 0;
    for (int v = 0; v < 4; ++v) {
        if (!ideal[v]) continue;
        for (int k : hyperideal::vertex_edges(v)) A(r, k) = 1.0;
        ++r;
    }
    for (;;) {
        Vec6 a;
        for (int k = 0; k < 6; ++k) a[k] = uniform(rng, lo, hi);
        if (n > 0) {
            const Eigen::VectorXd res = A * a - Eigen::VectorXd::Constant(n, pi);
            a -= A.transpose() * (A * A.transpose()).ldlt().solve(res);
        }
        bool ok = a.minCoeff() > 0.05 && a.maxCoeff() < pi - 0.05;
        for (int v = 0; v < 4 && ok; ++v) {
            double sum = 0;
            for (int k : hyperideal::vertex_edges(v)) sum += a[k];
            if (!ideal[v] && sum > pi - margin) ok = false;
        }
        if (ok) return a;
    }
}

/// Ideal tags for a stratum with the given number of ideal vertices, chosen at random.
inline hyperideal::IdealTags random_tags(std::mt19937_64& rng, int n_ideal) {
    hyperideal::IdealTags t{};
    std::vector<int> order{0, 1, 2, 3};
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i < n_ideal; ++i) t[order[i]] = true;
    return t;
}

/// Interior angles from edge lengths through the Gram matrix of vertex lifts.
inline hyperideal::Vec6 angles_from_lengths_by_gram(const hyperideal::Vec6& L) {
    using namespace hyperideal;
    Mat4 G = Mat4::Identity();
    for (int k = 0; k < 6; ++k) {
        const auto [a, b] = kEdgeVertices[k];
        G(a, b) = G(b, a) = -std::cosh(L[k]);
    }
    const Mat4 Gi = G.inverse();
    Vec6 alpha;
    for (int k = 0; k < 6; ++k) {
        const auto [a, b] = kEdgeVertices[k];
        int f[2], n = 0;
        for (int v = 0; v < 4; ++v)
            if (v != a && v != b) f[n++] = v;
        const double c = Gi(f[0], f[1]) / std::sqrt(Gi(f[0], f[0]) * Gi(f[1], f[1]));
        alpha[k] = std::numbers::pi - std::acos(c);
    }
    return alpha;
}

}  // namespace testsupport
