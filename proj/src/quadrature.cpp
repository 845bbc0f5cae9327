#include "hyperideal/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>

namespace hyperideal {

namespace {

struct GaussRule {
    std::vector<double> x, w;  // on [0, 1]
};

GaussRule legendre_rule(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        r.x[i] = 0.5 * (1 - z);
        r.w[i] = 1.0 / ((1 - z * z) * dp * dp);
    }
    return r;
}

const GaussRule& low_rule() {
    static const GaussRule r = legendre_rule(6);
    return r;
}
const GaussRule& high_rule() {
    static const GaussRule r = legendre_rule(10);
    return r;
}

/// Integral over s in [0, 1] of s^2 / Q(s)^2 with Q(s) = 1 - |apex + s d|^2,
/// positive on [0, 1]. Q = C (r2 - s)(s - r1) with r1 < 0 < 1 < r2.
double radial_integral(const Vec3& apex, const Vec3& d) {
    const double A = 1 - apex.squaredNorm();
    const double B = apex.dot(d);
    const double C = d.squaredNorm();
    const double Q1 = A - 2 * B - C;  // 1 - |apex + d|^2
    const double root = std::sqrt(B * B + A * C);
    // the root of larger magnitude first, the other from r1 r2 = -A / C
    double r1, r2;
    if (B <= 0) {
        r2 = (-B + root) / C;
        r1 = -A / (C * r2);
    } else {
        r1 = (-B - root) / C;
        r2 = -A / (C * r1);
    }
    const double D = 2 * root / C;
    const double m1 = -r1;                   // > 0
    const double r2m1 = Q1 / (C * (1 + m1));  // r2 - 1 without cancellation
    const double logs = std::log1p(1 / r2m1) + std::log1p(1 / m1);
    const double bracket = r2 / r2m1 + m1 / (1 + m1) - 2 * m1 * r2 / D * logs;
    return bracket / (C * C * D * D);
}

/// Density integrated exactly along the rays from the apex, as a function on
/// the base triangle.
class CellIntegrand {
public:
    explicit CellIntegrand(const KleinCell& c)
        : cell_(c), ab_(c.b - c.a), ac_(c.c - c.a),
          scale_(std::abs(ab_.dot(ac_.cross(c.a - c.apex)))) {}

    Vec3 base_point(double u, double eta) const { return cell_.a + u * ab_ + (1 - u) * eta * ac_; }

    double operator()(double u, double eta) const {
        const Vec3 y = base_point(u, eta);
        if (cell_.apex_ideal) {
            // 1 - |x|^2 = s * (2 (1 - p.y) - s |y - p|^2) for |p| = 1, so the
            // ray integral of 1 / (...)^2 is 1 / (alpha (1 - |y|^2))
            const double alpha = 2 * (1 - cell_.apex.dot(y));
            return scale_ * (1 - u) / (alpha * (1 - y.squaredNorm()));
        }
        return scale_ * (1 - u) * radial_integral(cell_.apex, y - cell_.apex);
    }

private:
    KleinCell cell_;
    Vec3 ab_, ac_;
    double scale_;
};

/// Tensor rule with orders (g0 along u, g1 along eta) on a box.
double box_rule(const CellIntegrand& f, const GaussRule& g0, const GaussRule& g1, const std::array<double, 2>& lo,
                const std::array<double, 2>& hi) {
    const double h0 = hi[0] - lo[0], h1 = hi[1] - lo[1];
    double sum = 0;
    for (std::size_t i = 0; i < g0.x.size(); ++i) {
        const double u = lo[0] + h0 * g0.x[i];
        double si = 0;
        for (std::size_t j = 0; j < g1.x.size(); ++j) si += g1.w[j] * f(u, lo[1] + h1 * g1.x[j]);
        sum += g0.w[i] * si;
    }
    return sum * h0 * h1;
}

constexpr int kBoxBudget = 2'000'000;

struct Box {
    std::array<double, 2> lo, hi;
    double value, error;
    /// Direction to bisect: the one whose lower-order rule disagrees more.
    int split;
    /// Bisections so far along each direction.
    std::array<int, 2> depth;
    bool operator<(const Box& o) const { return error < o.error; }
};

Box evaluate(const CellIntegrand& f, const std::array<double, 2>& lo, const std::array<double, 2>& hi,
             std::array<int, 2> depth) {
    const GaussRule &h = high_rule(), &l = low_rule();
    const double full = box_rule(f, h, h, lo, hi);
    const double coarse_u = std::abs(full - box_rule(f, l, h, lo, hi));
    const double coarse_eta = std::abs(full - box_rule(f, h, l, lo, hi));
    // 1 - |y|^2 carries a rounding error of about 1e-16 absolute, which the
    // integrand amplifies by 1 / (1 - |y|^2); the smallest value over the box
    // sits at a corner (concave function, straight box edges)
    double closest = 1.0;
    for (double u : {lo[0], hi[0]})
        for (double eta : {lo[1], hi[1]}) closest = std::min(closest, 1 - f.base_point(u, eta).squaredNorm());
    const double noise = std::abs(full) * std::max(1e-14, 1e-15 / std::max(closest, 1e-300));
    const double err = std::max(0.0, std::max(coarse_u, coarse_eta) - noise);
    return Box{lo, hi, full, err, coarse_u >= coarse_eta ? 0 : 1, depth};
}

}  // namespace

CellIntegral integrate_cell(const KleinCell& cell, double tol, int max_depth) {
    // globally adaptive: always split the box with the largest error estimate
    CellIntegrand f(cell);
    CellIntegral out;
    std::priority_queue<Box> heap;
    std::vector<Box> done;
    heap.push(evaluate(f, {0, 0}, {1, 1}, {0, 0}));
    out.boxes = 1;
    // error of boxes still open to refinement
    double active_error = heap.top().error;
    while (!heap.empty() && active_error > tol) {
        if (out.boxes >= kBoxBudget) {
            out.converged = false;
            break;
        }
        Box b = heap.top();
        heap.pop();
        active_error -= b.error;
        const int d = b.split;
        if (b.depth[d] >= max_depth) {
            out.converged = false;
            done.push_back(b);
            continue;
        }
        const double mid = 0.5 * (b.lo[d] + b.hi[d]);
        std::array<int, 2> depth = b.depth;
        ++depth[d];
        for (int half = 0; half < 2; ++half) {
            std::array<double, 2> clo = b.lo, chi = b.hi;
            (half ? clo : chi)[d] = mid;
            Box c = evaluate(f, clo, chi, depth);
            active_error += c.error;
            heap.push(c);
        }
        out.boxes += 2;
    }
    for (; !heap.empty(); heap.pop()) done.push_back(heap.top());
    // sum small contributions first
    std::sort(done.begin(), done.end(), [](const Box& a, const Box& b) { return std::abs(a.value) < std::abs(b.value); });
    for (const Box& b : done) {
        out.value += b.value;
        out.error += b.error;
    }
    return out;
}

std::vector<KleinCell> decompose_polytope(const std::vector<Vec3>& points, const std::vector<bool>& ideal,
                                          const std::vector<std::vector<int>>& faces) {
    Vec3 center = Vec3::Zero();
    for (const Vec3& p : points) center += p;
    center /= static_cast<double>(points.size());

    std::vector<KleinCell> cells;
    for (const auto& face : faces) {
        Vec3 fc = Vec3::Zero();
        for (int v : face) fc += points[v];
        fc /= static_cast<double>(face.size());

        std::vector<std::pair<Vec3, bool>> ring;
        for (std::size_t i = 0; i < face.size(); ++i) {
            const int v = face[i], w = face[(i + 1) % face.size()];
            ring.emplace_back(points[v], ideal[v]);
            if (ideal[v] && ideal[w]) ring.emplace_back(0.5 * (points[v] + points[w]), false);
        }
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const auto& [p, pi] = ring[i];
            const auto& [q, qi] = ring[(i + 1) % ring.size()];
            KleinCell cell;
            if (pi)
                cell = KleinCell{p, center, fc, q, true};
            else if (qi)
                cell = KleinCell{q, center, fc, p, true};
            else
                cell = KleinCell{center, fc, p, q, false};
            const double vol6 = std::abs((cell.b - cell.a).dot((cell.c - cell.a).cross(cell.a - cell.apex)));
            if (vol6 < 1e-15) continue;
            cells.push_back(cell);
        }
    }
    return cells;
}

namespace {
QuadratureResult accumulate(const std::vector<CellIntegral>& parts) {
    QuadratureResult r;
    for (const auto& p : parts) {
        r.value += p.value;
        r.error += p.error;
        r.boxes += p.boxes;
        r.converged = r.converged && p.converged;
    }
    return r;
}
}  // namespace

QuadratureResult integrate_cells_serial(const std::vector<KleinCell>& cells, double tol, int max_depth) {
    const double cell_tol = tol / std::max<std::size_t>(1, cells.size());
    std::vector<CellIntegral> parts(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) parts[i] = integrate_cell(cells[i], cell_tol, max_depth);
    return accumulate(parts);
}

QuadratureResult integrate_cells_parallel(const std::vector<KleinCell>& cells, double tol, int max_depth) {
    const double cell_tol = tol / std::max<std::size_t>(1, cells.size());
    std::vector<CellIntegral> parts(cells.size());
    const long n = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) parts[i] = integrate_cell(cells[i], cell_tol, max_depth);
    return accumulate(parts);
}

}  // namespace hyperideal
