#include "hyperideal/circles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <tuple>

namespace hyperideal {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* to_string(CircleColor c) { return c == CircleColor::Black ? "black" : "red"; }

const char* to_string(ArcKind k) {
    switch (k) {
        case ArcKind::BlackBlack: return "black-black";
        case ArcKind::RedBlack: return "red-black";
        case ArcKind::RedRed: return "red-red";
    }
    return "?";
}

SphericalCircle SphericalCircle::from_normal(const Vec4& n, CircleColor color, int source) {
    // <(1, s), n> = 0  <=>  s . m = n0 / |m| with m the spatial part
    const Vec3 m = n.tail<3>();
    const double len = m.norm();
    SphericalCircle c;
    c.color = color;
    c.source = source;
    c.disk_is_cap = n[0] >= 0;
    c.axis = (c.disk_is_cap ? 1.0 : -1.0) * m / len;
    // cos = |n0| / |m| and sin = 1 / |m| for a unit normal
    c.radius = std::atan2(std::sqrt(std::max(0.0, mnorm2(n))), std::abs(n[0]));
    return c;
}

Vec4 SphericalCircle::normal() const {
    Vec4 n;
    n << std::cos(radius), axis;
    return (disk_is_cap ? 1.0 : -1.0) / std::sin(radius) * n;
}

SphericalCircle SphericalCircle::transformed(const Isometry& g) const {
    return from_normal(g.m * normal(), color, source);
}

double inversive_product(const SphericalCircle& a, const SphericalCircle& b) { return mdot(a.normal(), b.normal()); }

double tangency_gap(const SphericalCircle& a, const SphericalCircle& b) {
    // |n1 + n2|^2 = 2 + 2 <n1, n2> = 4 cos^2(angle / 2)
    const double q = mnorm2(a.normal() + b.normal());
    const double half = 0.5 * std::sqrt(std::abs(q));
    return q >= 0 ? 2 * std::asin(std::min(1.0, half)) : 2 * std::asinh(half);
}

int CircleConfig::count(CircleColor c) const {
    return static_cast<int>(std::ranges::count_if(circles, [c](const SphericalCircle& s) { return s.color == c; }));
}

void measure_arcs(CircleConfig& c, double tangency_tol) {
    for (CircleArc& arc : c.arcs) {
        const SphericalCircle &a = c.circles[arc.a], &b = c.circles[arc.b];
        arc.product = inversive_product(a, b);
        arc.angle = std::acos(std::clamp(arc.product, -1.0, 1.0));
        arc.tangent = arc.kind != ArcKind::RedBlack && tangency_gap(a, b) < tangency_tol;
    }
}

CircleConfig transformed(const CircleConfig& c, const Isometry& g) {
    CircleConfig out = c;
    for (SphericalCircle& s : out.circles) s = s.transformed(g);
    return out;
}

namespace {

/// Unit de Sitter normals per circle, black ones first (by face), then red
/// ones (by vertex), plus the arcs; shared by the realization and the limit.
struct NormalLayout {
    std::vector<int> red_of_vertex;  // -1 for ideal vertices
    std::vector<CircleArc> arcs;
    std::vector<CircleColor> colors;
    std::vector<int> sources;
};

NormalLayout layout(const Cellulation& sigma, const std::vector<bool>& ideal) {
    NormalLayout L;
    const int nf = sigma.num_faces();
    for (int f = 0; f < nf; ++f) {
        L.colors.push_back(CircleColor::Black);
        L.sources.push_back(f);
    }
    L.red_of_vertex.assign(sigma.num_vertices(), -1);
    for (int v = 0; v < sigma.num_vertices(); ++v) {
        if (ideal[v]) continue;
        L.red_of_vertex[v] = static_cast<int>(L.colors.size());
        L.colors.push_back(CircleColor::Red);
        L.sources.push_back(v);
    }
    for (int e = 0; e < sigma.num_edges(); ++e) {
        const auto [f, g] = sigma.edge_faces(e);
        L.arcs.push_back(CircleArc{std::min(f, g), std::max(f, g), ArcKind::BlackBlack, e});
    }
    for (int v = 0; v < sigma.num_vertices(); ++v) {
        if (L.red_of_vertex[v] < 0) continue;
        for (int f : sigma.vertex_faces(v)) L.arcs.push_back(CircleArc{f, L.red_of_vertex[v], ArcKind::RedBlack});
    }
    for (int e = 0; e < sigma.num_edges(); ++e) {
        const auto [u, v] = sigma.edge(e);
        if (L.red_of_vertex[u] >= 0 && L.red_of_vertex[v] >= 0)
            L.arcs.push_back(CircleArc{L.red_of_vertex[u], L.red_of_vertex[v], ArcKind::RedRed, e});
    }
    return L;
}

std::vector<Vec4> realization_normals(const Realization& r, const NormalLayout& L) {
    std::vector<Vec4> n(r.face_normals.begin(), r.face_normals.end());
    for (int v = 0; v < r.sigma.num_vertices(); ++v) {
        if (L.red_of_vertex[v] < 0) continue;
        // the disk is the cap beyond the dual plane, <(1, s), lift> > 0
        Vec4 lift = vertex_lift(r.vertices[v]);
        if (lift[0] < 0) lift = -lift;
        n.push_back(lift / std::sqrt(mnorm2(lift)));
    }
    return n;
}

CircleConfig assemble(const NormalLayout& L, const std::vector<Vec4>& normals, double tangency_tol) {
    CircleConfig c;
    for (std::size_t i = 0; i < normals.size(); ++i)
        c.circles.push_back(SphericalCircle::from_normal(normals[i], L.colors[i], L.sources[i]));
    c.arcs = L.arcs;
    measure_arcs(c, tangency_tol);
    return c;
}

}  // namespace

CircleConfig config_from_realization(const Realization& r, double tangency_tol) {
    std::vector<bool> ideal(r.sigma.num_vertices());
    for (int v = 0; v < r.sigma.num_vertices(); ++v) ideal[v] = r.vertices[v].cls == PointClass::Ideal;
    const NormalLayout L = layout(r.sigma, ideal);
    return assemble(L, realization_normals(r, L), tangency_tol);
}

namespace {

/// Nearly uniform points on S^2 (Fibonacci lattice).
std::vector<Vec3> sphere_grid(int n) {
    std::vector<Vec3> pts;
    const double golden = kPi * (3 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1 - (2 * i + 1.0) / n;
        const double rho = std::sqrt(std::max(0.0, 1 - z * z));
        pts.emplace_back(rho * std::cos(golden * i), rho * std::sin(golden * i), z);
    }
    return pts;
}

std::string describe(const SphericalCircle& c) {
    return std::string(to_string(c.color)) + " circle of " + (c.color == CircleColor::Black ? "face " : "vertex ") +
           std::to_string(c.source);
}

}  // namespace

ConfigVerdict validate_config(const CircleConfig& c, const ConfigCheckOptions& opt) {
    ConfigVerdict v;
    auto reject = [&](std::string why) {
        v.accepted = false;
        v.reasons.push_back(std::move(why));
    };
    const int n = static_cast<int>(c.circles.size());

    std::set<std::pair<CircleColor, int>> seen;
    for (const SphericalCircle& s : c.circles) {
        if (std::abs(s.axis.norm() - 1) > opt.tol) reject(describe(s) + ": axis is not a unit vector");
        if (!(s.radius > 0 && s.radius <= kPi / 2 + opt.tol)) reject(describe(s) + ": radius outside (0, pi/2]");
        if (s.source < 0 || !seen.insert({s.color, s.source}).second)
            reject(describe(s) + ": missing or repeated provenance");
    }

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const SphericalCircle &a = c.circles[i], &b = c.circles[j];
            if (a.color != CircleColor::Red || b.color != CircleColor::Red) continue;
            const double p = inversive_product(a, b);
            if (p > -1 + opt.tol)
                reject(describe(a) + " and " + describe(b) + (p >= 1 ? ": red disks are nested" : ": red disks overlap"));
        }

    for (const CircleArc& arc : c.arcs) {
        if (arc.a < 0 || arc.b < 0 || arc.a >= n || arc.b >= n || arc.a == arc.b) {
            reject("arc with invalid circle indices");
            continue;
        }
        const SphericalCircle &a = c.circles[arc.a], &b = c.circles[arc.b];
        const std::string name = describe(a) + " / " + describe(b);
        const int reds = (a.color == CircleColor::Red) + (b.color == CircleColor::Red);
        const int expected = arc.kind == ArcKind::BlackBlack ? 0 : arc.kind == ArcKind::RedBlack ? 1 : 2;
        if (reds != expected) reject(name + ": colors do not match the arc kind");
        if (!(arc.angle >= 0 && arc.angle <= kPi)) reject(name + ": recorded angle outside [0, pi]");
        const double product = inversive_product(a, b);
        if (std::abs(product - arc.product) > opt.tol) reject(name + ": recorded product disagrees with the circles");
        if (std::abs(std::clamp(product, -1.0, 1.0) - std::cos(arc.angle)) > opt.tol)
            reject(name + ": recorded angle disagrees with the circles");
        if (arc.kind == ArcKind::RedBlack && std::abs(product) > opt.tol) reject(name + ": not orthogonal");
    }

    if (!opt.check_double_cover) return v;
    std::vector<Vec4> black;
    for (const SphericalCircle& s : c.circles)
        if (s.color == CircleColor::Black) black.push_back(s.normal());
    for (const Vec3& s : sphere_grid(opt.grid_points)) {
        Vec4 x;
        x << 1.0, s;
        int inside = 0;
        for (const Vec4& nb : black) inside += mdot(x, nb) > opt.tol;
        if (inside > 2) {
            reject("a point of the sphere lies in " + std::to_string(inside) + " black disks");
            break;
        }
    }
    return v;
}

namespace {

/// Value at h = 0 of the polynomial through (h[i], y[i]) (Neville).
Vec4 extrapolate_to_zero(const std::vector<double>& h, std::vector<Vec4> y) {
    const std::size_t m = h.size();
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = 0; i + level < m; ++i)
            y[i] = (h[i + level] * y[i] - h[i] * y[i + 1]) / (h[i + level] - h[i]);
    return y[0];
}


/// Largest tangency gap (black-black, red-red) and largest |angle - pi/2| (red-black).
std::pair<double, double> limit_residuals(const CircleConfig& c) {
    double tangency = 0, orthogonality = 0;
    for (const CircleArc& arc : c.arcs) {
        if (arc.kind == ArcKind::RedBlack)
            orthogonality = std::max(orthogonality, std::abs(arc.angle - kPi / 2));
        else
            tangency = std::max(tangency, tangency_gap(c.circles[arc.a], c.circles[arc.b]));
    }
    return {tangency, orthogonality};
}

/// Gauss-Newton with minimum-norm steps on the tangency configuration: unit
/// normals, product -1 along black-black and red-red arcs, 0 along red-black
/// ones. The solutions form one orbit of the Moebius group, so the steps stay
/// near the extrapolated start.
std::vector<Vec4> polish_limit(const NormalLayout& L, const std::vector<Vec4>& start) {
    const int n = static_cast<int>(start.size());
    const int rows = n + static_cast<int>(L.arcs.size());
    const Eigen::Vector4d sig(-1, 1, 1, 1);
    Eigen::VectorXd z(4 * n);
    for (int i = 0; i < n; ++i) z.segment<4>(4 * i) = start[i];
    auto residual = [&](const Eigen::VectorXd& x, Eigen::MatrixXd* jac) {
        Eigen::VectorXd F(rows);
        if (jac) jac->setZero(rows, 4 * n);
        for (int i = 0; i < n; ++i) {
            const Vec4 a = x.segment<4>(4 * i);
            F[i] = mnorm2(a) - 1;
            if (jac) jac->block<1, 4>(i, 4 * i) = 2 * sig.cwiseProduct(a).transpose();
        }
        for (std::size_t k = 0; k < L.arcs.size(); ++k) {
            const CircleArc& arc = L.arcs[k];
            const Vec4 a = x.segment<4>(4 * arc.a), b = x.segment<4>(4 * arc.b);
            const int row = n + static_cast<int>(k);
            F[row] = mdot(a, b) - (arc.kind == ArcKind::RedBlack ? 0.0 : -1.0);
            if (jac) {
                jac->block<1, 4>(row, 4 * arc.a) = sig.cwiseProduct(b).transpose();
                jac->block<1, 4>(row, 4 * arc.b) = sig.cwiseProduct(a).transpose();
            }
        }
        return F;
    };
    Eigen::MatrixXd J;
    Eigen::VectorXd F = residual(z, &J);
    for (int it = 0; it < 30 && F.cwiseAbs().maxCoeff() > 1e-15; ++it) {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
        cod.setThreshold(1e-10);
        const Eigen::VectorXd step = cod.solve(-F);
        const Eigen::VectorXd next = z + step;
        const Eigen::VectorXd Fn = residual(next, nullptr);
        if (!(Fn.cwiseAbs().maxCoeff() < F.cwiseAbs().maxCoeff())) break;
        z = next;
        F = residual(z, &J);
    }
    if (!(F.cwiseAbs().maxCoeff() < 1e-10))
        throw Error(ErrorCode::ContinuationStalled,
                    "the extrapolated circles do not settle on a tangency configuration (residual " +
                        std::to_string(F.cwiseAbs().maxCoeff()) + ")");
    std::vector<Vec4> out(n);
    for (int i = 0; i < n; ++i) out[i] = z.segment<4>(4 * i);
    return out;
}
}  // namespace

KoebeResult koebe_continuation(const Cellulation& sigma, const std::optional<std::vector<bool>>& initial_ideal,
                               const KoebeOptions& opt) {
    const int nv = sigma.num_vertices();
    if (initial_ideal) {
        if (static_cast<int>(initial_ideal->size()) != nv)
            throw Error(ErrorCode::OutOfDomain, "ideal flags do not match the vertices");
        if (std::ranges::find(*initial_ideal, true) != initial_ideal->end())
            throw Error(ErrorCode::OutOfDomain,
                        "exterior angles near pi make every vertex strictly hyperideal; no vertex can start ideal");
    }
    if (opt.steps < 2 || opt.extrapolation_points < 1 || !(opt.ratio > 0 && opt.ratio < 1) || !(opt.delta0 > 0))
        throw Error(ErrorCode::OutOfDomain, "invalid continuation schedule");

    const std::vector<bool> ideal(nv, false);
    const NormalLayout L = layout(sigma, ideal);
    KoebeResult out;
    std::optional<Eigen::VectorXd> warm;

    auto solve = [&](double h) {
        ++out.solves;
        const std::vector<double> w(sigma.num_edges(), kPi - h * opt.delta0);
        return realize(sigma, ideal, w, opt.realize, warm);
    };
    // reach h_to from the last solution, halving the step in log h on failure
    std::function<Realization(double, double, int)> advance = [&](double h_from, double h_to, int halvings) {
        try {
            return solve(h_to);
        } catch (const Error& e) {
            if (halvings >= opt.max_halvings || !warm)
                throw Error(ErrorCode::ContinuationStalled, "no convergence at t = " + std::to_string(1 - h_to) +
                                                                " after " + std::to_string(halvings) +
                                                                " halvings: " + e.what());
            const double mid = std::sqrt(h_from * h_to);
            warm = advance(h_from, mid, halvings + 1).angles;
            return advance(mid, h_to, halvings + 1);
        }
    };

    std::vector<double> hs;
    std::vector<std::vector<Vec4>> history;
    double h_prev = 1.0;
    for (int k = 0; k < opt.steps; ++k) {
        const double h = std::pow(opt.ratio, k);
        Realization r = advance(h_prev, h, 0);
        warm = r.angles;
        h_prev = h;
        const CircleConfig c = config_from_realization(r);
        KoebeStep step{1 - h, h * opt.delta0, r.volume, r.diagnostics.iterations, 0.0};
        for (const CircleArc& arc : c.arcs)
            if (arc.kind == ArcKind::BlackBlack) step.black_gap = std::max(step.black_gap, kPi - arc.angle);
        out.steps.push_back(step);
        hs.push_back(h);
        history.push_back(realization_normals(r, L));
    }

    const std::size_t m = std::min<std::size_t>(opt.extrapolation_points, hs.size());
    const std::vector<double> tail_h(hs.end() - m, hs.end());
    std::vector<Vec4> limit;
    for (std::size_t i = 0; i < history.back().size(); ++i) {
        std::vector<Vec4> ys;
        for (std::size_t k = hs.size() - m; k < hs.size(); ++k) ys.push_back(history[k][i]);
        limit.push_back(normalize_spacelike(extrapolate_to_zero(tail_h, ys)));
    }
    out.extrapolation_residual = limit_residuals(assemble(L, limit, 0.0)).first;
    const std::vector<Vec4> polished = polish_limit(L, limit);
    for (std::size_t i = 0; i < limit.size(); ++i)
        out.polish_shift = std::max(out.polish_shift, (polished[i] - limit[i]).cwiseAbs().maxCoeff());
    out.config = assemble(L, polished, 1e-6);
    std::tie(out.tangency_residual, out.orthogonality_residual) = limit_residuals(out.config);
    return out;
}

namespace {

struct PlanarCircle {
    Vec2 center;
    double radius;
};

/// Image of a spherical circle not through the north pole: the two points of
/// the circle in the plane of its axis and the pole map to a diameter.
PlanarCircle project(const Vec3& axis, double radius) {
    const Vec3 pole(0, 0, 1);
    Vec3 side = pole - pole.dot(axis) * axis;
    if (side.norm() < 1e-12) side = Vec3(1, 0, 0);
    side.normalize();
    const Vec3 p = std::cos(radius) * axis + std::sin(radius) * side;
    const Vec3 q = std::cos(radius) * axis - std::sin(radius) * side;
    const Vec2 a = stereographic(p), b = stereographic(q);
    return {0.5 * (a + b), 0.5 * (a - b).norm()};
}

double pole_distance(const SphericalCircle& c, const Vec3& pole) {
    return std::abs(std::acos(std::clamp(c.axis.dot(pole), -1.0, 1.0)) - c.radius);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

}  // namespace

std::string emit_svg(const CircleConfig& c, const SvgOptions& opt) {
    // rotate a point far from every circle to the north pole if needed
    Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
    const Vec3 north(0, 0, 1);
    double clearance = kPi;
    for (const SphericalCircle& s : c.circles) clearance = std::min(clearance, pole_distance(s, north));
    if (clearance < opt.pole_clearance) {
        Vec3 best = north;
        double best_clear = -1;
        for (const Vec3& p : sphere_grid(500)) {
            double d = kPi;
            for (const SphericalCircle& s : c.circles) d = std::min(d, pole_distance(s, p));
            if (d > best_clear + 1e-12) {
                best_clear = d;
                best = p;
            }
        }
        rot = Eigen::Quaterniond::FromTwoVectors(best, north).toRotationMatrix();
    }

    std::vector<PlanarCircle> images;
    double extent = 1.2;
    for (const SphericalCircle& s : c.circles) {
        images.push_back(project((rot * s.axis).normalized(), s.radius));
        const PlanarCircle& p = images.back();
        if (p.radius < 8) extent = std::max(extent, p.center.norm() + p.radius);
    }
    extent = std::min(extent, 8.0) * 1.05;

    const double size = opt.size;
    const double scale = size / (2 * extent);
    auto X = [&](double x) { return fmt((x + extent) * scale); };
    auto Y = [&](double y) { return fmt((extent - y) * scale); };

    std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(opt.size) +
           "\" height=\"" + std::to_string(opt.size) + "\" viewBox=\"0 0 " + std::to_string(opt.size) + " " +
           std::to_string(opt.size) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < c.circles.size(); ++i) {
        const bool red = c.circles[i].color == CircleColor::Red;
        svg += "<circle cx=\"" + X(images[i].center.x()) + "\" cy=\"" + Y(images[i].center.y()) + "\" r=\"" +
               fmt(images[i].radius * scale) + "\" fill=\"none\" stroke=\"" + (red ? "#c0392b" : "black") +
               "\" stroke-width=\"" + (red ? "1.5" : "1") + "\"" + (red ? " stroke-dasharray=\"6 3\"" : "") + "/>\n";
    }
    if (opt.show_graph) {
        for (const CircleArc& arc : c.arcs) {
            const Vec2 a = images[arc.a].center, b = images[arc.b].center;
            svg += "<line x1=\"" + X(a.x()) + "\" y1=\"" + Y(a.y()) + "\" x2=\"" + X(b.x()) + "\" y2=\"" + Y(b.y()) +
                   "\" stroke=\"#2c7fb8\" stroke-width=\"0.5\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace hyperideal
