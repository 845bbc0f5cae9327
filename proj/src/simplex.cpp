#include "hyperideal/simplex.hpp"

#include "hyperideal/errors.hpp"
#include "hyperideal/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hyperideal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

/// The two faces containing edge k (faces are indexed by their opposite vertex).
std::array<int, 2> edge_faces(int k) {
    const auto [a, b] = kEdgeVertices[k];
    std::array<int, 2> f{};
    int n = 0;
    for (int v = 0; v < 4; ++v)
        if (v != a && v != b) f[n++] = v;
    return f;
}

Mat4 time_reversal() { return Eigen::Vector4d(-1, 1, 1, 1).asDiagonal(); }

Vec4 unit_lift(const ProjPoint& p) {
    const double r = p.p.norm();
    Vec4 x;
    if (p.cls == PointClass::Ideal) {
        x << 1.0, p.p / r;
        return x;
    }
    x << 1.0, p.p;
    return x / std::sqrt(r * r - 1.0);
}

/// Checks that the segment between the two oriented lifts crosses the ball.
void require_edge_crossing(const Vec4& a, bool ia, const Vec4& b, bool ib, int edge) {
    const double c = mdot(a, b);
    const double bound = (ia || ib) ? 0.0 : -1.0;
    if (ia && ib) {
        if (c < 0) return;
    } else if (c < bound - 1e-9) {
        return;
    }
    std::ostringstream msg;
    msg << "edge " << kEdgeVertices[edge][0] + 1 << kEdgeVertices[edge][1] + 1;
    if (c > bound + 1e-9) throw Error(ErrorCode::SegmentMissesBall, msg.str() + " misses the ball");
    throw Error(ErrorCode::DegenerateSimplex, msg.str() + " is tangent to the sphere");
}

/// A point of H^3 on edge k, from the oriented lifts.
Vec4 edge_point(const Vec4& a, bool ia, const Vec4& b, bool ib) {
    if (ia && ib) return a + b;
    if (ia) return edge_point(b, ib, a, ia);
    if (ib) return a - b / mdot(a, b);
    return a + b;
}

ProjPoint klein_of(const Vec4& lift, bool ideal) {
    ProjPoint p = ProjPoint::from_lift(lift);
    if (ideal) {
        p.p.normalize();
        p.cls = PointClass::Ideal;
    } else {
        p.cls = PointClass::Hyperideal;
    }
    return p;
}

}  // namespace

int edge_index(int i, int j) {
    if (i > j) std::swap(i, j);
    for (int k = 0; k < 6; ++k)
        if (kEdgeVertices[k][0] == i && kEdgeVertices[k][1] == j) return k;
    throw Error(ErrorCode::OutOfDomain, "not an edge of the simplex");
}

std::array<int, 3> vertex_edges(int v) {
    std::array<int, 3> out{};
    int n = 0;
    for (int k = 0; k < 6; ++k)
        if (kEdgeVertices[k][0] == v || kEdgeVertices[k][1] == v) out[n++] = k;
    return out;
}

AngleVerdict admissible_simplex_angles(const Vec6& theta, const IdealTags& ideal, double tol) {
    AngleVerdict v;
    v.accepted = true;
    for (int k = 0; k < 6; ++k) {
        if (!(theta[k] > 0 && theta[k] < kPi)) {
            v.accepted = false;
            std::ostringstream msg;
            msg << "angle at edge " << kEdgeVertices[k][0] + 1 << kEdgeVertices[k][1] + 1 << " outside (0, pi)";
            v.reasons.push_back(msg.str());
        }
    }
    for (int s = 0; s < 4; ++s) {
        double sum = 0;
        for (int k : vertex_edges(s)) sum += theta[k];
        v.vertex_sums[s] = sum;
        std::ostringstream msg;
        if (ideal[s] && std::abs(sum - kTwoPi) > tol) {
            msg << "vertex " << s + 1 << " tagged ideal but its angle sum is " << sum;
        } else if (!ideal[s] && sum <= kTwoPi + tol) {
            msg << "vertex " << s + 1 << " has angle sum " << sum << (sum < kTwoPi - tol ? " < 2 pi" : " = 2 pi but is not tagged ideal");
        } else {
            continue;
        }
        v.accepted = false;
        v.reasons.push_back(msg.str());
    }
    return v;
}

AngleVerdict dual_simplex_edge_check(const Vec6& l, double tol) {
    AngleVerdict v;
    v.accepted = true;
    for (int s = 0; s < 4; ++s) {
        double sum = 0;
        for (int k : vertex_edges(s)) sum += l[k];
        v.vertex_sums[s] = sum;
        if (sum < kTwoPi - tol) {
            v.accepted = false;
            std::ostringstream msg;
            msg << "dual face " << s + 1 << " has perimeter " << sum << " < 2 pi";
            v.reasons.push_back(msg.str());
        }
    }
    for (int k = 0; k < 6; ++k)
        if (!(l[k] > 0 && l[k] < kPi)) {
            v.accepted = false;
            v.reasons.push_back("dual edge length outside (0, pi)");
        }
    return v;
}

Vec6 HyperidealSimplex::interior_angles() const { return Vec6::Constant(kPi) - theta; }

int HyperidealSimplex::ideal_count() const { return static_cast<int>(std::count(ideal.begin(), ideal.end(), true)); }

HyperidealSimplex HyperidealSimplex::transformed(const Isometry& g) const {
    HyperidealSimplex out = *this;
    for (int i = 0; i < 4; ++i) {
        out.normals[i] = g.apply(normals[i]);
        Vec4 v = g.apply(lifts[i]);
        if (ideal[i]) v /= v[0];
        out.lifts[i] = v;
        out.vertices[i] = klein_of(v, ideal[i]);
    }
    return out;
}

HyperidealSimplex HyperidealSimplex::from_vertices(const std::array<ProjPoint, 4>& pts) {
    HyperidealSimplex s;
    for (int i = 0; i < 4; ++i) {
        if (pts[i].cls == PointClass::Finite) throw Error(ErrorCode::NotHyperideal, "simplex vertex inside the ball");
        s.ideal[i] = pts[i].cls == PointClass::Ideal;
        s.lifts[i] = unit_lift(pts[i]);
        s.vertices[i] = klein_of(s.lifts[i], s.ideal[i]);
    }
    const Vec3 e1 = pts[1].p - pts[0].p, e2 = pts[2].p - pts[0].p, e3 = pts[3].p - pts[0].p;
    const double scale = e1.norm() * e2.norm() * e3.norm();
    if (std::abs(e1.dot(e2.cross(e3))) <= 1e-9 * scale) throw Error(ErrorCode::DegenerateSimplex, "coplanar vertices");
    for (int k = 0; k < 6; ++k) {
        const auto [a, b] = kEdgeVertices[k];
        require_edge_crossing(s.lifts[a], s.ideal[a], s.lifts[b], s.ideal[b], k);
    }
    for (int i = 0; i < 4; ++i) {
        std::array<Vec4, 3> others;
        int n = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) others[n++] = s.lifts[j];
        Vec4 nv = normalize_spacelike(minkowski_orthogonal(others[0], others[1], others[2]));
        if (mdot(nv, s.lifts[i]) > 0) nv = -nv;
        s.normals[i] = nv;
    }
    s.theta = measured_exterior_angles(s);
    return s;
}

Vec6 measured_exterior_angles(const HyperidealSimplex& s) {
    Vec6 t;
    for (int k = 0; k < 6; ++k) {
        const auto [f, g] = edge_faces(k);
        t[k] = std::acos(std::clamp(mdot(s.normals[f], s.normals[g]), -1.0, 1.0));
    }
    return t;
}

HyperidealSimplex simplex_from_angles(const Vec6& theta, const IdealTags& ideal) {
    const AngleVerdict verdict = admissible_simplex_angles(theta, ideal);
    if (!verdict.accepted) throw Error(ErrorCode::InadmissibleAngles, verdict.reasons.front());

    // Gram matrix of the outward unit face normals.
    Mat4 G = Mat4::Identity();
    for (int k = 0; k < 6; ++k) {
        const auto [f, g] = edge_faces(k);
        G(f, g) = G(g, f) = std::cos(theta[k]);
    }
    Eigen::SelfAdjointEigenSolver<Mat4> eig(G);
    const Vec4 lam = eig.eigenvalues();
    const double lam_scale = lam.cwiseAbs().maxCoeff();
    if (!(lam[0] < -1e-12 * lam_scale && lam[1] > 1e-12 * lam_scale))
        throw Error(ErrorCode::SolveDiverged, "normal Gram matrix does not have signature (3,1)");

    // Columns of N are the normals: N^T J N = G.
    Mat4 N;
    N.row(0) = std::sqrt(-lam[0]) * eig.eigenvectors().col(0).transpose();
    for (int r = 1; r < 4; ++r) N.row(r) = std::sqrt(lam[r]) * eig.eigenvectors().col(r).transpose();
    const Mat4 Ginv = G.inverse();

    // Vertex i is dual to face i: <v_i, n_j> = -delta_ij.
    Mat4 V = -N * Ginv;
    std::array<Vec4, 4> lift;
    for (int i = 0; i < 4; ++i) {
        lift[i] = V.col(i);
        if (!ideal[i]) {
            if (!(Ginv(i, i) > 0)) throw Error(ErrorCode::SolveDiverged, "vertex dual is not space-like");
            lift[i] /= std::sqrt(Ginv(i, i));
        }
    }

    // A point of H^3 inside the simplex: sum of one point per edge.
    std::array<Vec4, 6> mids;
    int future = 0;
    for (int k = 0; k < 6; ++k) {
        const auto [a, b] = kEdgeVertices[k];
        require_edge_crossing(lift[a], ideal[a], lift[b], ideal[b], k);
        mids[k] = edge_point(lift[a], ideal[a], lift[b], ideal[b]);
        if (!(mnorm2(mids[k]) < 0)) throw Error(ErrorCode::SolveDiverged, "edge point is not time-like");
        future += mids[k][0] > 0 ? 1 : -1;
    }
    if (std::abs(future) != 6) throw Error(ErrorCode::SolveDiverged, "inconsistent time orientation");
    if (future < 0) {
        N = time_reversal() * N;
        for (auto& v : lift) v = time_reversal() * v;
        for (auto& m : mids) m = time_reversal() * m;
    }
    Vec4 X = Vec4::Zero();
    for (const auto& m : mids) X += m / std::sqrt(-mnorm2(m));

    // Canonical frame.
    Mat4 frame = Isometry::centering(X).m;
    auto klein = [&](int i) {
        const Vec4 v = frame * lift[i];
        return Vec3(v.tail<3>() / v[0]);
    };
    {
        const Vec3 d1 = klein(0).normalized();
        const Eigen::Quaterniond q = Eigen::Quaterniond::FromTwoVectors(d1, Vec3::UnitZ());
        Mat4 R = Mat4::Identity();
        R.block<3, 3>(1, 1) = q.toRotationMatrix();
        frame = R * frame;
    }
    for (int j : {1, 2, 3}) {
        const Vec3 p = klein(j);
        const double rho = std::hypot(p[0], p[1]);
        if (rho < 1e-9 * std::max(1.0, p.norm())) continue;
        frame = Isometry::rotation(Vec3::UnitZ(), -std::atan2(p[1], p[0])).m * frame;
        break;
    }
    {
        const Vec3 p1 = klein(0), p2 = klein(1), p3 = klein(2), p4 = klein(3);
        if ((p2 - p1).dot((p3 - p1).cross(p4 - p1)) < 0) {
            Mat4 flip = Mat4::Identity();
            flip(2, 2) = -1;
            frame = flip * frame;
        }
    }

    HyperidealSimplex s;
    s.theta = theta;
    s.ideal = ideal;
    for (int i = 0; i < 4; ++i) {
        s.normals[i] = normalize_spacelike(frame * N.col(i));
        Vec4 v = frame * lift[i];
        if (ideal[i]) {
            v /= v[0];
            v.tail<3>().normalize();
        }
        s.lifts[i] = v;
        s.vertices[i] = klein_of(v, ideal[i]);
    }
    return s;
}

HyperidealSimplex simplex_from_interior_angles(const Vec6& alpha, const IdealTags& ideal) {
    return simplex_from_angles(Vec6::Constant(kPi) - alpha, ideal);
}

TruncatedSimplex truncate(const HyperidealSimplex& s) {
    TruncatedSimplex t;
    // index of cut point (j, k) or of ideal vertex j
    std::array<std::array<int, 4>, 4> idx{};
    for (int j = 0; j < 4; ++j) {
        if (s.ideal[j]) {
            idx[j].fill(static_cast<int>(t.points.size()));
            t.points.push_back(s.vertices[j].p.normalized());
            t.point_ideal.push_back(true);
            continue;
        }
        const Vec4& vj = s.lifts[j];
        for (int k = 0; k < 4; ++k) {
            if (k == j) continue;
            const Vec4& wk = s.lifts[k];
            const Vec4 x = wk - mdot(wk, vj) * vj;
            if (!(mnorm2(x) < 0 && x[0] > 0)) throw Error(ErrorCode::DegenerateSimplex, "truncation point not in H^3");
            idx[j][k] = static_cast<int>(t.points.size());
            t.points.push_back(x.tail<3>() / x[0]);
            t.point_ideal.push_back(false);
        }
    }
    for (int i = 0; i < 4; ++i) {
        std::array<int, 3> c{};
        int n = 0;
        for (int v = 0; v < 4; ++v)
            if (v != i) c[n++] = v;
        std::vector<int> poly;
        for (int m = 0; m < 3; ++m) {
            const int j = c[m], prev = c[(m + 2) % 3], next = c[(m + 1) % 3];
            if (s.ideal[j]) {
                poly.push_back(idx[j][0]);
            } else {
                poly.push_back(idx[j][prev]);
                poly.push_back(idx[j][next]);
            }
        }
        t.planes.push_back(Plane{s.normals[i]});
        t.faces.push_back(poly);
        t.real_face.push_back(true);
    }
    for (int j = 0; j < 4; ++j) {
        if (s.ideal[j]) continue;
        std::vector<int> tri;
        for (int k = 0; k < 4; ++k)
            if (k != j) tri.push_back(idx[j][k]);
        t.planes.push_back(Plane{s.lifts[j]});
        t.faces.push_back(tri);
        t.real_face.push_back(false);
    }
    return t;
}

Vec6 EdgeLengthClass::reduced() const {
    if (n_ideal == 0) return raw;
    Eigen::MatrixXd Phi = Eigen::MatrixXd::Zero(6, n_ideal);
    int c = 0;
    for (int v = 0; v < 4; ++v) {
        if (!ideal[v]) continue;
        for (int k : vertex_edges(v)) Phi(k, c) = 1.0;
        ++c;
    }
    const Eigen::VectorXd coef = Phi.colPivHouseholderQr().solve(raw);
    return raw - Phi * coef;
}

bool EdgeLengthClass::equivalent(const EdgeLengthClass& other, double tol) const {
    if (ideal != other.ideal) return false;
    return (reduced() - other.reduced()).cwiseAbs().maxCoeff() <= tol;
}

EdgeLengthClass edge_lengths(const HyperidealSimplex& s, const Horoscales& h) {
    EdgeLengthClass out;
    out.ideal = s.ideal;
    out.n_ideal = s.ideal_count();
    std::array<Vec4, 4> w;
    for (int i = 0; i < 4; ++i) w[i] = s.ideal[i] ? Vec4(h[i] * s.lifts[i]) : s.lifts[i];
    auto cls = [&](int i) { return s.ideal[i] ? PointClass::Ideal : PointClass::Hyperideal; };
    for (int k = 0; k < 6; ++k) {
        const auto [a, b] = kEdgeVertices[k];
        out.raw[k] = lifted_distance(w[a], cls(a), w[b], cls(b));
    }
    return out;
}

Eigen::MatrixXd stratum_tangent_basis(const IdealTags& ideal) {
    const int n = static_cast<int>(std::count(ideal.begin(), ideal.end(), true));
    if (n == 0) return Eigen::MatrixXd::Identity(6, 6);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, 6);
    int r = 0;
    for (int v = 0; v < 4; ++v) {
        if (!ideal[v]) continue;
        for (int k : vertex_edges(v)) A(r, k) = 1.0;
        ++r;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const int rank = static_cast<int>(svd.rank());
    return svd.matrixV().rightCols(6 - rank);
}

VolumeResult volume_detailed(const HyperidealSimplex& s, const VolumeOptions& opt) {
    const TruncatedSimplex t = truncate(s);
    const auto cells = decompose_polytope(t.points, t.point_ideal, t.faces);
    const QuadratureResult q = opt.parallel ? integrate_cells_parallel(cells, opt.tolerance, opt.max_depth)
                                            : integrate_cells_serial(cells, opt.tolerance, opt.max_depth);
    if (!q.converged) {
        std::ostringstream msg;
        msg << "achieved error bound " << q.error;
        throw Error(ErrorCode::QuadratureNotConverged, msg.str());
    }
    return VolumeResult{q.value, q.error, static_cast<int>(cells.size())};
}

double volume(const HyperidealSimplex& s, const VolumeOptions& opt) { return volume_detailed(s, opt).value; }

double volume_of_points(const std::array<ProjPoint, 4>& pts, const VolumeOptions& opt) {
    const Vec3 e1 = pts[1].p - pts[0].p, e2 = pts[2].p - pts[0].p, e3 = pts[3].p - pts[0].p;
    if (std::abs(e1.dot(e2.cross(e3))) <= 1e-9 * e1.norm() * e2.norm() * e3.norm()) return 0.0;
    return volume(HyperidealSimplex::from_vertices(pts), opt);
}

Vec6 schlafli_gradient(const HyperidealSimplex& s, const Horoscales& h) { return -0.5 * edge_lengths(s, h).raw; }

Eigen::MatrixXd volume_hessian(const HyperidealSimplex& s, double step) {
    const Eigen::MatrixXd B = stratum_tangent_basis(s.ideal);
    const Vec6 alpha = s.interior_angles();
    Eigen::MatrixXd dL(6, B.cols());
    for (int c = 0; c < B.cols(); ++c) {
        const Vec6 d = B.col(c);
        const Vec6 lp = edge_lengths(simplex_from_interior_angles(alpha + step * d, s.ideal)).raw;
        const Vec6 lm = edge_lengths(simplex_from_interior_angles(alpha - step * d, s.ideal)).raw;
        dL.col(c) = (lp - lm) / (2 * step);
    }
    return -0.5 * B.transpose() * dL;
}

Mat6 length_jacobian(const Vec6& alpha, double step) {
    const IdealTags none{};
    Mat6 J;
    for (int c = 0; c < 6; ++c) {
        Vec6 ap = alpha, am = alpha;
        ap[c] += step;
        am[c] -= step;
        J.col(c) = (edge_lengths(simplex_from_interior_angles(ap, none)).raw -
                    edge_lengths(simplex_from_interior_angles(am, none)).raw) /
                   (2 * step);
    }
    return J;
}

namespace {

/// Edge length of the regular strictly hyperideal simplex with interior angle a.
double regular_length(double a) {
    return edge_lengths(simplex_from_interior_angles(Vec6::Constant(a), IdealTags{})).raw[0];
}

bool strictly_admissible(const Vec6& alpha) {
    for (int k = 0; k < 6; ++k)
        if (!(alpha[k] > 0 && alpha[k] < kPi)) return false;
    for (int v = 0; v < 4; ++v) {
        double sum = 0;
        for (int k : vertex_edges(v)) sum += alpha[k];
        if (!(sum < kPi - 1e-12)) return false;
    }
    return true;
}

}  // namespace

Vec6 interior_angles_from_lengths(const Vec6& lengths, double tol, int max_iter) {
    if (!(lengths.minCoeff() > 0)) throw Error(ErrorCode::OutOfDomain, "edge lengths must be positive");
    // Start from the regular simplex of the mean length; its length decreases
    // from +inf to 0 as the angle goes from pi/3 to 0.
    const double target = lengths.mean();
    double lo = 1e-6, hi = kPi / 3 - 1e-9;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (regular_length(mid) > target ? hi : lo) = mid;
    }
    Vec6 alpha = Vec6::Constant(0.5 * (lo + hi));

    auto residual = [&](const Vec6& a) {
        return Vec6(edge_lengths(simplex_from_interior_angles(a, IdealTags{})).raw - lengths);
    };
    Vec6 r = residual(alpha);
    for (int it = 0; it < max_iter; ++it) {
        if (r.cwiseAbs().maxCoeff() < tol) return alpha;
        const Mat6 J = length_jacobian(alpha);
        const Vec6 step = J.fullPivLu().solve(-r);
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
            const Vec6 trial = alpha + t * step;
            if (!strictly_admissible(trial)) continue;
            Vec6 rt;
            try {
                rt = residual(trial);
            } catch (const Error&) {
                continue;
            }
            if (rt.norm() < r.norm() || t < 1e-6) {
                alpha = trial;
                r = rt;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    if (r.cwiseAbs().maxCoeff() < tol) return alpha;
    std::ostringstream msg;
    msg << "length inversion stopped with residual " << r.cwiseAbs().maxCoeff();
    throw Error(ErrorCode::SolveDiverged, msg.str());
}

namespace {

double checked_acosh(double x) {
    if (!(x >= 1.0)) throw Error(ErrorCode::OutOfDomain, "arccosh argument below 1");
    return std::acosh(x);
}
double checked_acos(double x) {
    if (!(x >= -1.0 && x <= 1.0)) throw Error(ErrorCode::OutOfDomain, "arccos argument outside [-1, 1]");
    return std::acos(x);
}
/// d/dl arccos(g) given g and dg/dl.
double dacos(double g, double dg) { return -dg / std::sqrt(1 - g * g); }
/// d/dl arccosh(f) given f and df/dl.
double dacosh(double f, double df) { return df / std::sqrt(f * f - 1); }

}  // namespace

RegularSimplexReport regular_simplex_appendix_check(double l0) {
    if (!(l0 > 0)) throw Error(ErrorCode::OutOfDomain, "l0 must be positive");
    RegularSimplexReport rep;
    rep.l0 = l0;
    const double C0 = std::cosh(l0), S0 = std::sinh(l0);
    const double l = l0, Cl = std::cosh(l), Sl = std::sinh(l);

    // Face triangle lengths as functions of the varying edge length l.
    const double f_al = (C0 * C0 + Cl) / (S0 * S0), df_al = Sl / (S0 * S0);
    const double f_bl = C0 * (Cl + 1) / (Sl * S0), df_bl = -C0 * (1 + Cl) / (S0 * Sl * Sl);
    const double al = checked_acosh(f_al), dal = dacosh(f_al, df_al);
    const double bl = checked_acosh(f_bl), dbl = dacosh(f_bl, df_bl);
    const double a0 = checked_acosh(C0 * (C0 + 1) / (S0 * S0));
    const double A = std::cosh(a0), Sa0 = std::sinh(a0);

    // Dihedral angles at the edge itself (t1), adjacent edges (t2), the opposite edge (t3).
    const double X = std::cosh(bl), dX = std::sinh(bl) * dbl;
    const double g1 = (X * X - A) / (X * X - 1), dg1 = 2 * X * (A - 1) / ((X * X - 1) * (X * X - 1)) * dX;
    const double g2 = (A - 1) / Sa0 * X / std::sinh(bl), dg2 = -(A - 1) / Sa0 / (std::sinh(bl) * std::sinh(bl)) * dbl;
    const double g3 = (A * A - std::cosh(al)) / (Sa0 * Sa0), dg3 = -std::sinh(al) * dal / (Sa0 * Sa0);
    rep.angle = checked_acos(g1);
    checked_acos(g2);
    checked_acos(g3);
    rep.a = dacos(g1, dg1);
    rep.b = dacos(g2, dg2);
    rep.c = dacos(g3, dg3);

    const double a = rep.a, b = rep.b, c = rep.c;
    rep.matrix << a, b, b, c, b, b,  //
        b, a, b, b, c, b,            //
        b, b, a, b, b, c,            //
        c, b, b, a, b, b,            //
        b, c, b, b, a, b,            //
        b, b, c, b, b, a;
    rep.eigenvalues = Eigen::SelfAdjointEigenSolver<Mat6>(rep.matrix).eigenvalues();
    rep.all_positive = rep.eigenvalues.minCoeff() > 0;

    // Geometric one-parameter family: edge e12 has length l, the others l0.
    const double h = 1e-4;
    Vec6 lp = Vec6::Constant(l0), lm = Vec6::Constant(l0);
    lp[0] += h;
    lm[0] -= h;
    const Vec6 dalpha = (interior_angles_from_lengths(lp) - interior_angles_from_lengths(lm)) / (2 * h);
    rep.a_geom = dalpha[edge_index(0, 1)];
    rep.b_geom = dalpha[edge_index(0, 2)];
    rep.c_geom = dalpha[edge_index(2, 3)];
    const double angle_geom = interior_angles_from_lengths(Vec6::Constant(l0))[0];
    rep.max_discrepancy = std::max({std::abs(rep.a - rep.a_geom), std::abs(rep.b - rep.b_geom),
                                    std::abs(rep.c - rep.c_geom), std::abs(rep.angle - angle_geom)});
    return rep;
}

}  // namespace hyperideal
