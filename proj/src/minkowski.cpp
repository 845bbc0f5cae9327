#include "hyperideal/minkowski.hpp"

#include "hyperideal/errors.hpp"

#include <cmath>
#include <algorithm>
#include <numbers>

namespace hyperideal {

const Mat4& minkowski_form() {
    static const Mat4 J = Eigen::Vector4d(-1, 1, 1, 1).asDiagonal();
    return J;
}

Vec4 normalize_spacelike(const Vec4& v) {
    const double q = mnorm2(v);
    if (!(q > 0)) throw Error(ErrorCode::DegenerateConfiguration, "vector is not space-like");
    return v / std::sqrt(q);
}

Vec4 normalize_timelike(const Vec4& v) {
    const double q = mnorm2(v);
    if (!(q < 0)) throw Error(ErrorCode::DegenerateConfiguration, "vector is not time-like");
    Vec4 r = v / std::sqrt(-q);
    return r[0] < 0 ? Vec4(-r) : r;
}

Vec4 minkowski_orthogonal(const Vec4& a, const Vec4& b, const Vec4& c) {
    // Euclidean generalized cross product, then raise the index.
    Eigen::Matrix<double, 3, 4> rows;
    rows.row(0) = a.transpose();
    rows.row(1) = b.transpose();
    rows.row(2) = c.transpose();
    Vec4 w;
    for (int k = 0; k < 4; ++k) {
        Eigen::Matrix3d minor;
        int col = 0;
        for (int j = 0; j < 4; ++j) {
            if (j == k) continue;
            minor.col(col++) = rows.col(j);
        }
        w[k] = ((k % 2 == 0) ? 1.0 : -1.0) * minor.determinant();
    }
    w[0] = -w[0];
    return w;
}

const char* to_string(PointClass c) {
    switch (c) {
        case PointClass::Finite: return "finite";
        case PointClass::Ideal: return "ideal";
        case PointClass::Hyperideal: return "hyperideal";
    }
    return "unknown";
}

ProjPoint ProjPoint::classify(const Vec3& p, double tol) {
    if (!p.allFinite()) throw Error(ErrorCode::OutOfDomain, "non-finite coordinates");
    const double r = p.norm();
    PointClass cls = PointClass::Finite;
    if (std::abs(r - 1.0) <= tol)
        cls = PointClass::Ideal;
    else if (r > 1.0)
        cls = PointClass::Hyperideal;
    return ProjPoint{p, cls};
}

ProjPoint ProjPoint::from_lift(const Vec4& x, double tol) {
    if (std::abs(x[0]) <= 1e-300 || !x.allFinite())
        throw Error(ErrorCode::OutOfDomain, "vector has no affine Klein image");
    return classify(x.tail<3>() / x[0], tol);
}

Vec4 ProjPoint::lift() const {
    const double r2 = p.squaredNorm();
    Vec4 x;
    switch (cls) {
        case PointClass::Finite:
            if (r2 >= 1.0) throw Error(ErrorCode::PointNotFinite, "finite tag outside the ball");
            x << 1.0, p;
            return x / std::sqrt(1.0 - r2);
        case PointClass::Hyperideal:
            if (r2 <= 1.0) throw Error(ErrorCode::NotHyperideal, "hyperideal tag inside the ball");
            x << 1.0, p;
            return x / std::sqrt(r2 - 1.0);
        case PointClass::Ideal:
            x << 1.0, p / std::sqrt(r2);
            return x;
    }
    return x;
}

Plane Plane::from_normal(const Vec4& n) { return Plane{normalize_spacelike(n)}; }

Isometry Isometry::rotation(const Vec3& axis, double angle) {
    Isometry g;
    g.m.block<3, 3>(1, 1) = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
    return g;
}

Isometry Isometry::boost(const Vec3& dir, double rapidity) {
    const Vec3 d = dir.normalized();
    const double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
    Isometry g;
    g.m(0, 0) = ch;
    g.m.block<1, 3>(0, 1) = sh * d.transpose();
    g.m.block<3, 1>(1, 0) = sh * d;
    g.m.block<3, 3>(1, 1) = Eigen::Matrix3d::Identity() + (ch - 1.0) * d * d.transpose();
    return g;
}

Isometry Isometry::centering(const Vec4& x) {
    const Vec4 t = normalize_timelike(x);
    const Vec3 s = t.tail<3>();
    const double sn = s.norm();
    if (sn < 1e-15) return identity();
    return boost(s / sn, -std::asinh(sn));
}

Isometry Isometry::random(std::mt19937_64& rng, double max_rapidity) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto direction = [&] {
        Vec3 v;
        do v = Vec3(gauss(rng), gauss(rng), gauss(rng));
        while (v.norm() < 1e-6);
        return v.normalized();
    };
    const Vec3 axis = direction();
    const double angle = 2.0 * std::numbers::pi * unif(rng);
    const Vec3 dir = direction();
    const double rap = max_rapidity * unif(rng);
    return boost(dir, rap).compose(rotation(axis, angle));
}

ProjPoint Isometry::apply(const ProjPoint& x, double tol) const {
    Vec4 h;
    h << 1.0, x.p;
    ProjPoint r = ProjPoint::from_lift(m * h, tol);
    // Isometries preserve the class; rounding must not change it.
    r.cls = x.cls;
    return r;
}

Isometry Isometry::inverse() const {
    const Mat4& J = minkowski_form();
    return Isometry{J * m.transpose() * J};
}

double Isometry::form_defect() const {
    const Mat4& J = minkowski_form();
    return (m.transpose() * J * m - J).cwiseAbs().maxCoeff();
}

double cross_ratio(const Vec3& x, const Vec3& y, const Vec3& a, const Vec3& b) {
    const Vec3 d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 < 1e-300) throw Error(ErrorCode::DegenerateConfiguration, "coincident reference points");
    const double scale = std::sqrt(len2);
    auto position = [&](const Vec3& q) {
        const Vec3 r = q - a;
        if (r.cross(d).norm() > 1e-9 * scale * std::max(1.0, r.norm()))
            throw Error(ErrorCode::NonCollinear, "points are not on one line");
        return r.dot(d) / len2;
    };
    const double tx = position(x), ty = position(y), ta = 0.0, tb = 1.0;
    const double den = (ty - ta) * (tb - tx);
    if (std::abs(den) < 1e-300) throw Error(ErrorCode::DegenerateConfiguration, "cross ratio is infinite");
    return (tx - ta) * (tb - ty) / den;
}

double hilbert_distance(const ProjPoint& x, const ProjPoint& y) {
    if (x.cls != PointClass::Finite || y.cls != PointClass::Finite)
        throw Error(ErrorCode::PointNotFinite, "Hilbert distance needs interior points");
    const Vec3 d = y.p - x.p;
    const double dd = d.squaredNorm();
    if (dd < 1e-30) return 0.0;
    // |x + t d|^2 = 1
    const double bq = x.p.dot(d), cq = x.p.squaredNorm() - 1.0;
    const double disc = std::sqrt(bq * bq - dd * cq);
    const double t_lo = (-bq - disc) / dd, t_hi = (-bq + disc) / dd;
    // positions: x at 0, y at 1, far end beyond x at t_lo < 0, beyond y at t_hi > 1
    const double cr = (0.0 - t_lo) * (t_hi - 1.0) / ((1.0 - t_lo) * (t_hi - 0.0));
    return -0.5 * std::log(cr);
}

Plane dual_point_to_plane(const ProjPoint& v) {
    if (v.cls != PointClass::Hyperideal) throw Error(ErrorCode::NotHyperideal, "polar plane needs a hyperideal point");
    return Plane{v.lift()};
}

ProjPoint dual_plane_to_point(const Plane& P) {
    const Vec4 n = normalize_spacelike(P.n);
    if (std::abs(n[0]) < 1e-12)
        throw Error(ErrorCode::DegenerateConfiguration, "plane through the center has its pole at infinity");
    ProjPoint r = ProjPoint::classify(n.tail<3>() / n[0]);
    r.cls = PointClass::Hyperideal;
    return r;
}

EdgeMeasure desitter_edge_measure(const Plane& a, const Plane& b) {
    const Vec4 n1 = normalize_spacelike(a.n), n2 = normalize_spacelike(b.n);
    const double scale = std::max(n1.cwiseAbs().maxCoeff(), n2.cwiseAbs().maxCoeff());
    if ((n1 - n2).cwiseAbs().maxCoeff() <= 1e-12 * scale || (n1 + n2).cwiseAbs().maxCoeff() <= 1e-12 * scale)
        throw Error(ErrorCode::ProportionalNormals, "planes coincide");
    const double c = mdot(n1, n2);
    EdgeMeasure m;
    if (std::abs(std::abs(c) - 1.0) <= kParabolicTol) {
        m.tag = EdgeMeasure::Tag::Parabolic;
        m.value = 0.0;
        m.nested = c > 0;
    } else if (std::abs(c) < 1.0) {
        m.tag = EdgeMeasure::Tag::Angle;
        m.value = std::acos(c);
    } else {
        m.tag = EdgeMeasure::Tag::Distance;
        m.value = std::acosh(std::abs(c));
        m.nested = c > 0;
    }
    return m;
}

double lifted_distance(const Vec4& a, PointClass ca, const Vec4& b, PointClass cb) {
    using PC = PointClass;
    const double c = mdot(a, b);
    if (ca == PC::Hyperideal && cb == PC::Hyperideal) {
        if (c <= -1.0) return std::acosh(-c);
        if (c <= -1.0 + 1e-9) return 0.0;
        throw Error(ErrorCode::SegmentMissesBall, "hyperideal segment does not cross the ball");
    }
    if (ca == PC::Ideal && cb == PC::Ideal) {
        if (!(c < 0)) throw Error(ErrorCode::DegenerateConfiguration, "coincident ideal points");
        return std::log(-c / 2.0);
    }
    if (ca == PC::Finite && cb == PC::Finite) return std::acosh(std::max(1.0, -c));
    if ((ca == PC::Ideal && cb == PC::Hyperideal) || (ca == PC::Hyperideal && cb == PC::Ideal)) {
        if (!(c < 0)) throw Error(ErrorCode::SegmentMissesBall, "ideal point lies beyond the polar plane");
        return std::log(-c);
    }
    if ((ca == PC::Ideal && cb == PC::Finite) || (ca == PC::Finite && cb == PC::Ideal)) return std::log(-c);
    // finite and hyperideal: signed distance to the polar plane
    return std::asinh(-c);
}

double point_pair_distance(const ProjPoint& x, const ProjPoint& y, std::optional<double> horoscale_x,
                           std::optional<double> horoscale_y) {
    auto lift = [](const ProjPoint& q, std::optional<double> s) {
        Vec4 v = q.lift();
        if (q.cls == PointClass::Ideal) {
            if (!s) throw Error(ErrorCode::MissingHorosphere, "ideal endpoint needs a horosphere");
            v *= *s;
        }
        return v;
    };
    return lifted_distance(lift(x, horoscale_x), x.cls, lift(y, horoscale_y), y.cls);
}

Vec2 stereographic(const Vec3& p) {
    const double den = 1.0 - p[2];
    if (std::abs(den) < 1e-12) throw Error(ErrorCode::AtPole, "point is the projection pole");
    return Vec2(p[0] / den, p[1] / den);
}

Vec3 inverse_stereographic(const Vec2& q) {
    const double s = q.squaredNorm();
    return Vec3(2 * q[0], 2 * q[1], s - 1.0) / (s + 1.0);
}

}  // namespace hyperideal

namespace hyperideal {

double horocyclic_position(const Vec4& w, const Vec4& u_from, const Vec4& u_to) {
    const double c = mdot(u_from, u_to);
    if (!(c < 0)) throw Error(ErrorCode::DegenerateConfiguration, "coincident ideal endpoints");
    const Vec4 proj = (mdot(w, u_to) / c) * u_from + (mdot(w, u_from) / c) * u_to;
    const Vec4 x = normalize_timelike(proj);
    return std::log(-mdot(x, u_from));
}

std::array<double, 3> triangle_exterior_angles(const std::array<Vec3, 3>& pts) {
    std::array<Vec4, 3> X;
    for (int k = 0; k < 3; ++k) {
        const ProjPoint q = ProjPoint::classify(pts[k]);
        if (q.cls != PointClass::Finite) throw Error(ErrorCode::PointNotFinite, "triangle vertex not finite");
        X[k] = q.lift();
    }
    auto side = [&](int i, int j) { return std::acosh(std::max(1.0, -mdot(X[i], X[j]))); };
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) {
        const int i = (k + 1) % 3, j = (k + 2) % 3;
        const double b = side(k, i), c = side(k, j), a = side(i, j);
        const double cosA = (std::cosh(b) * std::cosh(c) - std::cosh(a)) / (std::sinh(b) * std::sinh(c));
        out[k] = std::numbers::pi - std::acos(std::clamp(cosA, -1.0, 1.0));
    }
    return out;
}

std::array<Vec4, 3> triangle_side_normals(const std::array<Vec3, 3>& pts) {
    std::array<Vec4, 3> X;
    for (int k = 0; k < 3; ++k) X[k] = ProjPoint::classify(pts[k]).lift();
    Vec3 up = (pts[1] - pts[0]).cross(pts[2] - pts[0]);
    if (up.norm() < 1e-14) throw Error(ErrorCode::DegenerateConfiguration, "collinear triangle");
    // Normal of the triangle's own plane.
    const Vec4 m = minkowski_orthogonal(X[0], X[1], X[2]);
    std::array<Vec4, 3> n;
    for (int k = 0; k < 3; ++k) {
        const int i = (k + 1) % 3, j = (k + 2) % 3;
        Vec4 v = normalize_spacelike(minkowski_orthogonal(X[i], X[j], m));
        if (mdot(v, X[k]) > 0) v = -v;
        n[k] = v;
    }
    return n;
}

std::array<double, 3> dual_triangle_edge_lengths(const std::array<Vec3, 3>& pts) {
    const auto n = triangle_side_normals(pts);
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) {
        // the two sides through vertex k are opposite vertices k+1 and k+2
        const double c = mdot(n[(k + 1) % 3], n[(k + 2) % 3]);
        out[k] = std::acos(std::clamp(c, -1.0, 1.0));
    }
    return out;
}

}  // namespace hyperideal
