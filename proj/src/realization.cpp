#include "hyperideal/realization.hpp"

#include "hyperideal/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <sstream>

namespace hyperideal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Non-ideal corners: (tetrahedron, local vertex).
std::vector<std::pair<int, int>> free_corners(const ConstraintSet& cs) {
    std::vector<std::pair<int, int>> out;
    for (int t = 0; t < cs.num_tetrahedra(); ++t)
        for (int v = 0; v < 4; ++v)
            if (!cs.tet_ideal[t][v]) out.push_back({t, v});
    return out;
}

double corner_sum(const Eigen::VectorXd& x, int t, int v) {
    double s = 0;
    for (int k : vertex_edges(v)) s += x[6 * t + k];
    return s;
}

Vec6 slice(const Eigen::VectorXd& x, int t) { return x.segment<6>(6 * t); }

HyperidealSimplex simplex_of(const ConstraintSet& cs, const Eigen::VectorXd& x, int t) {
    return simplex_from_interior_angles(slice(x, t), cs.tet_ideal[t]);
}

/// Moves x onto {A x = b} along the row space.
Eigen::VectorXd project_affine(const ConstraintSet& cs, const Eigen::VectorXd& x) {
    const Eigen::VectorXd r = cs.A * x - cs.b;
    return x - cs.A.completeOrthogonalDecomposition().solve(r);
}

int local_index(const ConeTetrahedron& t, int v) {
    for (int i = 0; i < 4; ++i)
        if (t.v[i] == v) return i;
    return -1;
}

/// Pairs of tetrahedra glued along a triangle through the apex, with the triangle's vertices.
struct GluedFace {
    int t1, t2;
    std::array<int, 3> verts;  // apex, a, b
};

std::vector<GluedFace> glued_faces(const ConstraintSet& cs) {
    const Cellulation& B = cs.cone.boundary;
    std::vector<int> tet_of_face(B.num_faces(), -1);
    for (int t = 0; t < cs.num_tetrahedra(); ++t) tet_of_face[cs.cone.tetrahedra[t].base_face] = t;
    std::vector<GluedFace> out;
    for (int e = 0; e < B.num_edges(); ++e) {
        const auto [f1, f2] = B.edge_faces(e);
        if (tet_of_face[f1] < 0 || tet_of_face[f2] < 0) continue;
        out.push_back({tet_of_face[f1], tet_of_face[f2], {cs.cone.apex, B.edge(e)[0], B.edge(e)[1]}});
    }
    return out;
}

int slot_of(const ConeTetrahedron& t, int u, int v) { return edge_index(local_index(t, u), local_index(t, v)); }

/// Orthonormal-ish frame of a tetrahedron face: the three in-face side normals
/// (opposite face vertices in the given order) and the face normal.
Mat4 face_frame(const HyperidealSimplex& s, const std::array<int, 3>& local, bool flip_normal) {
    int opposite = 0 + 1 + 2 + 3 - local[0] - local[1] - local[2];
    const Vec4 n = s.normals[opposite];
    Mat4 M;
    for (int c = 0; c < 3; ++c) {
        const int i = local[(c + 1) % 3], j = local[(c + 2) % 3], k = local[c];
        Vec4 m = normalize_spacelike(minkowski_orthogonal(s.lifts[i], s.lifts[j], n));
        // the tetrahedron face through edge ij other than this one is the face opposite k
        if (mdot(m, s.normals[k]) < 0) m = -m;
        M.col(c) = m;
    }
    M.col(3) = flip_normal ? Vec4(-n) : n;
    return M;
}

/// Euclidean direction of a lift, up to sign.
double projective_gap(const Vec4& a, const Vec4& b) {
    const Vec4 ua = a.normalized(), ub = b.normalized();
    return std::min((ua - ub).norm(), (ua + ub).norm());
}

/// The two points where the line through a and b meets the unit sphere.
std::array<Vec3, 2> chord_ends(const Vec3& a, const Vec3& b) {
    const Vec3 d = b - a;
    const double A = d.squaredNorm(), Bc = a.dot(d), C = a.squaredNorm() - 1.0;
    const double root = std::sqrt(std::max(0.0, Bc * Bc - A * C));
    return {Vec3(a + (-Bc - root) / A * d), Vec3(a + (-Bc + root) / A * d)};
}

}  // namespace

Vec4 conformal_barycenter(const std::vector<Vec3>& points) {
    // Newton on the sum of Busemann functions, re-centering after every step
    Mat4 frame = Mat4::Identity();
    const double n = static_cast<double>(points.size());
    for (int it = 0; it < 100; ++it) {
        Vec3 g = Vec3::Zero();
        Eigen::Matrix3d H = n * Eigen::Matrix3d::Identity();
        for (const Vec3& p : points) {
            Vec4 xi;
            xi << 1.0, p;
            xi = frame * xi;
            const Vec3 s = xi.tail<3>() / xi[0];
            g += s;
            H -= s * s.transpose();
        }
        if (g.norm() < 1e-14 * n) break;
        const Vec3 step = H.ldlt().solve(g);
        // move the center to Klein point `step` (damped to stay inside the ball)
        const double len = step.norm();
        const Vec3 x = len < 0.5 ? step : Vec3(0.5 * step / len);
        Vec4 X;
        X << 1.0, x;
        frame = Isometry::centering(normalize_timelike(X)).m * frame;
    }
    return normalize_timelike(frame.inverse() * Vec4(1, 0, 0, 0));
}

Vec4 realization_center(const Realization& r) {
    std::vector<Vec3> ends;
    for (int e = 0; e < r.sigma.num_edges(); ++e) {
        const auto [u, v] = r.sigma.edge(e);
        for (const Vec3& p : chord_ends(r.vertices[u].p, r.vertices[v].p)) ends.push_back(p.normalized());
    }
    return conformal_barycenter(ends);
}

double ConstraintSet::margin(const Eigen::VectorXd& x) const {
    double m = kInf;
    for (int i = 0; i < x.size(); ++i) m = std::min({m, x[i], kPi - x[i]});
    for (const auto& [t, v] : free_corners(*this)) m = std::min(m, kPi - corner_sum(x, t, v));
    return m;
}

double ConstraintSet::max_step(const Eigen::VectorXd& x, const Eigen::VectorXd& d, double floor) const {
    double t = kInf;
    // components at rounding level (e.g. a corner sum fixed by the equalities) never bind
    const double noise = 1e-13 * std::max(1.0, d.cwiseAbs().maxCoeff());
    auto limit = [&](double g0, double g1) {
        if (g1 < -noise) t = std::min(t, std::max(0.0, g0 - floor) / -g1);
    };
    for (int i = 0; i < x.size(); ++i) {
        limit(x[i], d[i]);
        limit(kPi - x[i], -d[i]);
    }
    for (const auto& [tet, v] : free_corners(*this)) limit(kPi - corner_sum(x, tet, v), -corner_sum(d, tet, v));
    return t;
}

ConstraintSet assemble_constraints(const Cellulation& sigma, const std::vector<bool>& ideal,
                                   const std::vector<double>& w) {
    if (static_cast<int>(w.size()) != sigma.num_edges() || static_cast<int>(ideal.size()) != sigma.num_vertices())
        throw Error(ErrorCode::OutOfDomain, "angle map does not match the cellulation");
    ConstraintSet cs;
    cs.cone = cone_triangulation(sigma);
    cs.ideal = ideal;
    const Cellulation& B = cs.cone.boundary;
    const int nb = B.num_edges();
    const int ne = nb + static_cast<int>(cs.cone.interior_edges.size());
    std::map<int, int> interior_of;
    for (std::size_t i = 0; i < cs.cone.interior_edges.size(); ++i) interior_of[cs.cone.interior_edges[i][1]] = nb + i;

    cs.edge_target.resize(ne);
    for (int e = 0; e < nb; ++e) {
        const int orig = cs.cone.original_edge[e];
        cs.edge_target[e] = kPi - (orig >= 0 ? w[orig] : 0.0);
    }
    for (int e = nb; e < ne; ++e) cs.edge_target[e] = 2 * kPi;

    const int T = static_cast<int>(cs.cone.tetrahedra.size());
    std::vector<std::vector<int>> edge_slots(ne);
    for (int t = 0; t < T; ++t) {
        const auto& tet = cs.cone.tetrahedra[t];
        IdealTags tags{};
        for (int i = 0; i < 4; ++i) tags[i] = ideal[tet.v[i]];
        cs.tet_ideal.push_back(tags);
        std::array<int, 6> se{};
        for (int k = 0; k < 6; ++k) {
            const int u = tet.v[kEdgeVertices[k][0]], v = tet.v[kEdgeVertices[k][1]];
            int e = B.edge_between(u, v);
            if (e < 0) e = interior_of.at(u == cs.cone.apex ? v : u);
            se[k] = e;
            edge_slots[e].push_back(6 * t + k);
        }
        cs.slot_edge.push_back(se);
    }

    const int n = 6 * T;
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    for (int e = 0; e < ne; ++e) {
        std::ostringstream label;
        if (e < nb)
            label << "boundary edge " << B.edge_key(e);
        else
            label << "interior edge " << B.label(cs.cone.apex) << "-" << B.label(cs.cone.interior_edges[e - nb][1]);
        if (edge_slots[e].empty()) throw Error(ErrorCode::Infeasible, label.str() + " lies in no tetrahedron");
        Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
        for (int s : edge_slots[e]) r[s] = 1.0;
        rows.push_back(r);
        rhs.push_back(cs.edge_target[e]);
        cs.row_labels.push_back(label.str());
    }
    for (int t = 0; t < T; ++t)
        for (int v = 0; v < 4; ++v) {
            if (!cs.tet_ideal[t][v]) continue;
            Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
            for (int k : vertex_edges(v)) r[6 * t + k] = 1.0;
            rows.push_back(r);
            rhs.push_back(kPi);
            cs.row_labels.push_back("ideal vertex " + std::to_string(B.label(cs.cone.tetrahedra[t].v[v])) +
                                    " of tetrahedron " + std::to_string(t));
        }
    cs.A.resize(static_cast<int>(rows.size()), n);
    cs.b.resize(static_cast<int>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        cs.A.row(i) = rows[i].transpose();
        cs.b[i] = rhs[i];
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cs.A, Eigen::ComputeFullV);
    svd.setThreshold(1e-10);
    cs.rank = static_cast<int>(svd.rank());
    cs.dependent_rows = static_cast<int>(cs.A.rows()) - cs.rank;
    cs.null_basis = svd.matrixV().rightCols(n - cs.rank);

    // maximize the common margin s of every inequality
    const auto corners = free_corners(cs);
    LinearProgram lp;
    lp.eq_A = Eigen::MatrixXd::Zero(cs.A.rows(), n + 1);
    lp.eq_A.leftCols(n) = cs.A;
    lp.eq_b = cs.b;
    const int nle = 2 * n + static_cast<int>(corners.size()) + 1;
    lp.le_A = Eigen::MatrixXd::Zero(nle, n + 1);
    lp.le_b = Eigen::VectorXd::Zero(nle);
    int r = 0;
    for (int i = 0; i < n; ++i) {
        lp.le_A(r, i) = -1.0;
        lp.le_A(r, n) = 1.0;
        lp.le_b[r++] = 0.0;
        lp.le_A(r, i) = 1.0;
        lp.le_A(r, n) = 1.0;
        lp.le_b[r++] = kPi;
    }
    for (const auto& [t, v] : corners) {
        for (int k : vertex_edges(v)) lp.le_A(r, 6 * t + k) = 1.0;
        lp.le_A(r, n) = 1.0;
        lp.le_b[r++] = kPi;
    }
    lp.le_A(r, n) = 1.0;
    lp.le_b[r] = 1.0;
    lp.c = Eigen::VectorXd::Zero(n + 1);
    lp.c[n] = 1.0;
    const LpResult res = solve_lp(lp);
    if (res.status == LpStatus::Infeasible) {
        int worst = 0;
        res.certificate.head(cs.A.rows()).cwiseAbs().maxCoeff(&worst);
        std::ostringstream msg;
        msg << "angle constraints are inconsistent (residual " << res.infeasibility << ", heaviest row: "
            << cs.row_labels[worst] << ")";
        throw Error(ErrorCode::Infeasible, msg.str());
    }
    cs.interior_point = project_affine(cs, res.x.head(n));
    cs.interior_margin = cs.margin(cs.interior_point);
    if (!(cs.interior_margin > 1e-9)) {
        std::ostringstream msg;
        msg << "no strictly feasible angle structure (best margin " << cs.interior_margin << ")";
        throw Error(ErrorCode::Infeasible, msg.str());
    }
    return cs;
}

ShearedStructure ShearedStructure::from_vector(const Eigen::VectorXd& x) {
    ShearedStructure s;
    for (int t = 0; t < x.size() / 6; ++t) s.interior.push_back(slice(x, t));
    return s;
}

Eigen::VectorXd ShearedStructure::to_vector() const {
    Eigen::VectorXd x(6 * interior.size());
    for (std::size_t t = 0; t < interior.size(); ++t) x.segment<6>(6 * t) = interior[t];
    return x;
}

Eigen::VectorXd total_gradient(const ConstraintSet& cs, const Eigen::VectorXd& x) {
    Eigen::VectorXd g(x.size());
    for (int t = 0; t < cs.num_tetrahedra(); ++t) g.segment<6>(6 * t) = schlafli_gradient(simplex_of(cs, x, t));
    return g;
}

VolumeAndGradient total_volume_and_gradient(const ConstraintSet& cs, const Eigen::VectorXd& x,
                                            const VolumeOptions& opt) {
    VolumeAndGradient out;
    out.gradient.resize(x.size());
    for (int t = 0; t < cs.num_tetrahedra(); ++t) {
        const HyperidealSimplex s = simplex_of(cs, x, t);
        out.gradient.segment<6>(6 * t) = schlafli_gradient(s);
        out.value += volume(s, opt);
    }
    return out;
}

namespace {

Eigen::MatrixXd reduced_hessian(const ConstraintSet& cs, const Eigen::VectorXd& x, double step) {
    const Eigen::MatrixXd& Z = cs.null_basis;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(Z.cols(), Z.cols());
    const double room = cs.margin(x);
    for (int t = 0; t < cs.num_tetrahedra(); ++t) {
        const HyperidealSimplex s = simplex_of(cs, x, t);
        const Eigen::MatrixXd Bt = stratum_tangent_basis(cs.tet_ideal[t]);
        const Eigen::MatrixXd Hs = volume_hessian(s, std::min(step, 0.1 * room));
        const Eigen::MatrixXd Zt = Z.middleRows(6 * t, 6);
        const Eigen::MatrixXd P = Bt.transpose() * Zt;
        H += P.transpose() * Hs * P;
    }
    return H;
}

int most_pressed_tetrahedron(const ConstraintSet& cs, const Eigen::VectorXd& x) {
    int worst = 0;
    double best = kInf;
    for (int t = 0; t < cs.num_tetrahedra(); ++t) {
        double m = kInf;
        for (int k = 0; k < 6; ++k) m = std::min({m, x[6 * t + k], kPi - x[6 * t + k]});
        for (int v = 0; v < 4; ++v)
            if (!cs.tet_ideal[t][v]) m = std::min(m, kPi - corner_sum(x, t, v));
        if (m < best) {
            best = m;
            worst = t;
        }
    }
    return worst;
}

}  // namespace

namespace {

/// Inequality margins as affine functions of the angles: rows of G and h with
/// margin = G x + h (angles above 0 and below pi, non-ideal corner sums below pi).
struct Margins {
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
};

Margins margin_functions(const ConstraintSet& cs) {
    const int n = cs.num_variables();
    const auto corners = free_corners(cs);
    Margins m{Eigen::MatrixXd::Zero(2 * n + corners.size(), n), Eigen::VectorXd::Zero(2 * n + corners.size())};
    for (int i = 0; i < n; ++i) {
        m.G(2 * i, i) = 1;
        m.G(2 * i + 1, i) = -1;
        m.h[2 * i + 1] = kPi;
    }
    for (std::size_t c = 0; c < corners.size(); ++c) {
        const auto [t, v] = corners[c];
        for (int k : vertex_edges(v)) m.G(2 * n + c, 6 * t + k) = -1;
        m.h[2 * n + c] = kPi;
    }
    return m;
}

/// Newton ascent of V + barrier * sum(log margins) on the affine set. With a
/// zero barrier, steps stop at the safeguard and repeated stops mean collapse.
void ascend(const ConstraintSet& cs, const SolverOptions& opt, double barrier, const Margins& M, SolveReport& rep) {
    const Eigen::MatrixXd& Z = cs.null_basis;
    auto collapse = [&](const std::string& why) {
        std::ostringstream msg;
        msg << why << "; collapsing tetrahedron " << most_pressed_tetrahedron(cs, rep.x) << " (margin "
            << cs.margin(rep.x) << ")";
        return Error(ErrorCode::BoundaryCollapse, msg.str());
    };
    auto gradient = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        Eigen::VectorXd g = total_gradient(cs, x);
        if (barrier > 0) g += barrier * M.G.transpose() * (M.G * x + M.h).cwiseInverse();
        return g;
    };
    auto slope = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& p) -> std::optional<double> {
        try {
            return gradient(x).dot(p);
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    const double floor = barrier > 0 ? 0.0 : opt.safeguard;
    const int first = rep.iterations;
    int pressed = 0;
    for (int it = 0;; ++it) {
        const Eigen::VectorXd g = gradient(rep.x);
        const Eigen::VectorXd rg = Z.transpose() * g;
        rep.iterations = first + it;
        rep.reduced_gradient = rg.size() ? rg.norm() : 0.0;
        if (rep.reduced_gradient < opt.gradient_tol) return;
        if (rep.iterations >= opt.max_iter) break;

        Eigen::MatrixXd H = reduced_hessian(cs, rep.x, opt.hessian_step);
        if (barrier > 0) {
            const Eigen::VectorXd m = M.G * rep.x + M.h;
            const Eigen::MatrixXd GZ = M.G * Z;
            H -= barrier * GZ.transpose() * m.cwiseInverse().cwiseAbs2().asDiagonal() * GZ;
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(-H);
        Eigen::VectorXd dy = ldlt.solve(rg);
        if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0) || !(rg.dot(dy) > 0)) dy = rg;
        const Eigen::VectorXd p = Z * dy;
        const double d0 = g.dot(p);

        const double tmax = cs.max_step(rep.x, p, floor);
        const bool limited = tmax < 1.0;
        double t = limited ? (barrier > 0 ? 0.95 : 0.9) * tmax : 1.0;
        // exact-enough line search on the directional derivative (concave along p)
        std::optional<double> dt = slope(rep.x + t * p, p);
        if (!dt || *dt < -0.5 * d0) {
            double lo = 0.0, hi = t;
            for (int k = 0; k < 60; ++k) {
                const double mid = 0.5 * (lo + hi);
                const auto dm = slope(rep.x + mid * p, p);
                if (dm && *dm >= 0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if (dm && std::abs(*dm) <= 0.25 * d0) {
                    lo = mid;
                    break;
                }
            }
            t = lo;
        }
        if (!(t > 0) && limited && barrier == 0) throw collapse("the interior safeguard blocks every ascent step");
        if (!(t > 0)) {
            std::ostringstream msg;
            msg << "no ascent step at iteration " << rep.iterations << " (reduced gradient " << rep.reduced_gradient
                << ")";
            throw Error(ErrorCode::SolveDiverged, msg.str());
        }
        pressed = (barrier == 0 && limited && t >= 0.9 * tmax * (1 - 1e-12)) ? pressed + 1 : 0;
        rep.x += t * p;
        if (pressed >= opt.collapse_after)
            throw collapse("iterates pressed against the admissibility boundary for " + std::to_string(pressed) +
                           " steps");
    }
    std::ostringstream msg;
    msg << "reduced gradient " << rep.reduced_gradient << " after " << opt.max_iter << " iterations";
    throw Error(ErrorCode::MaxIterations, msg.str());
}

}  // namespace

SolveReport maximize(const ConstraintSet& cs, const Eigen::VectorXd& x0, const SolverOptions& opt) {
    if (cs.margin(x0) < opt.safeguard) {
        std::ostringstream msg;
        msg << "starting point lies within the interior safeguard; collapsing tetrahedron "
            << most_pressed_tetrahedron(cs, x0) << " (margin " << cs.margin(x0) << ")";
        throw Error(ErrorCode::BoundaryCollapse, msg.str());
    }
    const Margins M = margin_functions(cs);
    SolveReport rep;
    rep.x = x0;
    try {
        ascend(cs, opt, 0.0, M, rep);
        return rep;
    } catch (const Error& e) {
        const ErrorCode c = e.code();
        if (c != ErrorCode::BoundaryCollapse && c != ErrorCode::DegenerateSimplex && c != ErrorCode::SegmentMissesBall)
            throw;
    }
    // plain Newton can jam against a face of the feasible set far from the
    // maximizer; follow the log-barrier path from the same start instead
    const int jammed = rep.iterations;
    rep = SolveReport{x0, jammed, 0.0};
    SolverOptions phase = opt;
    phase.gradient_tol = std::max(opt.gradient_tol, 1e-9);
    for (double mu = 1e-2; mu >= 1e-8; mu *= 0.1) ascend(cs, phase, mu, M, rep);
    ascend(cs, opt, 0.0, M, rep);
    return rep;
}

Residuals exactness_residuals(const ConstraintSet& cs, const Eigen::VectorXd& x) {
    Residuals res;
    std::vector<Vec6> L(cs.num_tetrahedra());
    for (int t = 0; t < cs.num_tetrahedra(); ++t) L[t] = edge_lengths(simplex_of(cs, x, t)).raw;
    const auto& tets = cs.cone.tetrahedra;

    for (const auto& gf : glued_faces(cs)) {
        const auto [apex, a, b] = gf.verts;
        auto face_lengths = [&](int t) {
            return Eigen::Vector3d(L[t][slot_of(tets[t], apex, a)], L[t][slot_of(tets[t], apex, b)],
                                   L[t][slot_of(tets[t], a, b)]);
        };
        const Eigen::Vector3d d = face_lengths(gf.t1) - face_lengths(gf.t2);
        // horosphere directions: each ideal vertex shifts its two sides
        Eigen::MatrixXd S(3, 0);
        const std::array<Eigen::Vector3d, 3> dirs{Eigen::Vector3d(1, 1, 0), Eigen::Vector3d(1, 0, 1),
                                                  Eigen::Vector3d(0, 1, 1)};
        for (int i = 0; i < 3; ++i) {
            if (!cs.ideal[gf.verts[i]]) continue;
            S.conservativeResize(3, S.cols() + 1);
            S.col(S.cols() - 1) = dirs[i];
        }
        Eigen::Vector3d rest = d;
        if (S.cols() > 0) rest = d - S * S.completeOrthogonalDecomposition().solve(d);
        res.length_mismatch = std::max(res.length_mismatch, rest.cwiseAbs().maxCoeff());
    }

    const Cellulation& B = cs.cone.boundary;
    const int apex = cs.cone.apex;
    if (cs.ideal[apex]) {
        std::vector<int> tet_of_face(B.num_faces(), -1);
        for (int t = 0; t < cs.num_tetrahedra(); ++t) tet_of_face[tets[t].base_face] = t;
        for (const auto& ie : cs.cone.interior_edges) {
            const int v = ie[1];
            if (!cs.ideal[v]) continue;
            const auto& he = B.half_edges();
            double shear = 0;
            for (int h : B.outgoing(v)) {
                const int t = tet_of_face[he[h].face];
                const int u_in = he[he[h].next].origin;
                const int u_out = he[he[h].prev].origin;
                auto foot = [&](int u) {
                    return foot_position(L[t][slot_of(tets[t], apex, v)], L[t][slot_of(tets[t], apex, u)],
                                         L[t][slot_of(tets[t], v, u)]);
                };
                shear += foot(u_out) - foot(u_in);
            }
            res.shear = std::max(res.shear, std::abs(shear));
        }
    }
    return res;
}

Vec4 vertex_lift(const ProjPoint& p) {
    if (p.cls == PointClass::Ideal) {
        Vec4 v;
        v << 1.0, p.p;
        return v;
    }
    return p.lift();
}

void measure_realization(Realization& r) {
    const int nv = r.sigma.num_vertices();
    Vec3 centroid = Vec3::Zero();
    for (const auto& v : r.vertices) centroid += v.p;
    centroid /= nv;
    r.face_normals.assign(r.sigma.num_faces(), Vec4::Zero());
    double planarity = 0;
    for (int f = 0; f < r.sigma.num_faces(); ++f) {
        const auto& cyc = r.sigma.face(f);
        const Vec3 p0 = r.vertices[cyc[0]].p;
        Vec3 a = (r.vertices[cyc[1]].p - p0).cross(r.vertices[cyc[2]].p - p0);
        double d = a.dot(p0);
        if (a.dot(centroid) > d) {
            a = -a;
            d = -d;
        }
        for (int v : cyc) planarity = std::max(planarity, std::abs(a.dot(r.vertices[v].p) - d) / a.norm());
        Vec4 n;
        n << d, a;
        r.face_normals[f] = normalize_spacelike(n);
    }
    r.diagnostics.planarity = planarity;
    r.measured_w.assign(r.sigma.num_edges(), 0.0);
    r.diagnostics.angle_error = 0;
    for (int e = 0; e < r.sigma.num_edges(); ++e) {
        const auto [f, g] = r.sigma.edge_faces(e);
        const double c = std::clamp(mdot(r.face_normals[f], r.face_normals[g]), -1.0, 1.0);
        r.measured_w[e] = std::acos(c);
        if (!r.target_w.empty())
            r.diagnostics.angle_error =
                std::max(r.diagnostics.angle_error, std::abs(r.measured_w[e] - r.target_w[e]));
    }
}

Realization develop(const ConstraintSet& cs, const Eigen::VectorXd& x, const Cellulation& sigma,
                    const std::vector<double>& w, double tol) {
    const int T = cs.num_tetrahedra();
    const auto& tets = cs.cone.tetrahedra;
    std::vector<HyperidealSimplex> simp;
    for (int t = 0; t < T; ++t) simp.push_back(simplex_of(cs, x, t));

    std::vector<std::vector<std::pair<int, std::array<int, 3>>>> adj(T);
    for (const auto& gf : glued_faces(cs)) {
        adj[gf.t1].push_back({gf.t2, gf.verts});
        adj[gf.t2].push_back({gf.t1, gf.verts});
    }

    const int nv = sigma.num_vertices();
    std::vector<std::optional<Vec4>> placed(nv);
    std::vector<std::optional<Mat4>> g(T);
    double gluing = 0;
    auto place = [&](int t) {
        for (int i = 0; i < 4; ++i) {
            const Vec4 v = *g[t] * simp[t].lifts[i];
            const int gv = tets[t].v[i];
            if (placed[gv])
                gluing = std::max(gluing, projective_gap(*placed[gv], v));
            else
                placed[gv] = v;
        }
    };
    std::queue<int> q;
    g[0] = Mat4::Identity();
    place(0);
    q.push(0);
    while (!q.empty()) {
        const int t = q.front();
        q.pop();
        for (const auto& [u, verts] : adj[t]) {
            if (g[u]) continue;
            std::array<int, 3> lt{}, lu{};
            for (int i = 0; i < 3; ++i) {
                lt[i] = local_index(tets[t], verts[i]);
                lu[i] = local_index(tets[u], verts[i]);
            }
            const Mat4 target = face_frame(simp[t], lt, true);
            const Mat4 source = face_frame(simp[u], lu, false);
            const Mat4 local = target * source.inverse();
            gluing = std::max(gluing, Isometry{local}.form_defect());
            g[u] = *g[t] * local;
            place(u);
            q.push(u);
        }
    }
    // a single-tetrahedron cone has no glued faces; nothing else can be unreached
    for (int v = 0; v < nv; ++v)
        if (!placed[v]) throw Error(ErrorCode::GluingMismatch, "vertex " + std::to_string(sigma.label(v)) + " not reached");
    if (gluing > tol) {
        std::ostringstream msg;
        msg << "re-visited vertices disagree by " << gluing;
        throw Error(ErrorCode::GluingMismatch, msg.str());
    }

    Realization r;
    r.sigma = sigma;
    r.ideal = cs.ideal;
    r.target_w = w;
    r.angles = x;
    r.diagnostics.gluing = gluing;
    auto to_points = [&](const std::vector<Vec4>& lifts) {
        r.vertices.clear();
        for (int v = 0; v < nv; ++v) {
            const Vec4& l = lifts[v];
            r.vertices.push_back({l.tail<3>() / l[0], cs.ideal[v] ? PointClass::Ideal : PointClass::Hyperideal});
        }
    };
    std::vector<Vec4> lifts;
    for (const auto& p : placed) lifts.push_back(*p);
    to_points(lifts);

    // frame normalization: conformal barycenter at the origin, vertex 0 on +z,
    // next available vertex in the half-plane {y = 0, x > 0}, faces counter-clockwise from outside
    Mat4 frame = Isometry::centering(realization_center(r)).m;
    auto klein = [&](int v) {
        const Vec4 l = frame * lifts[v];
        return Vec3(l.tail<3>() / l[0]);
    };
    {
        const Eigen::Quaterniond rot = Eigen::Quaterniond::FromTwoVectors(klein(0).normalized(), Vec3::UnitZ());
        Mat4 R = Mat4::Identity();
        R.block<3, 3>(1, 1) = rot.toRotationMatrix();
        frame = R * frame;
    }
    for (int v = 1; v < nv; ++v) {
        const Vec3 p = klein(v);
        if (std::hypot(p[0], p[1]) < 1e-9 * std::max(1.0, p.norm())) continue;
        frame = Isometry::rotation(Vec3::UnitZ(), -std::atan2(p[1], p[0])).m * frame;
        break;
    }
    {
        const auto& f0 = sigma.face(0);
        const Vec3 p0 = klein(f0[0]), p1 = klein(f0[1]), p2 = klein(f0[2]);
        if ((p1 - p0).cross(p2 - p0).dot(p0) < 0) {
            Mat4 flip = Mat4::Identity();
            flip(2, 2) = -1;
            frame = flip * frame;
        }
    }
    for (auto& l : lifts) l = frame * l;
    to_points(lifts);
    measure_realization(r);
    return r;
}

Realization realize(const Cellulation& sigma, const std::vector<bool>& ideal, const std::vector<double>& w,
                    const RealizeOptions& opt, const std::optional<Eigen::VectorXd>& warm_start) {
    const Verdict verdict = check_admissible(sigma, AngleAssignation{w, ideal});
    if (!verdict.accepted) throw InadmissibleInput(verdict);
    const ConstraintSet cs = assemble_constraints(sigma, ideal, w);

    Eigen::VectorXd x0 = cs.interior_point;
    if (warm_start && warm_start->size() == x0.size()) {
        const Eigen::VectorXd xw = project_affine(cs, *warm_start);
        const double mw = cs.margin(xw), mi = cs.interior_margin;
        const double wanted = 0.1 * mi;
        if (mw >= wanted) {
            x0 = xw;
        } else {
            const double lambda = std::clamp((wanted - mw) / (mi - mw), 0.0, 1.0);
            x0 = (1 - lambda) * xw + lambda * cs.interior_point;
        }
    }
    const SolveReport sol = maximize(cs, x0, opt.solver);
    const Residuals res = exactness_residuals(cs, sol.x);
    Realization r = develop(cs, sol.x, sigma, w, opt.geometry_tol);
    r.diagnostics.iterations = sol.iterations;
    r.diagnostics.reduced_gradient = sol.reduced_gradient;
    r.diagnostics.length_mismatch = res.length_mismatch;
    r.diagnostics.shear = res.shear;
    if (opt.compute_volume) {
        for (int t = 0; t < cs.num_tetrahedra(); ++t) r.volume += volume(simplex_of(cs, sol.x, t), opt.quadrature);
    }
    return r;
}

std::vector<double> congruence_invariants(const Realization& r) {
    const Vec4 C = realization_center(r);
    std::vector<Vec4> V;
    for (const auto& p : r.vertices) {
        Vec4 l = vertex_lift(p);
        if (p.cls == PointClass::Ideal) l /= -mdot(l, C);
        V.push_back(l);
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < V.size(); ++i) out.push_back(std::abs(mdot(V[i], C)));
    for (std::size_t i = 0; i < V.size(); ++i)
        for (std::size_t j = i + 1; j < V.size(); ++j) out.push_back(std::abs(mdot(V[i], V[j])));
    return out;
}

double invariant_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return kInf;
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
    return d;
}

}  // namespace hyperideal
