#pragma once

// Cellulations of the sphere as half-edge structures, their dual graphs, the
// angle admissibility checks and the cone triangulation from a vertex.

#include <array>
#include <map>
#include <string>
#include <vector>

namespace hyperideal {

/// Half-edge data structure of a cellulation of S^2. Vertices are indexed
/// 0..n-1 in increasing order of their external labels.
class Cellulation {
public:
    struct HalfEdge {
        int origin = -1;
        int twin = -1;
        int next = -1;
        int prev = -1;
        int face = -1;
        int edge = -1;
    };

    /// Builds from faces given as cycles of vertex labels, all oriented the same way.
    static Cellulation build(const std::vector<std::vector<int>>& faces);

    int num_vertices() const { return static_cast<int>(labels_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_faces() const { return static_cast<int>(faces_.size()); }
    int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }

    const std::vector<HalfEdge>& half_edges() const { return half_; }
    /// Vertex cycle of face f (internal indices).
    const std::vector<int>& face(int f) const { return faces_[f]; }
    const std::vector<std::vector<int>>& faces() const { return faces_; }
    /// Endpoints (u < v) of edge e.
    const std::array<int, 2>& edge(int e) const { return edges_[e]; }
    /// The two faces on either side of edge e.
    std::array<int, 2> edge_faces(int e) const;
    /// Edge joining u and v, or -1.
    int edge_between(int u, int v) const;

    int label(int v) const { return labels_[v]; }
    const std::vector<int>& labels() const { return labels_; }
    int vertex_of_label(int label) const;
    /// "min-max" in labels.
    std::string edge_key(int e) const;

    /// Outgoing half-edges of v in rotation order.
    std::vector<int> outgoing(int v) const;
    /// Edges incident to v, in rotation order.
    std::vector<int> vertex_edges(int v) const;
    /// Faces incident to v, in rotation order (a face may repeat).
    std::vector<int> vertex_faces(int v) const;
    std::vector<int> face_edges(int f) const;

private:
    std::vector<HalfEdge> half_;
    std::vector<std::vector<int>> faces_;
    std::vector<int> face_first_half_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<int> edge_half_;
    std::vector<int> vertex_half_;
    std::vector<int> labels_;
    std::map<std::pair<int, int>, int> directed_;
};

/// Exterior angle per edge of a cellulation plus the set of ideal vertices.
struct AngleAssignation {
    std::vector<double> w;
    std::vector<bool> ideal;
};

struct Verdict {
    bool accepted = true;
    std::string reason;
    /// Edges of the offending cycle or path.
    std::vector<int> witness;
    double witness_weight = 0.0;
};

/// w(e) in (0, pi) and, for every vertex, sum >= 2 pi with equality exactly on ideal vertices.
Verdict check_angle_bounds(const Cellulation& c, const AngleAssignation& a, double tol = 1e-9);

struct DualArc {
    int a = -1, b = -1;
    int edge = -1;
};

/// One node per face of the cellulation, one arc per edge (a multigraph).
struct DualGraph {
    int num_nodes = 0;
    std::vector<DualArc> arcs;
    /// Arc indices incident to each node.
    std::vector<std::vector<int>> incident;
};

DualGraph dual_graph(const Cellulation& c);

struct CircuitReport {
    Verdict verdict;
    /// Lightest vertex link and lightest non-elementary closed dual path.
    double min_link_weight = 0.0;
    double min_nonelementary_weight = 0.0;
};

/// Vertex links must weigh >= 2 pi, every other closed dual path > 2 pi.
CircuitReport check_circuits(const Cellulation& c, const std::vector<double>& w, double tol = 1e-9);

struct PathReport {
    Verdict verdict;
    /// Lightest dual path with both ends on a vertex link and not contained in it.
    double min_weight = 0.0;
};

/// Every dual path starting and ending on the link of a vertex, not contained in it, must weigh > pi.
PathReport check_simple_paths(const Cellulation& c, const std::vector<double>& w, double tol = 1e-9);

/// Both checks plus the bounds; the first failure wins.
Verdict check_admissible(const Cellulation& c, const AngleAssignation& a, double tol = 1e-9);

/// k shortest simple paths (Yen) from s to t avoiding the given arc; each path is a list of arc indices.
std::vector<std::vector<int>> k_shortest_paths(const DualGraph& g, const std::vector<double>& arc_weight, int s,
                                               int t, int k, int banned_arc);

struct ConeTetrahedron {
    /// Apex first, then the base triangle in face orientation order.
    std::array<int, 4> v{};
    /// Face of the triangulated cellulation that is the base.
    int base_face = -1;
};

struct ConeTriangulation {
    int apex = -1;
    /// The cellulation with non-triangular faces fanned.
    Cellulation boundary;
    /// Per boundary edge: index of the original edge, or -1 for added diagonals.
    std::vector<int> original_edge;
    std::vector<ConeTetrahedron> tetrahedra;
    /// Edges from the apex to vertices not adjacent to it, as (apex, v).
    std::vector<std::array<int, 2>> interior_edges;
};

ConeTriangulation cone_triangulation(const Cellulation& c);

}  // namespace hyperideal
