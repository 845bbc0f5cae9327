#include "hyperideal/cellulation.hpp"

#include "hyperideal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <set>
#include <sstream>

namespace hyperideal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
}  // namespace

Cellulation Cellulation::build(const std::vector<std::vector<int>>& faces) {
    Cellulation c;
    std::set<int> label_set;
    for (const auto& f : faces) label_set.insert(f.begin(), f.end());
    c.labels_.assign(label_set.begin(), label_set.end());
    std::map<int, int> index;
    for (int i = 0; i < static_cast<int>(c.labels_.size()); ++i) index[c.labels_[i]] = i;
    if (faces.empty()) throw Error(ErrorCode::NotASphere, "no faces");

    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        const auto& lf = faces[f];
        if (lf.size() < 3) throw Error(ErrorCode::InvalidFace, "face " + std::to_string(f) + " has fewer than 3 sides");
        std::vector<int> cyc;
        for (int l : lf) cyc.push_back(index.at(l));
        if (std::set<int>(cyc.begin(), cyc.end()).size() != cyc.size())
            throw Error(ErrorCode::InvalidFace, "face " + std::to_string(f) + " repeats a vertex");
        const int first = static_cast<int>(c.half_.size());
        const int n = static_cast<int>(cyc.size());
        for (int i = 0; i < n; ++i) {
            HalfEdge h;
            h.origin = cyc[i];
            h.face = f;
            h.next = first + (i + 1) % n;
            h.prev = first + (i + n - 1) % n;
            const auto key = std::make_pair(cyc[i], cyc[(i + 1) % n]);
            if (!c.directed_.emplace(key, first + i).second) {
                std::ostringstream msg;
                msg << "edge " << lf[i] << "-" << lf[(i + 1) % n] << " is used twice with the same orientation";
                throw Error(ErrorCode::NonManifoldEdge, msg.str());
            }
            c.half_.push_back(h);
        }
        c.faces_.push_back(cyc);
        c.face_first_half_.push_back(first);
    }

    for (int h = 0; h < static_cast<int>(c.half_.size()); ++h) {
        HalfEdge& he = c.half_[h];
        const int to = c.half_[he.next].origin;
        const auto it = c.directed_.find({to, he.origin});
        if (it == c.directed_.end()) {
            std::ostringstream msg;
            msg << "edge " << c.labels_[he.origin] << "-" << c.labels_[to] << " borders a single face";
            throw Error(ErrorCode::NotASphere, msg.str());
        }
        he.twin = it->second;
        if (c.half_[he.twin].face == he.face) {
            throw Error(ErrorCode::InvalidFace, "face " + std::to_string(he.face) + " borders the same edge twice");
        }
        if (h < he.twin) {
            he.edge = static_cast<int>(c.edges_.size());
            c.edges_.push_back({std::min(he.origin, to), std::max(he.origin, to)});
            c.edge_half_.push_back(h);
        }
    }
    for (auto& he : c.half_)
        if (he.edge < 0) he.edge = c.half_[he.twin].edge;

    c.vertex_half_.assign(c.labels_.size(), -1);
    std::vector<int> out_count(c.labels_.size(), 0);
    for (int h = 0; h < static_cast<int>(c.half_.size()); ++h) {
        ++out_count[c.half_[h].origin];
        if (c.vertex_half_[c.half_[h].origin] < 0) c.vertex_half_[c.half_[h].origin] = h;
    }
    for (int v = 0; v < c.num_vertices(); ++v) {
        if (static_cast<int>(c.outgoing(v).size()) != out_count[v])
            throw Error(ErrorCode::NotASphere, "vertex " + std::to_string(c.labels_[v]) + " is not a disk neighborhood");
    }

    // connectivity
    std::vector<bool> seen(c.labels_.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int h : c.outgoing(v)) {
            const int w = c.half_[c.half_[h].next].origin;
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw Error(ErrorCode::NotASphere, "disconnected");
    if (c.euler_characteristic() != 2) {
        throw Error(ErrorCode::NotASphere,
                    "Euler characteristic " + std::to_string(c.euler_characteristic()) + " instead of 2");
    }
    return c;
}

std::array<int, 2> Cellulation::edge_faces(int e) const {
    const int h = edge_half_[e];
    return {half_[h].face, half_[half_[h].twin].face};
}

int Cellulation::edge_between(int u, int v) const {
    const auto it = directed_.find({u, v});
    return it == directed_.end() ? -1 : half_[it->second].edge;
}

int Cellulation::vertex_of_label(int label) const {
    const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) throw Error(ErrorCode::Parse, "unknown vertex " + std::to_string(label));
    return static_cast<int>(it - labels_.begin());
}

std::string Cellulation::edge_key(int e) const {
    return std::to_string(labels_[edges_[e][0]]) + "-" + std::to_string(labels_[edges_[e][1]]);
}

std::vector<int> Cellulation::outgoing(int v) const {
    std::vector<int> out;
    const int start = vertex_half_[v];
    int h = start;
    do {
        out.push_back(h);
        h = half_[half_[h].prev].twin;
    } while (h != start && out.size() <= half_.size());
    return out;
}

std::vector<int> Cellulation::vertex_edges(int v) const {
    std::vector<int> out;
    for (int h : outgoing(v)) out.push_back(half_[h].edge);
    return out;
}

std::vector<int> Cellulation::vertex_faces(int v) const {
    std::vector<int> out;
    for (int h : outgoing(v)) out.push_back(half_[h].face);
    return out;
}

std::vector<int> Cellulation::face_edges(int f) const {
    std::vector<int> out;
    const int start = face_first_half_[f];
    int h = start;
    do {
        out.push_back(half_[h].edge);
        h = half_[h].next;
    } while (h != start);
    return out;
}

Verdict check_angle_bounds(const Cellulation& c, const AngleAssignation& a, double tol) {
    Verdict v;
    if (static_cast<int>(a.w.size()) != c.num_edges() || static_cast<int>(a.ideal.size()) != c.num_vertices()) {
        v.accepted = false;
        v.reason = "angle map does not match the cellulation";
        return v;
    }
    for (int e = 0; e < c.num_edges(); ++e) {
        if (!(a.w[e] > 0 && a.w[e] < kPi)) {
            v.accepted = false;
            v.reason = "angle at edge " + c.edge_key(e) + " outside (0, pi)";
            v.witness = {e};
            v.witness_weight = a.w[e];
            return v;
        }
    }
    for (int x = 0; x < c.num_vertices(); ++x) {
        double sum = 0;
        const auto edges = c.vertex_edges(x);
        for (int e : edges) sum += a.w[e];
        std::ostringstream msg;
        if (a.ideal[x] && std::abs(sum - 2 * kPi) > tol)
            msg << "vertex " << c.label(x) << " is ideal but its angle sum is " << sum;
        else if (!a.ideal[x] && sum <= 2 * kPi + tol)
            msg << "vertex " << c.label(x) << " has angle sum " << sum << " but is not ideal";
        else
            continue;
        v.accepted = false;
        v.reason = msg.str();
        v.witness = edges;
        v.witness_weight = sum;
        return v;
    }
    return v;
}

DualGraph dual_graph(const Cellulation& c) {
    DualGraph g;
    g.num_nodes = c.num_faces();
    g.incident.assign(g.num_nodes, {});
    for (int e = 0; e < c.num_edges(); ++e) {
        const auto [f1, f2] = c.edge_faces(e);
        g.incident[f1].push_back(static_cast<int>(g.arcs.size()));
        g.incident[f2].push_back(static_cast<int>(g.arcs.size()));
        g.arcs.push_back({f1, f2, e});
    }
    return g;
}

namespace {

int other_end(const DualArc& a, int node) { return a.a == node ? a.b : a.a; }

/// Dijkstra returning the arc list of a shortest s-t path, empty if none.
std::vector<int> shortest_path(const DualGraph& g, const std::vector<double>& w, int s, int t,
                               const std::vector<bool>& banned_node, const std::vector<bool>& banned_arc) {
    std::vector<double> dist(g.num_nodes, kInf);
    std::vector<int> via(g.num_nodes, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0;
    pq.push({0, s});
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        if (u == t) break;
        for (int a : g.incident[u]) {
            if (banned_arc[a]) continue;
            const int x = other_end(g.arcs[a], u);
            if (banned_node[x]) continue;
            const double nd = d + w[a];
            if (nd < dist[x]) {
                dist[x] = nd;
                via[x] = a;
                pq.push({nd, x});
            }
        }
    }
    if (dist[t] == kInf) return {};
    std::vector<int> path;
    for (int x = t; x != s; x = other_end(g.arcs[via[x]], x)) path.push_back(via[x]);
    std::reverse(path.begin(), path.end());
    return path;
}

double path_weight(const std::vector<int>& p, const std::vector<double>& w) {
    double s = 0;
    for (int a : p) s += w[a];
    return s;
}

std::vector<int> path_nodes(const DualGraph& g, const std::vector<int>& p, int s) {
    std::vector<int> nodes{s};
    for (int a : p) nodes.push_back(other_end(g.arcs[a], nodes.back()));
    return nodes;
}

}  // namespace

std::vector<std::vector<int>> k_shortest_paths(const DualGraph& g, const std::vector<double>& arc_weight, int s,
                                               int t, int k, int banned_arc) {
    std::vector<bool> no_nodes(g.num_nodes, false), base_arcs(g.arcs.size(), false);
    if (banned_arc >= 0) base_arcs[banned_arc] = true;
    std::vector<std::vector<int>> A;
    const auto first = shortest_path(g, arc_weight, s, t, no_nodes, base_arcs);
    if (first.empty()) return A;
    A.push_back(first);
    std::set<std::pair<double, std::vector<int>>> B;
    while (static_cast<int>(A.size()) < k) {
        const auto& last = A.back();
        const auto nodes = path_nodes(g, last, s);
        for (std::size_t i = 0; i < last.size(); ++i) {
            const std::vector<int> root(last.begin(), last.begin() + i);
            std::vector<bool> ban_arc = base_arcs, ban_node(g.num_nodes, false);
            for (const auto& p : A)
                if (p.size() > i && std::equal(root.begin(), root.end(), p.begin())) ban_arc[p[i]] = true;
            for (std::size_t j = 0; j < i; ++j) ban_node[nodes[j]] = true;
            const auto spur = shortest_path(g, arc_weight, nodes[i], t, ban_node, ban_arc);
            if (spur.empty()) continue;
            std::vector<int> total = root;
            total.insert(total.end(), spur.begin(), spur.end());
            B.insert({path_weight(total, arc_weight), total});
        }
        // drop candidates already accepted
        while (!B.empty() && std::find(A.begin(), A.end(), B.begin()->second) != A.end()) B.erase(B.begin());
        if (B.empty()) break;
        A.push_back(B.begin()->second);
        B.erase(B.begin());
    }
    return A;
}

CircuitReport check_circuits(const Cellulation& c, const std::vector<double>& w, double tol) {
    CircuitReport rep;
    const DualGraph g = dual_graph(c);
    std::vector<double> aw(g.arcs.size());
    for (std::size_t a = 0; a < g.arcs.size(); ++a) aw[a] = w[g.arcs[a].edge];

    std::vector<std::vector<int>> links(c.num_vertices());
    rep.min_link_weight = kInf;
    int worst_link = -1;
    for (int v = 0; v < c.num_vertices(); ++v) {
        links[v] = c.vertex_edges(v);
        std::sort(links[v].begin(), links[v].end());
        double s = 0;
        for (int e : links[v]) s += w[e];
        if (s < rep.min_link_weight) {
            rep.min_link_weight = s;
            worst_link = v;
        }
    }

    rep.min_nonelementary_weight = kInf;
    std::vector<int> best_cycle;
    for (std::size_t a = 0; a < g.arcs.size(); ++a) {
        const auto [u, v] = c.edge(g.arcs[a].edge);
        for (const auto& p : k_shortest_paths(g, aw, g.arcs[a].a, g.arcs[a].b, 3, static_cast<int>(a))) {
            std::vector<int> edges{g.arcs[a].edge};
            for (int x : p) edges.push_back(g.arcs[x].edge);
            std::sort(edges.begin(), edges.end());
            if (edges == links[u] || edges == links[v]) continue;
            const double weight = aw[a] + path_weight(p, aw);
            if (weight < rep.min_nonelementary_weight) {
                rep.min_nonelementary_weight = weight;
                best_cycle = edges;
            }
            break;
        }
    }

    if (rep.min_link_weight < 2 * kPi - tol) {
        rep.verdict.accepted = false;
        std::ostringstream msg;
        msg << "link of vertex " << c.label(worst_link) << " has weight " << rep.min_link_weight << " < 2 pi";
        rep.verdict.reason = msg.str();
        rep.verdict.witness = links[worst_link];
        rep.verdict.witness_weight = rep.min_link_weight;
    } else if (rep.min_nonelementary_weight <= 2 * kPi + tol) {
        rep.verdict.accepted = false;
        std::ostringstream msg;
        msg << "non-elementary circuit of weight " << rep.min_nonelementary_weight << " <= 2 pi";
        rep.verdict.reason = msg.str();
        rep.verdict.witness = best_cycle;
        rep.verdict.witness_weight = rep.min_nonelementary_weight;
    }
    return rep;
}

PathReport check_simple_paths(const Cellulation& c, const std::vector<double>& w, double tol) {
    PathReport rep;
    rep.min_weight = kInf;
    const DualGraph g = dual_graph(c);
    const int n = g.num_nodes;
    std::vector<int> best_path;

    for (int v = 0; v < c.num_vertices(); ++v) {
        std::vector<bool> in_link(n, false);
        for (int f : c.vertex_faces(v)) in_link[f] = true;
        std::vector<bool> link_edge(c.num_edges(), false);
        for (int e : c.vertex_edges(v)) link_edge[e] = true;

        // all-pairs shortest paths through nodes off the link
        std::vector<std::vector<double>> D(n, std::vector<double>(n, kInf));
        std::vector<std::vector<int>> hop(n, std::vector<int>(n, -1));
        for (int x = 0; x < n; ++x)
            if (!in_link[x]) D[x][x] = 0;
        for (std::size_t a = 0; a < g.arcs.size(); ++a) {
            const auto& arc = g.arcs[a];
            if (in_link[arc.a] || in_link[arc.b]) continue;
            const double wt = w[arc.edge];
            if (wt < D[arc.a][arc.b]) {
                D[arc.a][arc.b] = D[arc.b][arc.a] = wt;
                hop[arc.a][arc.b] = hop[arc.b][arc.a] = static_cast<int>(a);
            }
        }
        std::vector<std::vector<int>> mid(n, std::vector<int>(n, -1));
        for (int m = 0; m < n; ++m) {
            if (in_link[m]) continue;
            for (int x = 0; x < n; ++x) {
                if (in_link[x] || D[x][m] == kInf) continue;
                for (int y = 0; y < n; ++y) {
                    if (D[x][m] + D[m][y] < D[x][y]) {
                        D[x][y] = D[x][m] + D[m][y];
                        mid[x][y] = m;
                    }
                }
            }
        }
        auto expand = [&](auto&& self, int x, int y, std::vector<int>& out) -> void {
            if (x == y) return;
            if (mid[x][y] < 0) {
                out.push_back(g.arcs[hop[x][y]].edge);
                return;
            }
            self(self, x, mid[x][y], out);
            self(self, mid[x][y], y, out);
        };

        auto consider = [&](double weight, std::vector<int> edges) {
            if (weight < rep.min_weight) {
                rep.min_weight = weight;
                best_path = std::move(edges);
            }
        };
        // arcs leaving the link
        std::vector<int> exits;
        for (std::size_t a = 0; a < g.arcs.size(); ++a) {
            const auto& arc = g.arcs[a];
            if (in_link[arc.a] != in_link[arc.b]) exits.push_back(static_cast<int>(a));
            // chords: arcs between link nodes that are not link arcs
            if (in_link[arc.a] && in_link[arc.b] && !link_edge[arc.edge]) consider(w[arc.edge], {arc.edge});
        }
        for (std::size_t i = 0; i < exits.size(); ++i) {
            const auto& ai = g.arcs[exits[i]];
            const int x = in_link[ai.a] ? ai.b : ai.a;
            for (std::size_t j = i + 1; j < exits.size(); ++j) {
                const auto& aj = g.arcs[exits[j]];
                const int y = in_link[aj.a] ? aj.b : aj.a;
                if (D[x][y] == kInf) continue;
                const double weight = w[ai.edge] + D[x][y] + w[aj.edge];
                if (weight < rep.min_weight) {
                    std::vector<int> edges{ai.edge};
                    expand(expand, x, y, edges);
                    edges.push_back(aj.edge);
                    consider(weight, edges);
                }
            }
        }
    }

    if (rep.min_weight <= kPi + tol) {
        rep.verdict.accepted = false;
        std::ostringstream msg;
        msg << "simple path of weight " << rep.min_weight << " <= pi";
        rep.verdict.reason = msg.str();
        rep.verdict.witness = best_path;
        rep.verdict.witness_weight = rep.min_weight;
    }
    return rep;
}

Verdict check_admissible(const Cellulation& c, const AngleAssignation& a, double tol) {
    Verdict v = check_angle_bounds(c, a, tol);
    if (!v.accepted) return v;
    v = check_circuits(c, a.w, tol).verdict;
    if (!v.accepted) return v;
    return check_simple_paths(c, a.w, tol).verdict;
}

ConeTriangulation cone_triangulation(const Cellulation& c) {
    ConeTriangulation out;
    const int apex = 0;
    std::set<std::pair<int, int>> used;
    for (int e = 0; e < c.num_edges(); ++e) used.insert({c.edge(e)[0], c.edge(e)[1]});
    auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };

    std::vector<std::vector<int>> tri_faces;
    for (const auto& f : c.faces()) {
        const int n = static_cast<int>(f.size());
        if (n == 3) {
            tri_faces.push_back({c.label(f[0]), c.label(f[1]), c.label(f[2])});
            continue;
        }
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int i, int j) { return f[i] < f[j]; });
        bool done = false;
        for (int start : order) {
            std::vector<int> r(n);
            for (int i = 0; i < n; ++i) r[i] = f[(start + i) % n];
            bool clash = false;
            for (int i = 2; i < n - 1 && !clash; ++i) clash = used.count(key(r[0], r[i])) > 0;
            if (clash) continue;
            for (int i = 2; i < n - 1; ++i) used.insert(key(r[0], r[i]));
            for (int i = 1; i < n - 1; ++i) tri_faces.push_back({c.label(r[0]), c.label(r[i]), c.label(r[i + 1])});
            done = true;
            break;
        }
        if (!done) throw Error(ErrorCode::InvalidFace, "no fan diagonal set avoids existing edges");
    }

    out.boundary = Cellulation::build(tri_faces);
    out.apex = apex;
    const Cellulation& b = out.boundary;
    for (int e = 0; e < b.num_edges(); ++e) out.original_edge.push_back(c.edge_between(b.edge(e)[0], b.edge(e)[1]));
    for (int f = 0; f < b.num_faces(); ++f) {
        const auto& t = b.face(f);
        if (std::find(t.begin(), t.end(), apex) != t.end()) continue;
        out.tetrahedra.push_back({{apex, t[0], t[1], t[2]}, f});
    }
    for (int v = 0; v < b.num_vertices(); ++v)
        if (v != apex && b.edge_between(apex, v) < 0) out.interior_edges.push_back({apex, v});
    return out;
}

}  // namespace hyperideal
