#pragma once

// Exhaustive catalog of 3-connected planar maps by face count, and brute-force
// enumeration of dual cycles and link paths used as an oracle for the checkers.

#include "hyperideal/cellulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <set>
#include <vector>

namespace testsupport {

using Faces = std::vector<std::vector<int>>;

inline Faces tetrahedron_faces() { return {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}}; }
inline Faces octahedron_faces() {
    return {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}, {5, 2, 1}, {5, 3, 2}, {5, 4, 3}, {5, 1, 4}};
}
inline Faces cube_faces() {
    return {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
}

/// Neighbors of v in rotation order.
inline std::vector<int> rotation(const hyperideal::Cellulation& c, int v) {
    std::vector<int> out;
    const auto& he = c.half_edges();
    for (int h : c.outgoing(v)) out.push_back(he[he[h].next].origin);
    return out;
}

/// Canonical code of a planar map up to orientation-preserving and -reversing isomorphism.
inline std::vector<int> canonical_code(const hyperideal::Cellulation& c) {
    const int n = c.num_vertices();
    std::vector<std::vector<int>> rot(n);
    for (int v = 0; v < n; ++v) rot[v] = rotation(c, v);
    std::vector<int> best;
    for (int dir = 0; dir < 2; ++dir) {
        for (int u = 0; u < n; ++u) {
            for (int first : rot[u]) {
                std::vector<int> label(n, -1), ref(n, -1), code;
                std::queue<int> q;
                label[u] = 0;
                ref[u] = first;
                q.push(u);
                int next = 1;
                while (!q.empty()) {
                    const int x = q.front();
                    q.pop();
                    const auto& r = rot[x];
                    const int d = static_cast<int>(r.size());
                    const int start = static_cast<int>(std::find(r.begin(), r.end(), ref[x]) - r.begin());
                    for (int i = 0; i < d; ++i) {
                        const int y = r[((dir == 0 ? i : -i) + start + d) % d];
                        if (label[y] < 0) {
                            label[y] = next++;
                            ref[y] = x;
                            q.push(y);
                        }
                        code.push_back(label[y]);
                    }
                    code.push_back(-1);
                }
                if (best.empty() || code < best) best = code;
            }
        }
    }
    return best;
}

inline bool three_connected(const hyperideal::Cellulation& c) {
    const int n = c.num_vertices();
    std::vector<std::vector<int>> adj(n);
    for (int v = 0; v < n; ++v) adj[v] = rotation(c, v);
    for (int a = 0; a < n; ++a) {
        if (adj[a].size() < 3) return false;
        for (int b = a + 1; b < n; ++b) {
            std::vector<bool> seen(n, false);
            seen[a] = seen[b] = true;
            int start = 0;
            while (seen[start]) ++start;
            std::vector<int> stack{start};
            seen[start] = true;
            int count = 1;
            while (!stack.empty()) {
                const int x = stack.back();
                stack.pop_back();
                for (int y : adj[x])
                    if (!seen[y]) {
                        seen[y] = true;
                        ++count;
                        stack.push_back(y);
                    }
            }
            if (count != n - 2) return false;
        }
    }
    return true;
}

/// Faces as label cycles.
inline Faces label_faces(const hyperideal::Cellulation& c) {
    Faces out;
    for (const auto& f : c.faces()) {
        std::vector<int> l;
        for (int v : f) l.push_back(c.label(v));
        out.push_back(l);
    }
    return out;
}

/// All maps obtained by one diagonal insertion or one vertex split.
inline std::vector<Faces> grow(const hyperideal::Cellulation& c) {
    std::vector<Faces> out;
    const Faces faces = label_faces(c);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& cyc = faces[f];
        const int k = static_cast<int>(cyc.size());
        for (int i = 0; i < k; ++i)
            for (int j = i + 2; j < k; ++j) {
                if (i == 0 && j == k - 1) continue;
                if (c.edge_between(c.vertex_of_label(cyc[i]), c.vertex_of_label(cyc[j])) >= 0) continue;
                Faces g = faces;
                g[f] = std::vector<int>(cyc.begin() + i, cyc.begin() + j + 1);
                std::vector<int> other(cyc.begin() + j, cyc.end());
                other.insert(other.end(), cyc.begin(), cyc.begin() + i + 1);
                g.push_back(other);
                out.push_back(g);
            }
    }
    const int fresh = c.labels().back() + 1;
    for (int v = 0; v < c.num_vertices(); ++v) {
        const auto r = rotation(c, v);
        const int d = static_cast<int>(r.size());
        if (d < 4) continue;
        for (int s = 0; s < d; ++s)
            for (int len = 2; len <= d - 2; ++len) {
                std::set<int> moved;
                for (int i = 0; i < len; ++i) moved.insert(c.label(r[(s + i) % d]));
                const int lv = c.label(v);
                Faces g;
                for (const auto& cyc : faces) {
                    const int k = static_cast<int>(cyc.size());
                    const auto it = std::find(cyc.begin(), cyc.end(), lv);
                    if (it == cyc.end()) {
                        g.push_back(cyc);
                        continue;
                    }
                    const int p = static_cast<int>(it - cyc.begin());
                    const bool before = moved.count(cyc[(p + k - 1) % k]) > 0;
                    const bool after = moved.count(cyc[(p + 1) % k]) > 0;
                    std::vector<int> nc;
                    for (int i = 0; i < k; ++i) {
                        if (i != p) {
                            nc.push_back(cyc[i]);
                        } else if (before && after) {
                            nc.push_back(fresh);
                        } else if (before) {
                            nc.push_back(fresh);
                            nc.push_back(lv);
                        } else if (after) {
                            nc.push_back(lv);
                            nc.push_back(fresh);
                        } else {
                            nc.push_back(lv);
                        }
                    }
                    g.push_back(nc);
                }
                out.push_back(g);
            }
    }
    return out;
}

/// Every 3-connected planar map (convex polyhedron combinatorics) with at most
/// max_faces faces, grown from wheels by diagonal insertions and vertex splits.
inline std::vector<hyperideal::Cellulation> polyhedral_catalog(int max_faces) {
    std::vector<hyperideal::Cellulation> out;
    std::set<std::vector<int>> seen;
    // seeds: every wheel that fits; the rest follows by diagonals and vertex splits
    std::vector<hyperideal::Cellulation> frontier;
    for (int spokes = 3; spokes + 1 <= max_faces; ++spokes) {
        Faces wheel;
        std::vector<int> rim;
        for (int i = 0; i < spokes; ++i) {
            wheel.push_back({spokes, i, (i + 1) % spokes});
            rim.push_back(spokes - 1 - i);
        }
        wheel.push_back(rim);
        frontier.push_back(hyperideal::Cellulation::build(wheel));
        seen.insert(canonical_code(frontier.back()));
    }
    while (!frontier.empty()) {
        hyperideal::Cellulation c = frontier.back();
        frontier.pop_back();
        for (const auto& g : grow(c)) {
            if (static_cast<int>(g.size()) > max_faces) continue;
            auto child = hyperideal::Cellulation::build(g);
            if (!three_connected(child)) continue;
            if (!seen.insert(canonical_code(child)).second) continue;
            frontier.push_back(child);
        }
        out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.num_faces() < b.num_faces(); });
    return out;
}

struct BruteForce {
    double min_link = std::numeric_limits<double>::infinity();
    double min_nonelementary_cycle = std::numeric_limits<double>::infinity();
    double min_link_path = std::numeric_limits<double>::infinity();
    /// Number of distinct simple cycles whose edge set is a vertex link.
    int elementary_cycles = 0;
};

/// Enumerates every simple cycle of the dual multigraph and every simple dual
/// path with both ends on a vertex link that is not made of link arcs only.
inline BruteForce brute_force(const hyperideal::Cellulation& c, const std::vector<double>& w) {
    BruteForce r;
    const auto g = hyperideal::dual_graph(c);
    std::vector<std::vector<int>> links(c.num_vertices());
    std::set<std::vector<int>> link_sets;
    for (int v = 0; v < c.num_vertices(); ++v) {
        links[v] = c.vertex_edges(v);
        std::sort(links[v].begin(), links[v].end());
        link_sets.insert(links[v]);
        double s = 0;
        for (int e : links[v]) s += w[e];
        r.min_link = std::min(r.min_link, s);
    }

    std::set<std::vector<int>> cycles;
    std::vector<bool> on_path(g.num_nodes, false);
    std::vector<int> arcs;
    // cycles through node s using only nodes >= s
    std::function<void(int, int)> dfs_cycle = [&](int s, int x) {
        for (int a : g.incident[x]) {
            if (!arcs.empty() && a == arcs.back()) continue;
            const int y = g.arcs[a].a == x ? g.arcs[a].b : g.arcs[a].a;
            if (y < s) continue;
            if (y == s && !arcs.empty()) {
                std::vector<int> edges;
                for (int b : arcs) edges.push_back(g.arcs[b].edge);
                edges.push_back(g.arcs[a].edge);
                std::sort(edges.begin(), edges.end());
                if (std::adjacent_find(edges.begin(), edges.end()) == edges.end()) cycles.insert(edges);
                continue;
            }
            if (y == s || on_path[y]) continue;
            on_path[y] = true;
            arcs.push_back(a);
            dfs_cycle(s, y);
            arcs.pop_back();
            on_path[y] = false;
        }
    };
    for (int s = 0; s < g.num_nodes; ++s) {
        on_path[s] = true;
        dfs_cycle(s, s);
        on_path[s] = false;
    }
    for (const auto& cyc : cycles) {
        if (link_sets.count(cyc)) {
            ++r.elementary_cycles;
            continue;
        }
        double s = 0;
        for (int e : cyc) s += w[e];
        r.min_nonelementary_cycle = std::min(r.min_nonelementary_cycle, s);
    }

    for (int v = 0; v < c.num_vertices(); ++v) {
        std::vector<bool> in_link(g.num_nodes, false), link_edge(c.num_edges(), false);
        for (int f : c.vertex_faces(v)) in_link[f] = true;
        for (int e : links[v]) link_edge[e] = true;
        std::function<void(int, int, double, bool)> dfs_path = [&](int start, int x, double weight, bool off_link) {
            for (int a : g.incident[x]) {
                if (!arcs.empty() && a == arcs.back()) continue;
                const int y = g.arcs[a].a == x ? g.arcs[a].b : g.arcs[a].a;
                const double nw = weight + w[g.arcs[a].edge];
                const bool off = off_link || !link_edge[g.arcs[a].edge];
                if (in_link[y] && off && (!on_path[y] || y == start)) r.min_link_path = std::min(r.min_link_path, nw);
                if (on_path[y]) continue;
                on_path[y] = true;
                arcs.push_back(a);
                dfs_path(start, y, nw, off);
                arcs.pop_back();
                on_path[y] = false;
            }
        };
        for (int s = 0; s < g.num_nodes; ++s) {
            if (!in_link[s]) continue;
            on_path[s] = true;
            dfs_path(s, s, 0.0, false);
            on_path[s] = false;
        }
    }
    return r;
}

}  // namespace testsupport
