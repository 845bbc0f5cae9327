#include "hyperideal/io.hpp"

#include <charconv>
#include <set>

namespace hyperideal {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::Parse, what); }

const json& field(const json& j, const char* name) {
    if (!j.is_object()) fail("expected an object holding '" + std::string(name) + "'");
    const auto it = j.find(name);
    if (it == j.end()) fail(std::string("missing field '") + name + "'");
    return *it;
}

int as_id(const json& j) {
    if (!j.is_number_integer() || j.get<long long>() < 0 || j.get<long long>() > 1'000'000'000)
        fail("vertex ids must be non-negative integers, got " + j.dump());
    return j.get<int>();
}

double as_number(const json& j, const std::string& what) {
    if (!j.is_number()) fail(what + " must be a number, got " + j.dump());
    return j.get<double>();
}

template <int N>
Eigen::Matrix<double, N, 1> as_vector(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != N) fail(what + " must be an array of " + std::to_string(N) + " numbers");
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i) v[i] = as_number(j[i], what);
    return v;
}

template <class V>
json as_array(const V& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

std::string as_string(const json& j, const std::string& what) {
    if (!j.is_string()) fail(what + " must be a string, got " + j.dump());
    return j.get<std::string>();
}

int as_index(const json& j, const std::string& what) {
    if (!j.is_number_integer()) fail(what + " must be an integer, got " + j.dump());
    return j.get<int>();
}

PointClass class_of(const std::string& s) {
    if (s == "finite") return PointClass::Finite;
    if (s == "ideal") return PointClass::Ideal;
    if (s == "hyperideal") return PointClass::Hyperideal;
    fail("unknown vertex class '" + s + "'");
}

std::vector<std::vector<int>> label_faces(const Cellulation& sigma) {
    std::vector<std::vector<int>> faces;
    for (const auto& cyc : sigma.faces()) {
        std::vector<int> f;
        for (int v : cyc) f.push_back(sigma.label(v));
        faces.push_back(std::move(f));
    }
    return faces;
}

Cellulation cellulation_from_cycles(const json& faces) {
    if (!faces.is_array()) fail("'faces' must be an array of vertex cycles");
    std::vector<std::vector<int>> cycles;
    for (const auto& f : faces) {
        const json& cyc = f.is_object() ? field(f, "cycle") : f;
        if (!cyc.is_array()) fail("a face must be an array of vertex ids");
        std::vector<int> c;
        for (const auto& id : cyc) c.push_back(as_id(id));
        cycles.push_back(std::move(c));
    }
    return Cellulation::build(cycles);
}

int edge_of_key(const Cellulation& sigma, const std::string& key) {
    const auto [a, b] = parse_edge_key(key);
    const int e = sigma.edge_between(sigma.vertex_of_label(a), sigma.vertex_of_label(b));
    if (e < 0) fail("'" + key + "' is not an edge");
    return e;
}

}  // namespace

std::pair<int, int> parse_edge_key(const std::string& key) {
    const auto dash = key.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == key.size()) fail("malformed edge key '" + key + "'");
    auto number = [&](std::size_t from, std::size_t to) {
        int v = 0;
        const auto [end, ec] = std::from_chars(key.data() + from, key.data() + to, v);
        if (ec != std::errc{} || end != key.data() + to) fail("malformed edge key '" + key + "'");
        return v;
    };
    const int a = number(0, dash), b = number(dash + 1, key.size());
    if (a >= b) fail("edge key '" + key + "' must list the smaller id first");
    return {a, b};
}

CellulationDocument CellulationDocument::parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(e.what());
    }
    return from_json(j);
}

CellulationDocument CellulationDocument::from_json(const json& j) {
    CellulationDocument d;
    const json& vs = field(j, "vertices");
    if (!vs.is_array()) fail("'vertices' must be an array");
    for (const auto& v : vs) d.vertices.push_back(as_id(v));
    const json& fs = field(j, "faces");
    if (!fs.is_array()) fail("'faces' must be an array");
    for (const auto& f : fs) {
        if (!f.is_array()) fail("a face must be an array of vertex ids");
        std::vector<int> cyc;
        for (const auto& v : f) cyc.push_back(as_id(v));
        d.faces.push_back(std::move(cyc));
    }
    if (j.contains("ideal")) {
        const json& is = j["ideal"];
        if (!is.is_array()) fail("'ideal' must be an array");
        for (const auto& v : is) d.ideal.push_back(as_id(v));
    }
    if (j.contains("angles")) {
        const json& as = j["angles"];
        if (!as.is_object()) fail("'angles' must map edge keys to radians");
        for (const auto& [key, value] : as.items()) d.angles[key] = as_number(value, "angle '" + key + "'");
    }
    return d;
}

json CellulationDocument::to_json() const {
    json j;
    j["vertices"] = vertices;
    j["faces"] = faces;
    j["ideal"] = ideal;
    j["angles"] = json::object();
    for (const auto& [key, w] : angles) j["angles"][key] = w;
    return j;
}

Instance to_instance(const CellulationDocument& doc, bool require_angles) {
    const std::set<int> listed(doc.vertices.begin(), doc.vertices.end());
    if (listed.size() != doc.vertices.size()) fail("repeated vertex id");
    std::set<int> used;
    for (const auto& f : doc.faces)
        for (int v : f) {
            if (!listed.count(v)) fail("face uses unlisted vertex " + std::to_string(v));
            used.insert(v);
        }
    if (used != listed) fail("some listed vertex lies on no face");

    Instance in{Cellulation::build(doc.faces), {}};
    const Cellulation& s = in.sigma;
    in.angles.ideal.assign(s.num_vertices(), false);
    for (int v : doc.ideal) {
        if (!listed.count(v)) fail("ideal vertex " + std::to_string(v) + " is not listed");
        in.angles.ideal[s.vertex_of_label(v)] = true;
    }
    in.angles.w.assign(s.num_edges(), 0.0);
    if (!require_angles) return in;

    std::vector<bool> seen(s.num_edges(), false);
    for (const auto& [key, w] : doc.angles) {
        const int e = edge_of_key(s, key);
        seen[e] = true;
        in.angles.w[e] = w;
    }
    for (int e = 0; e < s.num_edges(); ++e)
        if (!seen[e]) fail("no angle for edge " + s.edge_key(e));
    return in;
}

CellulationDocument to_document(const Cellulation& sigma, const AngleAssignation& a) {
    CellulationDocument d;
    d.vertices = sigma.labels();
    d.faces = label_faces(sigma);
    for (int v = 0; v < sigma.num_vertices(); ++v)
        if (a.ideal[v]) d.ideal.push_back(sigma.label(v));
    for (int e = 0; e < sigma.num_edges(); ++e) d.angles[sigma.edge_key(e)] = a.w[e];
    return d;
}

json realization_to_json(const Realization& r) {
    const Cellulation& s = r.sigma;
    json j;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["vertices"] = json::array();
    for (int v = 0; v < s.num_vertices(); ++v)
        j["vertices"].push_back({{"id", s.label(v)},
                                 {"class", to_string(r.vertices[v].cls)},
                                 {"position", as_array(r.vertices[v].p)}});
    j["faces"] = json::array();
    const auto faces = label_faces(s);
    for (int f = 0; f < s.num_faces(); ++f)
        j["faces"].push_back({{"cycle", faces[f]}, {"normal", as_array(r.face_normals[f])}});
    j["angles"] = json::object();
    for (int e = 0; e < s.num_edges(); ++e) {
        json a = {{"measured", r.measured_w[e]}};
        if (!r.target_w.empty()) a["target"] = r.target_w[e];
        j["angles"][s.edge_key(e)] = a;
    }
    j["volume"] = r.volume;
    const Diagnostics& d = r.diagnostics;
    j["diagnostics"] = {{"iterations", d.iterations},
                        {"reduced_gradient", d.reduced_gradient},
                        {"length_mismatch", d.length_mismatch},
                        {"shear", d.shear},
                        {"gluing", d.gluing},
                        {"angle_error", d.angle_error},
                        {"planarity", d.planarity}};
    return j;
}

Realization realization_from_json(const json& j) {
    Realization r;
    r.sigma = cellulation_from_cycles(field(j, "faces"));
    const Cellulation& s = r.sigma;
    const int nv = s.num_vertices();

    const json& vs = field(j, "vertices");
    if (!vs.is_array() || static_cast<int>(vs.size()) != nv) fail("'vertices' does not match the faces");
    r.vertices.assign(nv, ProjPoint{});
    r.ideal.assign(nv, false);
    std::vector<bool> seen(nv, false);
    for (const auto& v : vs) {
        const int i = s.vertex_of_label(as_id(field(v, "id")));
        if (seen[i]) fail("repeated vertex id");
        seen[i] = true;
        r.vertices[i] = ProjPoint{as_vector<3>(field(v, "position"), "position"),
                                  class_of(as_string(field(v, "class"), "vertex class"))};
        r.ideal[i] = r.vertices[i].cls == PointClass::Ideal;
    }

    const json& fs = field(j, "faces");
    for (int f = 0; f < s.num_faces(); ++f) r.face_normals.push_back(as_vector<4>(field(fs[f], "normal"), "normal"));

    const json& as = field(j, "angles");
    if (!as.is_object()) fail("'angles' must map edge keys to records");
    r.measured_w.assign(s.num_edges(), 0.0);
    std::vector<double> target(s.num_edges(), 0.0);
    int targets = 0;
    std::vector<bool> covered(s.num_edges(), false);
    for (const auto& [key, a] : as.items()) {
        const int e = edge_of_key(s, key);
        covered[e] = true;
        r.measured_w[e] = as_number(field(a, "measured"), "measured angle");
        if (a.contains("target")) {
            target[e] = as_number(a["target"], "target angle");
            ++targets;
        }
    }
    for (int e = 0; e < s.num_edges(); ++e)
        if (!covered[e]) fail("no angle for edge " + s.edge_key(e));
    if (targets == s.num_edges()) r.target_w = std::move(target);
    r.volume = as_number(field(j, "volume"), "volume");
    return r;
}

json config_to_json(const CircleConfig& c, const Cellulation& sigma) {
    json j;
    j["circles"] = json::array();
    for (const auto& ci : c.circles) {
        json prov = ci.color == CircleColor::Black ? json{{"face", ci.source}} : json{{"vertex", sigma.label(ci.source)}};
        j["circles"].push_back({{"axis", as_array(ci.axis)},
                                {"radius", ci.radius},
                                {"disk", ci.disk_is_cap ? "cap" : "complement"},
                                {"color", to_string(ci.color)},
                                {"provenance", prov}});
    }
    j["arcs"] = json::array();
    for (const auto& a : c.arcs) {
        json arc = {{"a", a.a},
                    {"b", a.b},
                    {"kind", to_string(a.kind)},
                    {"product", a.product},
                    {"angle", a.angle},
                    {"tangent", a.tangent}};
        if (a.edge >= 0) arc["edge"] = sigma.edge_key(a.edge);
        j["arcs"].push_back(arc);
    }
    return j;
}

CircleConfig config_from_json(const json& j, const Cellulation& sigma) {
    CircleConfig c;
    const json& cs = field(j, "circles");
    if (!cs.is_array()) fail("'circles' must be an array");
    for (const auto& cj : cs) {
        SphericalCircle ci;
        ci.axis = as_vector<3>(field(cj, "axis"), "axis");
        ci.radius = as_number(field(cj, "radius"), "radius");
        const std::string disk = as_string(field(cj, "disk"), "disk");
        if (disk != "cap" && disk != "complement") fail("disk must be 'cap' or 'complement'");
        ci.disk_is_cap = disk == "cap";
        const std::string color = as_string(field(cj, "color"), "color");
        if (color == "black") {
            ci.color = CircleColor::Black;
            ci.source = as_id(field(field(cj, "provenance"), "face"));
            if (ci.source >= sigma.num_faces()) fail("provenance face out of range");
        } else if (color == "red") {
            ci.color = CircleColor::Red;
            ci.source = sigma.vertex_of_label(as_id(field(field(cj, "provenance"), "vertex")));
        } else {
            fail("unknown circle color '" + color + "'");
        }
        c.circles.push_back(ci);
    }
    const json& as = field(j, "arcs");
    if (!as.is_array()) fail("'arcs' must be an array");
    for (const auto& aj : as) {
        CircleArc a;
        a.a = as_index(field(aj, "a"), "arc end");
        a.b = as_index(field(aj, "b"), "arc end");
        const std::string kind = as_string(field(aj, "kind"), "arc kind");
        if (kind == "black-black") a.kind = ArcKind::BlackBlack;
        else if (kind == "red-black") a.kind = ArcKind::RedBlack;
        else if (kind == "red-red") a.kind = ArcKind::RedRed;
        else fail("unknown arc kind '" + kind + "'");
        if (aj.contains("edge")) a.edge = edge_of_key(sigma, as_string(aj["edge"], "edge key"));
        a.product = as_number(field(aj, "product"), "product");
        a.angle = as_number(field(aj, "angle"), "angle");
        const json& tangent = field(aj, "tangent");
        if (!tangent.is_boolean()) fail("'tangent' must be a boolean");
        a.tangent = tangent.get<bool>();
        c.arcs.push_back(a);
    }
    return c;
}

}  // namespace hyperideal
