#include "parvol/scene_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "parvol/errors.hpp"

namespace parvol {

namespace {

using nlohmann::json;

std::string at_prim(int index) { return "primitive " + std::to_string(index) + ": "; }

const json& field(const json& obj, const char* name, const std::string& where, int index) {
    if (!obj.is_object() || !obj.contains(name))
        throw ValidationError(where + "missing field '" + name + "'", index);
    return obj.at(name);
}

double number(const json& v, const std::string& where, int index) {
    if (!v.is_number()) throw ValidationError(where + "expected a number", index);
    return v.get<double>();
}

Coords vector_of(const json& v, int dim, const std::string& where, int index) {
    if (!v.is_array()) throw ValidationError(where + "expected a coordinate array", index);
    if (static_cast<int>(v.size()) != dim)
        throw ValidationError(where + "coordinate has " + std::to_string(v.size()) + " entries, expected " +
                                  std::to_string(dim),
                              index);
    Coords c{};
    for (int i = 0; i < dim; ++i) c[i] = number(v[i], where, index);
    return c;
}

Primitive parse_primitive(const json& j, int dim, int index) {
    const std::string where = at_prim(index);
    const json& type = field(j, "type", where, index);
    if (!type.is_string()) throw ValidationError(where + "'type' must be a string", index);
    const std::string t = type.get<std::string>();
    if (t == "point") return make_point(vector_of(field(j, "p", where, index), dim, where, index));
    if (t == "segment")
        return make_segment(vector_of(field(j, "a", where, index), dim, where, index),
                            vector_of(field(j, "b", where, index), dim, where, index));
    if (t == "box")
        return make_box(vector_of(field(j, "center", where, index), dim, where, index),
                        vector_of(field(j, "half_widths", where, index), dim, where, index));
    if (t == "ball")
        return make_ball(vector_of(field(j, "center", where, index), dim, where, index),
                         number(field(j, "radius", where, index), where, index));
    if (t == "polygon") {
        if (dim != 2) throw ValidationError(where + "polygon requires dimension 2", index);
        const json& vs = field(j, "vertices", where, index);
        if (!vs.is_array()) throw ValidationError(where + "'vertices' must be an array", index);
        std::vector<Vec2> pts;
        for (const auto& v : vs) pts.push_back(to_vec2(vector_of(v, 2, where, index)));
        return make_polygon(std::move(pts));
    }
    if (t == "polytope") {
        if (dim != 3) throw ValidationError(where + "polytope requires dimension 3", index);
        const json& vs = field(j, "vertices", where, index);
        if (!vs.is_array()) throw ValidationError(where + "'vertices' must be an array", index);
        std::vector<Vec3> pts;
        for (const auto& v : vs) pts.push_back(to_vec3(vector_of(v, 3, where, index)));
        try {
            return make_polytope(pts);
        } catch (const ValidationError& e) {
            throw ValidationError(where + e.what(), index);
        }
    }
    if (t == "product") {
        const json& factor = field(j, "factor", where, index);
        const json& center = field(factor, "center", where, index);
        if (!center.is_array() || center.empty() || static_cast<int>(center.size()) >= dim)
            throw ValidationError(where + "product factor must have between 1 and n-1 coordinates", index);
        const int base_dim = dim - static_cast<int>(center.size());
        Primitive base = parse_primitive(field(j, "base", where, index), base_dim, index);
        Coords c{}, h{};
        const Coords fc = vector_of(center, dim - base_dim, where, index);
        const Coords fh = vector_of(field(factor, "half_widths", where, index), dim - base_dim, where, index);
        for (int i = base_dim; i < dim; ++i) c[i] = fc[i - base_dim], h[i] = fh[i - base_dim];
        return make_product(std::move(base), base_dim, c, h);
    }
    throw ValidationError(where + "unknown primitive type '" + t + "'", index);
}

StructuringBody parse_body(const json& j, int dim) {
    const std::string where = "B: ";
    const json& type = field(j, "type", where, -1);
    const std::string t = type.is_string() ? type.get<std::string>() : "";
    if (t == "ball") {
        const double r = j.contains("radius") ? number(j.at("radius"), where, -1) : 1.0;
        if (!(r > 0.0)) throw ValidationError("B: radius must be positive");
        return StructuringBody::ball(dim, r);
    }
    if (t == "polytope") {
        if (dim != 2 && dim != 3) throw ValidationError("B: polytope bodies require dimension 2 or 3");
        const json& vs = field(j, "vertices", where, -1);
        if (!vs.is_array()) throw ValidationError("B: 'vertices' must be an array");
        std::vector<Coords> pts;
        for (const auto& v : vs) pts.push_back(vector_of(v, dim, where, -1));
        try {
            return StructuringBody::polytope(pts, dim);
        } catch (const DegeneracyError& e) {
            throw ValidationError(std::string("B: ") + e.what());
        }
    }
    if (t == "intervals") {
        if (dim != 1) throw ValidationError("B: interval bodies require dimension 1");
        const json& iv = field(j, "intervals", where, -1);
        if (!iv.is_array() || iv.empty()) throw ValidationError("B: 'intervals' must be a nonempty array");
        std::vector<std::pair<double, double>> out;
        for (const auto& p : iv) {
            if (!p.is_array() || p.size() != 2) throw ValidationError("B: each interval must be [lo, hi]");
            const double a = number(p[0], where, -1), b = number(p[1], where, -1);
            if (!(a <= b)) throw ValidationError("B: interval with lo > hi");
            out.emplace_back(a, b);
        }
        return StructuringBody::intervals(std::move(out));
    }
    throw ValidationError("B: unknown body type '" + t + "'");
}

void line_col(const std::string& text, std::size_t offset, int& line, int& col) {
    line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line, col = 1;
        else ++col;
    }
}

json coords_json(const Coords& c, int from, int to) {
    json a = json::array();
    for (int i = from; i < to; ++i) a.push_back(c[i]);
    return a;
}

json primitive_json(const Primitive& prim, int dim) {
    json j;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PointPrim>) {
                j = {{"type", "point"}, {"p", coords_json(p.p, 0, dim)}};
            } else if constexpr (std::is_same_v<T, SegmentPrim>) {
                j = {{"type", "segment"}, {"a", coords_json(p.a, 0, dim)}, {"b", coords_json(p.b, 0, dim)}};
            } else if constexpr (std::is_same_v<T, BoxPrim>) {
                j = {{"type", "box"}, {"center", coords_json(p.center, 0, dim)}, {"half_widths", coords_json(p.half, 0, dim)}};
            } else if constexpr (std::is_same_v<T, BallPrim>) {
                j = {{"type", "ball"}, {"center", coords_json(p.center, 0, dim)}, {"radius", p.radius}};
            } else if constexpr (std::is_same_v<T, PolygonPrim>) {
                json vs = json::array();
                for (auto v : p.vertices) vs.push_back({v.x, v.y});
                j = {{"type", "polygon"}, {"vertices", vs}};
            } else if constexpr (std::is_same_v<T, PolytopePrim>) {
                json vs = json::array();
                for (auto v : p.hull.vertices) vs.push_back({v.x, v.y, v.z});
                j = {{"type", "polytope"}, {"vertices", vs}};
            } else {
                j = {{"type", "product"},
                     {"base", primitive_json(*p.base, p.base_dim)},
                     {"factor", {{"center", coords_json(p.center, p.base_dim, dim)},
                                 {"half_widths", coords_json(p.half, p.base_dim, dim)}}}};
            }
        },
        prim.shape);
    return j;
}

json body_json(const StructuringBody& body) {
    json j;
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, EuclideanBall>) {
                j = {{"type", "ball"}, {"radius", b.radius}};
            } else if constexpr (std::is_same_v<T, PolytopeBody>) {
                json vs = json::array();
                for (auto v : b.hull.vertices) {
                    if (body.dim == 2) vs.push_back({v.x, v.y});
                    else vs.push_back({v.x, v.y, v.z});
                }
                j = {{"type", "polytope"}, {"vertices", vs}};
            } else {
                json iv = json::array();
                for (const auto& [lo, hi] : b.intervals) iv.push_back({lo, hi});
                j = {{"type", "intervals"}, {"intervals", iv}};
            }
        },
        body.shape);
    return j;
}

}  // namespace

SceneFile parse_scene(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        int line = 0, col = 0;
        line_col(text, e.byte > 0 ? e.byte - 1 : 0, line, col);
        throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                             e.what(),
                         line, col);
    }
    if (!doc.is_object()) throw ValidationError("scene document must be a JSON object");
    const json& d = field(doc, "dim", "scene: ", -1);
    if (!d.is_number_integer()) throw ValidationError("scene: 'dim' must be an integer");
    SceneFile out;
    out.scene.dim = d.get<int>();
    if (out.scene.dim < 1 || out.scene.dim > kMaxDim) throw ValidationError("scene: 'dim' must be in [1, 4]");
    const json& a = field(doc, "A", "scene: ", -1);
    if (!a.is_array() || a.empty()) throw ValidationError("scene: 'A' must be a nonempty array");
    for (std::size_t i = 0; i < a.size(); ++i)
        out.scene.primitives.push_back(parse_primitive(a[i], out.scene.dim, static_cast<int>(i)));
    out.scene.validate();
    if (doc.contains("B")) out.body = parse_body(doc.at("B"), out.scene.dim);
    return out;
}

SceneFile load_scene(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open scene file '" + path + "'", 0, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scene(ss.str());
}

std::string scene_to_json(const Scene& scene, const std::optional<StructuringBody>& body, int indent) {
    json doc;
    doc["dim"] = scene.dim;
    doc["A"] = json::array();
    for (const auto& p : scene.primitives) doc["A"].push_back(primitive_json(p, scene.dim));
    if (body) doc["B"] = body_json(*body);
    return doc.dump(indent);
}

std::string scene_hash(const Scene& scene, const std::optional<StructuringBody>& body) {
    const std::string s = scene_to_json(scene, body);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace parvol
