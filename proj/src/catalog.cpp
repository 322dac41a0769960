#include "klein/catalog.hpp"

#include <charconv>

#include <json.hpp>

namespace klein {

namespace {

FaceCatalogEntry make_entry(std::string id, std::vector<IntVec3> vertices, long ls, long ld, std::string source) {
    return {std::move(id), LatticeFace(std::move(vertices)), Integer(ls), Integer(ld), std::move(source)};
}

}  // namespace

FaceCatalogEntry triangle_a(int n) {
    if (n < 1) throw Error(ErrorKind::out_of_range, "n must be >= 1");
    const long m = n;
    return make_entry("A" + std::to_string(n), {{0, 0, 1}, {m, 0, 1}, {0, m, 1}}, m * m, 1, "triangle with legs n");
}

FaceCatalogEntry square_b(int n) {
    if (n < 1) throw Error(ErrorKind::out_of_range, "n must be >= 1");
    const long m = n;
    return make_entry("B" + std::to_string(n), {{0, 0, 1}, {m, 0, 1}, {m, m, 1}, {0, m, 1}}, 2 * m * m, 1,
                      "square with side n");
}

const std::vector<FaceCatalogEntry>& face_catalog() {
    static const std::vector<FaceCatalogEntry> entries = {
        make_entry("T1", {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}}, 1, 1, "unit triangle"),
        make_entry("T2", {{0, 0, 1}, {0, 2, 1}, {2, 0, 1}}, 4, 1, "triangle with legs 2"),
        make_entry("Q1", {{0, 0, 1}, {0, 1, 1}, {1, 1, 1}, {1, 0, 1}}, 2, 1, "unit square"),
        make_entry("T1d2", {{1, 0, 2}, {1, 1, 2}, {0, 1, 2}}, 1, 2, "unit triangle at distance 2"),
        make_entry("Q1d2", {{0, 0, 2}, {1, 0, 2}, {1, 1, 2}, {0, 1, 2}}, 2, 2, "unit square at distance 2"),
        make_entry("T3i", {{-1, -1, 1}, {1, 0, 1}, {0, 1, 1}}, 3, 1, "triangle with one interior point"),
    };
    return entries;
}

std::optional<FaceCatalogEntry> find_catalog_entry(std::string_view id) {
    for (const auto& e : face_catalog())
        if (e.id == id) return e;
    if (id.size() >= 2 && (id[0] == 'A' || id[0] == 'B')) {
        int n = 0;
        const auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), n);
        if (ec == std::errc() && ptr == id.data() + id.size() && n >= 1 && n <= 1000)
            return id[0] == 'A' ? triangle_a(n) : square_b(n);
    }
    return std::nullopt;
}

std::vector<std::string> verify_catalog() {
    std::vector<std::string> bad;
    for (const auto& e : face_catalog())
        if (e.face.integer_area() != e.ls || integer_distance(e.face) != e.ld) bad.push_back(e.id);
    return bad;
}

LatticeFace face_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::parse_error, std::string("face JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array())
        throw Error(ErrorKind::parse_error, "face JSON needs a \"vertices\" array");
    std::vector<IntVec3> vertices;
    for (const auto& v : doc["vertices"]) {
        if (!v.is_array() || v.size() != 3)
            throw Error(ErrorKind::parse_error, "each vertex must be an array of three integers");
        IntVec3 p;
        Integer* coords[3] = {&p.x, &p.y, &p.z};
        for (int i = 0; i < 3; ++i) {
            if (v[i].is_number_integer()) {
                *coords[i] = Integer(v[i].get<long>());
                continue;
            }
            // Big coordinates may be given as decimal strings.
            if (v[i].is_string()) {
                const Rational r = Rational::parse(v[i].get<std::string>());
                if (r.is_integer()) {
                    *coords[i] = r.numerator();
                    continue;
                }
            }
            throw Error(ErrorKind::parse_error, "vertex coordinates must be integers");
        }
        vertices.push_back(std::move(p));
    }
    return LatticeFace(std::move(vertices));
}

std::string face_to_json(const LatticeFace& face) {
    nlohmann::json vertices = nlohmann::json::array();
    for (const auto& v : face.vertices()) {
        nlohmann::json row = nlohmann::json::array();
        for (const Integer* c : {&v.x, &v.y, &v.z}) {
            if (c->fits_slong_p())
                row.push_back(c->get_si());
            else
                row.push_back(c->get_str());
        }
        vertices.push_back(std::move(row));
    }
    return nlohmann::json{{"vertices", vertices}}.dump();
}

}  // namespace klein
