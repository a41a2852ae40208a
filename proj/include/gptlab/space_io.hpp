#pragma once

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "gptlab/state_space.hpp"

namespace gptlab {

// State-space file: {"name": str, "dimension": int, "arithmetic": "exact"|"float",
// "unit": [scalar...], "vertices": [[scalar...]...]} with scalars "p/q" strings
// (exact) or numbers (float). Unknown fields are rejected.

namespace detail {

inline Rational json_to_rational(const nlohmann::json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw ParseError("exact scalar must be an integer or a \"p/q\" string, got " + j.dump());
}

inline double json_to_double(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return Exact::to_double(parse_rational(j.get<std::string>()));
    throw ParseError("float scalar must be a number, got " + j.dump());
}

template <class B, class Conv>
StateSpace<B> space_from_json(const nlohmann::json& j, Conv conv) {
    StateSpace<B> s;
    s.name = j.at("name").get<std::string>();
    s.dim = j.at("dimension").get<int>();
    const auto& unit = j.at("unit");
    const auto& verts = j.at("vertices");
    if (!unit.is_array() || static_cast<int>(unit.size()) != s.dim)
        throw ParseError("field 'unit' must be an array of length 'dimension'");
    if (!verts.is_array() || verts.empty())
        throw ParseError("field 'vertices' must be a nonempty array");
    s.unit = Vec<B>(s.dim);
    for (int i = 0; i < s.dim; ++i) s.unit(i) = conv(unit[i]);
    s.vertices = Mat<B>(static_cast<int>(verts.size()), s.dim);
    for (size_t v = 0; v < verts.size(); ++v) {
        if (!verts[v].is_array() || static_cast<int>(verts[v].size()) != s.dim)
            throw ParseError("vertex " + std::to_string(v) + " has wrong length");
        for (int i = 0; i < s.dim; ++i) s.vertices(static_cast<int>(v), i) = conv(verts[v][i]);
    }
    s.degenerate = s.vertices.rows() < 2;
    return s;
}

}  // namespace detail

inline AnySpace load_space(const std::string& path, double eps = 1e-9) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    static const std::set<std::string> known = {"name", "dimension", "arithmetic", "unit", "vertices"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ParseError("unknown field '" + it.key() + "'");
    std::string arith = j.at("arithmetic").get<std::string>();
    AnySpace result = [&]() -> AnySpace {
        if (arith == "exact")
            return detail::space_from_json<Exact>(j, detail::json_to_rational);
        if (arith == "float") {
            auto s = detail::space_from_json<Approx>(j, detail::json_to_double);
            s.backend.eps = eps;
            return s;
        }
        throw ParseError("field 'arithmetic' must be \"exact\" or \"float\"");
    }();
    std::visit([](const auto& s) { validate(s); }, result);
    return result;
}

inline void save_space(const AnySpace& space, const std::string& path) {
    nlohmann::json j;
    std::visit(
        [&](const auto& s) {
            using B = std::decay_t<decltype(s.backend)>;
            j["name"] = s.name;
            j["dimension"] = s.dim;
            j["arithmetic"] = B::is_exact ? "exact" : "float";
            auto scalar = [](const typename B::Value& v) -> nlohmann::json {
                if constexpr (B::is_exact) return format_rational(v);
                else return v;
            };
            nlohmann::json unit = nlohmann::json::array();
            for (int i = 0; i < s.dim; ++i) unit.push_back(scalar(s.unit(i)));
            j["unit"] = unit;
            nlohmann::json verts = nlohmann::json::array();
            for (int v = 0; v < s.vertices.rows(); ++v) {
                nlohmann::json row = nlohmann::json::array();
                for (int i = 0; i < s.dim; ++i) row.push_back(scalar(s.vertices(v, i)));
                verts.push_back(row);
            }
            j["vertices"] = verts;
        },
        space);
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << j.dump(2) << "\n";
}

/// Resolves `square`, `ngon:N`, `simplex:N`, `cube:N`, or a file path.
inline AnySpace resolve_space(const std::string& spec, double eps = 1e-9) {
    auto param = [&](const std::string& prefix) -> std::optional<int> {
        if (spec.rfind(prefix + ":", 0) != 0) return std::nullopt;
        try {
            return std::stoi(spec.substr(prefix.size() + 1));
        } catch (const std::exception&) {
            throw BadParameter("bad parameter in spec '" + spec + "'");
        }
    };
    if (spec == "square") return make_square();
    if (auto n = param("ngon")) return make_ngon(*n, eps);
    if (auto n = param("simplex")) return make_simplex(*n);
    if (auto n = param("cube")) return make_cube(*n);
    return load_space(spec, eps);
}

}  // namespace gptlab
