#include "reebmm/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "reebmm/error.hpp"

namespace reebmm {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string_view> tokens;
};

std::string_view strip_comment(std::string_view s) {
    if (auto pos = s.find('#'); pos != std::string_view::npos) s = s.substr(0, pos);
    return s;
}

std::vector<std::string_view> split(std::string_view s, std::string_view delims) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && delims.find(s[i]) != std::string_view::npos) ++i;
        std::size_t j = i;
        while (j < s.size() && delims.find(s[j]) == std::string_view::npos) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double to_double(std::string_view token, std::size_t line) {
    double value = 0.0;
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError(line, "expected a number, got '" + std::string(token) + "'");
    }
    return value;
}

long long to_integer(std::string_view token, std::size_t line) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError(line, "expected an integer, got '" + std::string(token) + "'");
    }
    return value;
}

/// Significant (non-blank, comment-stripped) whitespace-separated lines.
class LineReader {
public:
    explicit LineReader(std::istream& in) {
        std::string raw;
        std::size_t number = 0;
        while (std::getline(in, raw)) {
            ++number;
            storage_.push_back(std::move(raw));
            numbers_.push_back(number);
        }
    }

    bool next(Line& line, std::string_view delims = " \t\r") {
        while (pos_ < storage_.size()) {
            const std::string_view text = strip_comment(storage_[pos_]);
            const std::size_t number = numbers_[pos_++];
            auto tokens = split(text, delims);
            if (!tokens.empty()) {
                line = {number, std::move(tokens)};
                return true;
            }
        }
        return false;
    }

    std::size_t last_line() const { return numbers_.empty() ? 0 : numbers_.back(); }

private:
    std::vector<std::string> storage_;
    std::vector<std::size_t> numbers_;
    std::size_t pos_ = 0;
};

}  // namespace

SimplicialComplex parse_off(std::istream& in) {
    LineReader reader(in);
    Line line;
    if (!reader.next(line)) throw ParseError(0, "empty OFF input");
    if (line.tokens.front() != "OFF") {
        throw ParseError(line.number, "missing OFF header");
    }
    std::vector<std::string_view> counts(line.tokens.begin() + 1, line.tokens.end());
    std::size_t counts_line = line.number;
    if (counts.empty()) {
        if (!reader.next(line)) throw ParseError(reader.last_line(), "missing vertex/face counts");
        counts = line.tokens;
        counts_line = line.number;
    }
    if (counts.size() < 2) throw ParseError(counts_line, "counts line needs vertex and face counts");
    const long long num_vertices = to_integer(counts[0], counts_line);
    const long long num_faces = to_integer(counts[1], counts_line);
    if (num_vertices < 0 || num_faces < 0) throw ParseError(counts_line, "negative element count");

    ComplexBuilder builder(3);
    for (long long i = 0; i < num_vertices; ++i) {
        if (!reader.next(line)) throw ParseError(reader.last_line(), "unexpected end of input in vertex list");
        if (line.tokens.size() < 3) throw ParseError(line.number, "vertex line needs 3 coordinates");
        const double xyz[3] = {to_double(line.tokens[0], line.number), to_double(line.tokens[1], line.number),
                               to_double(line.tokens[2], line.number)};
        builder.add_vertex(std::span<const double>(xyz, 3));
    }
    for (long long i = 0; i < num_faces; ++i) {
        if (!reader.next(line)) throw ParseError(reader.last_line(), "unexpected end of input in face list");
        const long long arity = to_integer(line.tokens[0], line.number);
        if (arity < 1 || static_cast<long long>(line.tokens.size()) < arity + 1) {
            throw ParseError(line.number, "face line has an invalid vertex count");
        }
        std::vector<VertexId> face;
        for (long long k = 0; k < arity; ++k) {
            const long long idx = to_integer(line.tokens[1 + k], line.number);
            if (idx < 0 || idx >= num_vertices) {
                throw ParseError(line.number, "vertex index " + std::to_string(idx) + " out of range");
            }
            face.push_back(static_cast<VertexId>(idx));
        }
        try {
            if (face.size() <= 3) {
                builder.add_simplex(face);
            } else {
                for (std::size_t k = 1; k + 1 < face.size(); ++k) {
                    builder.add_simplex({face[0], face[k], face[k + 1]});
                }
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError(line.number, e.what());
        }
    }
    return builder.build();
}

SimplicialComplex parse_off(const std::string& text) {
    std::istringstream in(text);
    return parse_off(in);
}

void write_off(std::ostream& out, const SimplicialComplex& complex) {
    // Top-dimensional simplices only; OFF cannot carry tetrahedra.
    if (complex.dimension() > 2) throw std::invalid_argument("OFF output supports dimension <= 2");
    std::vector<std::vector<VertexId>> faces;
    std::vector<char> covered_vertex(complex.num_vertices(), 0);
    std::vector<char> covered_edge(complex.edges().size(), 0);
    for (const auto& t : complex.triangles()) {
        faces.push_back({t[0], t[1], t[2]});
        covered_edge[complex.find_edge(t[0], t[1])] = 1;
        covered_edge[complex.find_edge(t[0], t[2])] = 1;
        covered_edge[complex.find_edge(t[1], t[2])] = 1;
    }
    for (std::size_t e = 0; e < complex.edges().size(); ++e) {
        const auto& edge = complex.edges()[e];
        covered_vertex[edge[0]] = covered_vertex[edge[1]] = 1;
        if (!covered_edge[e]) faces.push_back({edge[0], edge[1]});
    }
    for (std::size_t v = 0; v < complex.num_vertices(); ++v) {
        if (!covered_vertex[v]) faces.push_back({static_cast<VertexId>(v)});
    }

    out << "OFF\n" << complex.num_vertices() << ' ' << faces.size() << " 0\n";
    out.precision(17);
    for (std::size_t v = 0; v < complex.num_vertices(); ++v) {
        auto c = complex.coords(static_cast<VertexId>(v));
        for (int k = 0; k < 3; ++k) {
            out << (k < complex.coord_dim() ? c[k] : 0.0) << (k == 2 ? '\n' : ' ');
        }
    }
    for (const auto& face : faces) {
        out << face.size();
        for (VertexId v : face) out << ' ' << v;
        out << '\n';
    }
}

EmpiricalMeasure parse_weighted_points(std::istream& in) {
    LineReader reader(in);
    Line line;
    std::vector<double> coords;
    std::vector<double> weights;
    std::size_t width = 0;
    while (reader.next(line, ",")) {
        std::vector<std::string_view> fields;
        for (auto token : line.tokens) fields.push_back(trim(token));
        fields.erase(std::remove(fields.begin(), fields.end(), std::string_view{}), fields.end());
        if (fields.empty()) continue;
        if (width == 0) {
            width = fields.size();
            if (width < 2 || width > 4) {
                throw ParseError(line.number, "expected 1 to 3 coordinates followed by a weight");
            }
        } else if (fields.size() != width) {
            throw ParseError(line.number, "ragged row: expected " + std::to_string(width) + " fields, got " +
                                              std::to_string(fields.size()));
        }
        for (std::size_t k = 0; k + 1 < width; ++k) coords.push_back(to_double(fields[k], line.number));
        const double w = to_double(fields.back(), line.number);
        if (w < 0.0) throw ParseError(line.number, "negative weight");
        weights.push_back(w);
    }
    if (weights.empty()) throw ParseError(0, "no weighted points");
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw ParseError(0, "total weight is zero");
    return EmpiricalMeasure(static_cast<int>(width - 1), std::move(coords), std::move(weights));
}

EmpiricalMeasure parse_weighted_points(const std::string& text) {
    std::istringstream in(text);
    return parse_weighted_points(in);
}

void write_weighted_points(std::ostream& out, const EmpiricalMeasure& mu) {
    out.precision(17);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (double c : mu.point(i)) out << c << ',';
        out << mu.mass(i) << '\n';
    }
}

ScalarField parse_field_values(std::istream& in) {
    LineReader reader(in);
    Line line;
    std::vector<double> values;
    while (reader.next(line, ", \t\r")) {
        for (auto token : line.tokens) values.push_back(to_double(token, line.number));
    }
    return ScalarField(std::move(values));
}

nlohmann::json complex_to_json(const SimplicialComplex& complex, const ScalarField* field) {
    nlohmann::json doc;
    auto& vertices = doc["vertices"] = nlohmann::json::array();
    for (std::size_t v = 0; v < complex.num_vertices(); ++v) {
        auto c = complex.coords(static_cast<VertexId>(v));
        vertices.push_back({{"id", v}, {"coords", std::vector<double>(c.begin(), c.end())}});
    }
    auto& simplices = doc["simplices"] = nlohmann::json::object();
    simplices["1"] = nlohmann::json::array();
    for (const auto& e : complex.edges()) simplices["1"].push_back(e);
    simplices["2"] = nlohmann::json::array();
    for (const auto& t : complex.triangles()) simplices["2"].push_back(t);
    simplices["3"] = nlohmann::json::array();
    for (const auto& t : complex.tetrahedra()) simplices["3"].push_back(t);
    if (field != nullptr) {
        require_field_on(complex, *field);
        doc["field"] = std::vector<double>(field->values().begin(), field->values().end());
    }
    return doc;
}

ComplexDocument complex_from_json(const nlohmann::json& doc) {
    try {
        const auto& vertices = doc.at("vertices");
        const std::size_t n = vertices.size();
        if (n == 0) throw ParseError(0, "complex has no vertices");
        const int dim = static_cast<int>(vertices.at(0).at("coords").size());
        std::vector<std::vector<double>> coords(n);
        std::vector<char> seen(n, 0);
        for (const auto& v : vertices) {
            const auto id = v.at("id").get<long long>();
            if (id < 0 || static_cast<std::size_t>(id) >= n || seen[id]) {
                throw ParseError(0, "vertex ids must be a permutation of 0..n-1");
            }
            seen[id] = 1;
            coords[id] = v.at("coords").get<std::vector<double>>();
            if (static_cast<int>(coords[id].size()) != dim) throw ParseError(0, "ragged vertex coordinates");
        }
        ComplexBuilder builder(dim);
        for (const auto& c : coords) builder.add_vertex(c);
        if (doc.contains("simplices")) {
            for (const auto& [key, list] : doc.at("simplices").items()) {
                for (const auto& s : list) {
                    const auto ids = s.get<std::vector<long long>>();
                    std::vector<VertexId> simplex;
                    for (auto id : ids) {
                        if (id < 0 || static_cast<std::size_t>(id) >= n) {
                            throw ParseError(0, "simplex references unknown vertex " + std::to_string(id));
                        }
                        simplex.push_back(static_cast<VertexId>(id));
                    }
                    if (std::to_string(simplex.size() - 1) != key) {
                        throw ParseError(0, "simplex of the wrong size under key \"" + key + "\"");
                    }
                    builder.add_simplex(simplex);
                }
            }
        }
        ComplexDocument out{builder.build(), std::nullopt};
        if (doc.contains("field")) {
            ScalarField f(doc.at("field").get<std::vector<double>>());
            require_field_on(out.complex, f);
            out.field = std::move(f);
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("malformed complex JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(0, e.what());
    }
}

nlohmann::json field_to_json(const ScalarField& field) {
    return {{"vertex_values", std::vector<double>(field.values().begin(), field.values().end())}};
}

ScalarField field_from_json(const nlohmann::json& doc) {
    try {
        return ScalarField(doc.at("vertex_values").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("malformed field JSON: ") + e.what());
    }
}

namespace {

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    return in;
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

ComplexDocument load_complex(const std::string& path) {
    auto in = open_or_throw(path);
    if (ends_with(path, ".json")) {
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(0, std::string("invalid JSON: ") + e.what());
        }
        return complex_from_json(doc);
    }
    return {parse_off(in), std::nullopt};
}

EmpiricalMeasure load_weighted_points(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_weighted_points(in);
}

}  // namespace reebmm
