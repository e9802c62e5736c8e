#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "reebmm/complex.hpp"
#include "reebmm/measure.hpp"

namespace reebmm {

/// Reads an ASCII OFF mesh. Faces with 1 or 2 indices become vertices or edges,
/// polygons with more than 3 are fan-triangulated. Throws ParseError with the line number.
SimplicialComplex parse_off(std::istream& in);
SimplicialComplex parse_off(const std::string& text);
void write_off(std::ostream& out, const SimplicialComplex& complex);

/// Reads CSV rows "x[,y[,z]],weight". Blank lines and '#' comments are skipped.
EmpiricalMeasure parse_weighted_points(std::istream& in);
EmpiricalMeasure parse_weighted_points(const std::string& text);
void write_weighted_points(std::ostream& out, const EmpiricalMeasure& mu);

/// One value per line (or comma separated). Throws ParseError.
ScalarField parse_field_values(std::istream& in);

/// {"vertices":[{"id","coords"}],"simplices":{"1":[[u,v],...],"2":...,"3":...},"field":[...]}
struct ComplexDocument {
    SimplicialComplex complex;
    std::optional<ScalarField> field;
};

nlohmann::json complex_to_json(const SimplicialComplex& complex, const ScalarField* field = nullptr);
ComplexDocument complex_from_json(const nlohmann::json& doc);

/// {"vertex_values":[...]}
nlohmann::json field_to_json(const ScalarField& field);
ScalarField field_from_json(const nlohmann::json& doc);

/// Loads a complex from `path`, choosing OFF or JSON by extension (.off / .json).
ComplexDocument load_complex(const std::string& path);
EmpiricalMeasure load_weighted_points(const std::string& path);

}  // namespace reebmm
