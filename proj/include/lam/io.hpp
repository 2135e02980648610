#pragma once

// Dataset files, parameter files and JSON reports.
//
// Dataset (comma separated, '#' starts a comment line):
//
//   universe,x,y,z
//   mode,probabilities          (or: mode,counts)
//   menu,alternative,value
//   x;y;z,x,1/3
//   ...
//
// Menu members may be listed in any order. Members of a listed menu without
// a row get value 0. Writers emit menus in Menu order with members in
// universe order, one row per member.
//
// Parameters (JSON):
//
//   {"universe": ["x","y","z"], "anchor": "x",
//    "u": {"x": "1", "y": "2/3", "z": "1/3"},
//    "v": {"x": "1", "y": "2", "z": "3"}, "alpha": "1/2"}
//
// Values are strings holding p/q or decimal literals, or JSON numbers.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>

#include <json.hpp>

#include "lam/choice.hpp"
#include "lam/estimate.hpp"
#include "lam/field.hpp"
#include "lam/lab.hpp"
#include "lam/regime.hpp"

namespace lam {

using Json = nlohmann::ordered_json;

enum class NumberMode { floating, exact };

inline const char* mode_name(NumberMode m) { return m == NumberMode::exact ? "exact" : "float"; }

// Row sums of probability datasets must be within this of 1 in float mode.
inline constexpr double dataset_sum_tol = 1e-6;

using Dataset = std::variant<StochasticChoice<double>, StochasticChoice<Rational>, ChoiceCounts>;

// Probability datasets become StochasticChoice<Rational> in exact mode
// (rational literals only) and StochasticChoice<double> otherwise; float rows
// are rescaled to sum to 1 after validation. Counts ignore the mode.
// Errors are ParseError carrying the offending line.
Dataset parse_dataset(std::istream& in, NumberMode mode);
Dataset read_dataset(const std::filesystem::path& path, NumberMode mode);

// Reads a probability dataset as StochasticChoice<T>.
template <Scalar T>
StochasticChoice<T> read_choice(const std::filesystem::path& path) {
    Dataset d = read_dataset(path, is_exact_v<T> ? NumberMode::exact : NumberMode::floating);
    if (auto* rho = std::get_if<StochasticChoice<T>>(&d)) return std::move(*rho);
    throw InvalidParameter(path.string() + ": expected a probability dataset");
}

ChoiceCounts read_counts(const std::filesystem::path& path);

void write_dataset(std::ostream& out, const StochasticChoice<double>& rho);
void write_dataset(std::ostream& out, const StochasticChoice<Rational>& rho);
void write_dataset(std::ostream& out, const ChoiceCounts& counts);

template <Scalar T>
struct ParamsFile {
    Universe universe;
    LamParams<T> params;
};

// The anchor's u and v entries must equal 1.
ParamsFile<double> parse_params_double(std::istream& in);
ParamsFile<Rational> parse_params_exact(std::istream& in);
void write_params(std::ostream& out, const Universe& universe, const LamParams<double>& params);
void write_params(std::ostream& out, const Universe& universe, const LamParams<Rational>& params);

// Scalars in reports: rationals as "p/q" strings, doubles as numbers.
Json to_json(const Rational& x);
Json to_json(double x);
Rational rational_from_json(const Json& j);
double double_from_json(const Json& j);

Json params_json(const Universe& universe, const LamParams<double>& params);
Json params_json(const Universe& universe, const LamParams<Rational>& params);
Json choice_json(const StochasticChoice<double>& rho);
Json choice_json(const StochasticChoice<Rational>& rho);

Json lab_report(const Universe& universe, const LabResult<double>& result);
Json lab_report(const Universe& universe, const LabResult<Rational>& result);
Json field_report(const Universe& universe, const FieldResult<double>& result);
Json field_report(const Universe& universe, const FieldResult<Rational>& result);
Json axiom_report(const Universe& universe, const AxiomReport& report, NumberMode mode, const Json& tol);
Json fit_report(const Universe& universe, const FitResult& result, const FitOptions& opts, int starts,
                std::uint64_t seed);

}  // namespace lam
