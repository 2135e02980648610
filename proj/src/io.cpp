#include "lam/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace lam {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

struct Line {
    std::size_t number;
    std::vector<std::string> fields;
};

std::vector<Line> significant_lines(std::istream& in) {
    std::vector<Line> out;
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        const std::string t = trim(raw);
        if (t.empty() || t.front() == '#') continue;
        out.push_back({number, split_fields(t)});
    }
    return out;
}

std::int64_t parse_count(const std::string& text, std::size_t line) {
    std::string_view body = text;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    std::int64_t value = 0;
    auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (body.empty() || ec != std::errc{} || end != body.data() + body.size()) {
        throw ParseError(line, "malformed row: count '" + text + "' is not a non-negative integer");
    }
    if (value < 0) throw ParseError(line, "malformed row: count '" + text + "' is negative");
    return value;
}

template <class V>
struct RawTable {
    std::map<Menu, std::vector<V>> rows;
    std::map<Menu, std::size_t> first_line;
};

template <class V, class ParseValue>
RawTable<V> collect_rows(const Universe& uni, const std::vector<Line>& lines, std::size_t begin,
                         ParseValue&& parse_value) {
    RawTable<V> raw;
    std::map<Menu, std::set<AltIndex>> seen;
    for (std::size_t k = begin; k < lines.size(); ++k) {
        const Line& l = lines[k];
        if (l.fields.size() != 3) {
            throw ParseError(l.number, "malformed row: expected menu,alternative,value");
        }
        Menu menu;
        try {
            menu = parse_menu(uni, l.fields[0]);
        } catch (const InvalidParameter& e) {
            throw ParseError(l.number, std::string("malformed menu: ") + e.what());
        }
        if (!uni.contains(l.fields[1])) {
            throw ParseError(l.number, "unknown alternative '" + l.fields[1] + "'");
        }
        const AltIndex a = uni.index(l.fields[1]);
        if (!menu.contains(a)) {
            throw ParseError(l.number, "alternative '" + l.fields[1] + "' is not in menu {" +
                                           format_menu(uni, menu) + "}");
        }
        if (!seen[menu].insert(a).second) {
            throw ParseError(l.number, "duplicate row for (" + format_menu(uni, menu) + ", " + l.fields[1] + ")");
        }
        auto [it, fresh] = raw.rows.try_emplace(menu, uni.size(), V(0));
        if (fresh) raw.first_line[menu] = l.number;
        it->second[a] = parse_value(l.fields[2], l.number);
    }
    if (raw.rows.empty()) throw ParseError(lines.empty() ? 0 : lines.back().number, "dataset has no rows");
    return raw;
}

Rational exact_value(const std::string& text, std::size_t line) {
    if (!is_rational_literal(text)) {
        throw ParseError(line, "malformed row: exact mode needs an integer or p/q literal, got '" + text + "'");
    }
    try {
        return parse_rational_literal(text);
    } catch (const InvalidParameter& e) {
        throw ParseError(line, std::string("malformed row: ") + e.what());
    }
}

double float_value(const std::string& text, std::size_t line) {
    try {
        return parse_real_literal(text);
    } catch (const InvalidParameter& e) {
        throw ParseError(line, std::string("malformed row: ") + e.what());
    }
}

template <Scalar T>
StochasticChoice<T> build_choice(const Universe& uni, RawTable<T> raw) {
    typename StochasticChoice<T>::Table table;
    for (auto& [menu, row] : raw.rows) {
        const std::size_t line = raw.first_line[menu];
        T sum(0);
        for (AltIndex i : menu.members()) {
            if (row[i] < 0) {
                throw ParseError(line, "negative probability for " + uni.id(i) + " in menu {" +
                                           format_menu(uni, menu) + "}");
            }
            sum += row[i];
        }
        bool ok;
        if constexpr (is_exact_v<T>) {
            ok = sum == 1;
        } else {
            ok = std::abs(sum - 1.0) <= dataset_sum_tol;
        }
        if (!ok) {
            throw ParseError(line, "row-sum violation: probabilities in menu {" + format_menu(uni, menu) +
                                       "} sum to " + to_string(sum) + ", expected 1");
        }
        if constexpr (!is_exact_v<T>) {
            for (AltIndex i : menu.members()) row[i] /= sum;
        }
        table.emplace(menu, std::move(row));
    }
    return StochasticChoice<T>(uni, std::move(table));
}

template <Scalar T>
void write_choice_rows(std::ostream& out, const StochasticChoice<T>& rho) {
    const Universe& uni = rho.universe();
    out << "universe";
    for (const auto& id : uni.ids()) out << ',' << id;
    out << "\nmode,probabilities\nmenu,alternative,value\n";
    for (const auto& [menu, row] : rho.table()) {
        const std::string m = format_menu(uni, menu);
        for (AltIndex i : menu.members()) out << m << ',' << uni.id(i) << ',' << to_string(row[i]) << '\n';
    }
}

// Params -------------------------------------------------------------------

template <Scalar T>
T scalar_from_json(const Json& j, const std::string& what) {
    try {
        if constexpr (is_exact_v<T>) {
            return rational_from_json(j);
        } else {
            return double_from_json(j);
        }
    } catch (const InvalidParameter& e) {
        throw InvalidParameter(what + ": " + e.what());
    }
}

template <Scalar T>
ParamsFile<T> parse_params_impl(std::istream& in) {
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("params file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidParameter("params file must hold a JSON object");
    for (const char* key : {"universe", "anchor", "u", "v", "alpha"}) {
        if (!doc.contains(key)) throw InvalidParameter(std::string("params file lacks '") + key + "'");
    }
    std::vector<std::string> ids;
    if (!doc["universe"].is_array()) throw InvalidParameter("'universe' must be an array of ids");
    for (const auto& id : doc["universe"]) {
        if (!id.is_string()) throw InvalidParameter("'universe' must be an array of ids");
        ids.push_back(id.get<std::string>());
    }
    Universe uni(ids);
    if (!doc["anchor"].is_string()) throw InvalidParameter("'anchor' must be an id");
    const AltIndex anchor = uni.index(doc["anchor"].get<std::string>());

    auto read_vector = [&](const char* key) {
        const Json& obj = doc[key];
        if (!obj.is_object()) throw InvalidParameter(std::string("'") + key + "' must map ids to values");
        for (const auto& item : obj.items()) {
            if (!uni.contains(item.key())) {
                throw InvalidParameter(std::string("'") + key + "' names unknown alternative '" + item.key() + "'");
            }
        }
        std::vector<T> out;
        for (const auto& id : uni.ids()) {
            if (!obj.contains(id)) throw InvalidParameter(std::string("'") + key + "' lacks alternative '" + id + "'");
            out.push_back(scalar_from_json<T>(obj[id], std::string(key) + "." + id));
        }
        if (!near_equal(out[anchor], T(1), is_exact_v<T> ? T(0) : T(1e-12))) {
            throw InvalidParameter(std::string("'") + key + "' must equal 1 at the anchor");
        }
        return out;
    };
    auto u = read_vector("u");
    auto v = read_vector("v");
    T alpha = scalar_from_json<T>(doc["alpha"], "alpha");
    return ParamsFile<T>{uni, LamParams<T>(u, v, alpha, anchor)};
}

// Reports ------------------------------------------------------------------

template <Scalar T>
Json vector_json(const Universe& uni, const std::vector<T>& values) {
    Json out = Json::object();
    for (std::size_t i = 0; i < values.size(); ++i) out[uni.id(i)] = to_json(values[i]);
    return out;
}

template <Scalar T>
Json params_json_impl(const Universe& uni, const LamParams<T>& p) {
    Json out = Json::object();
    out["universe"] = uni.ids();
    out["anchor"] = uni.id(p.anchor());
    out["u"] = vector_json(uni, p.u());
    out["v"] = vector_json(uni, p.v());
    out["alpha"] = to_json(p.alpha());
    return out;
}

template <Scalar T>
Json choice_json_impl(const StochasticChoice<T>& rho) {
    const Universe& uni = rho.universe();
    Json out = Json::array();
    for (const auto& [menu, row] : rho.table()) {
        Json probs = Json::object();
        for (AltIndex i : menu.members()) probs[uni.id(i)] = to_json(row[i]);
        out.push_back(Json{{"menu", format_menu(uni, menu)}, {"probabilities", probs}});
    }
    return out;
}

Json tuple_json(const Universe& uni, const InstabilityTuple& t) {
    return Json{{"x", uni.id(t.x)}, {"y", uni.id(t.y)}, {"S", format_menu(uni, t.s)}, {"T", format_menu(uni, t.t)}};
}

template <Scalar T>
Json regime_json(const Universe& uni, const LamParams<T>& p, const T& tol) {
    auto r = classify_regime(p, tol);
    return Json{{"label", regime_name(r.regime)}, {"ratio_u_over_v", vector_json(uni, r.ratio)}};
}

template <Scalar T>
Json lab_report_impl(const Universe& uni, const LabResult<T>& r) {
    Json out = Json::object();
    out["report"] = "identify-lab";
    out["status"] = lab_status_name(r.status);
    out["mode"] = ScalarTraits<T>::mode_name;
    out["tolerance"] = to_json(r.tol);
    if (!r.reason.empty()) out["reason"] = r.reason;
    if (r.human_utility) out["human_utility"] = vector_json(uni, *r.human_utility);
    if (r.params) {
        out["params"] = params_json_impl(uni, *r.params);
        out["regime"] = regime_json(uni, *r.params, r.tol);
    }
    if (r.alpha_diagnostics) {
        const auto& d = *r.alpha_diagnostics;
        Json diag = Json::object();
        diag["strategy"] = strategy_name(d.strategy);
        diag["alpha"] = to_json(d.alpha);
        diag["raw"] = to_json(d.raw);
        diag["clamped"] = d.clamped;
        diag["r_squared"] = d.r_squared;
        diag["pivot"] = tuple_json(uni, d.pivot);
        Json rows = Json::array();
        for (const auto& ta : d.per_tuple) {
            Json row = tuple_json(uni, ta.tuple);
            row["delta"] = to_json(ta.delta);
            row["phi"] = to_json(ta.phi);
            row["alpha"] = to_json(ta.alpha);
            rows.push_back(std::move(row));
        }
        diag["tuples_used"] = d.per_tuple.size();
        diag["per_tuple"] = std::move(rows);
        out["alpha_diagnostics"] = std::move(diag);
    }
    if (r.recovered_autonomous) out["recovered_autonomous"] = choice_json_impl(*r.recovered_autonomous);
    return out;
}

template <Scalar T>
Json field_report_impl(const Universe& uni, const FieldResult<T>& r) {
    Json out = Json::object();
    out["report"] = "identify-field";
    out["status"] = field_status_name(r.status);
    out["mode"] = ScalarTraits<T>::mode_name;
    out["tolerance"] = to_json(r.tol);
    out["anchor"] = uni.id(r.anchor);
    out["failure"] = field_failure_name(r.failure);
    if (!r.reason.empty()) out["reason"] = r.reason;
    if (r.alpha_pair) out["alpha_pair"] = Json::array({to_json(r.alpha_pair->first), to_json(r.alpha_pair->second)});
    if (r.swap_class) {
        out["class"] = Json::array({params_json_impl(uni, (*r.swap_class)[0]), params_json_impl(uni, (*r.swap_class)[1])});
        out["regime"] = regime_json(uni, (*r.swap_class)[0], r.tol);
    }
    Json alts = Json::array();
    for (const auto& d : r.alternatives) {
        Json a = Json::object();
        a["alternative"] = uni.id(d.alternative);
        a["aligned_coordinate"] = d.aligned_coordinate;
        Json refs = Json::array();
        for (const auto& c : d.per_reference) {
            Json ref = Json::object();
            ref["z"] = uni.id(c.ref_z);
            ref["t"] = uni.id(c.ref_t);
            Json adm = Json::array();
            for (const auto& k : c.admissible) adm.push_back(to_json(k));
            ref["admissible"] = std::move(adm);
            Json rej = Json::array();
            for (const auto& x : c.rejected) {
                Json e = Json::object();
                if (x.value) {
                    e["value"] = to_json(*x.value);
                } else {
                    e["real"] = x.real;
                    e["imag"] = x.imag;
                }
                e["reason"] = rejection_name(x.reason);
                rej.push_back(std::move(e));
            }
            ref["rejected"] = std::move(rej);
            refs.push_back(std::move(ref));
        }
        a["references"] = std::move(refs);
        Json common = Json::array();
        for (const auto& k : d.common) common.push_back(to_json(k));
        a["common"] = std::move(common);
        Json pairs = Json::array();
        for (std::size_t i = 0; i < d.pairs.size(); ++i) {
            const auto& p = d.pairs[i];
            Json e = Json::object();
            e["k1"] = to_json(p.k1);
            e["k2"] = to_json(p.k2);
            e["feasibility"] = feasibility_name(p.implied.feasibility);
            if (p.implied.alpha) {
                e["implied_alpha"] = Json::array({to_json(p.implied.first()), to_json(p.implied.second())});
            } else {
                e["implied_alpha"] = nullptr;
            }
            e["selected"] = d.selected && *d.selected == i;
            pairs.push_back(std::move(e));
        }
        a["pairs"] = std::move(pairs);
        alts.push_back(std::move(a));
    }
    out["alternatives"] = std::move(alts);
    out["consistent_assignments"] = r.consistent_assignments.size();
    return out;
}

}  // namespace

// Datasets -----------------------------------------------------------------

Dataset parse_dataset(std::istream& in, NumberMode mode) {
    const std::vector<Line> lines = significant_lines(in);
    if (lines.size() < 3) {
        throw ParseError(lines.empty() ? 0 : lines.back().number, "missing header (universe, mode, column names)");
    }
    const Line& head = lines[0];
    if (head.fields.front() != "universe") throw ParseError(head.number, "first line must be 'universe,<ids...>'");
    std::optional<Universe> uni;
    try {
        uni.emplace(std::vector<std::string>(head.fields.begin() + 1, head.fields.end()));
    } catch (const InvalidParameter& e) {
        throw ParseError(head.number, e.what());
    }
    const Line& mode_line = lines[1];
    if (mode_line.fields.size() != 2 || mode_line.fields[0] != "mode" ||
        (mode_line.fields[1] != "probabilities" && mode_line.fields[1] != "counts")) {
        throw ParseError(mode_line.number, "second line must be 'mode,probabilities' or 'mode,counts'");
    }
    const Line& cols = lines[2];
    if (cols.fields != std::vector<std::string>{"menu", "alternative", "value"}) {
        throw ParseError(cols.number, "third line must be 'menu,alternative,value'");
    }

    if (mode_line.fields[1] == "counts") {
        auto raw = collect_rows<std::int64_t>(*uni, lines, 3, parse_count);
        for (const auto& [menu, row] : raw.rows) {
            std::int64_t total = 0;
            for (auto c : row) total += c;
            if (total == 0) {
                throw ParseError(raw.first_line[menu], "menu {" + format_menu(*uni, menu) + "} has no observations");
            }
        }
        return ChoiceCounts(*uni, std::move(raw.rows));
    }
    if (mode == NumberMode::exact) {
        return build_choice<Rational>(*uni, collect_rows<Rational>(*uni, lines, 3, exact_value));
    }
    return build_choice<double>(*uni, collect_rows<double>(*uni, lines, 3, float_value));
}

Dataset read_dataset(const std::filesystem::path& path, NumberMode mode) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open " + path.string());
    return parse_dataset(in, mode);
}

ChoiceCounts read_counts(const std::filesystem::path& path) {
    Dataset d = read_dataset(path, NumberMode::floating);
    if (auto* c = std::get_if<ChoiceCounts>(&d)) return std::move(*c);
    throw InvalidParameter(path.string() + ": expected a counts dataset");
}

void write_dataset(std::ostream& out, const StochasticChoice<double>& rho) { write_choice_rows(out, rho); }
void write_dataset(std::ostream& out, const StochasticChoice<Rational>& rho) { write_choice_rows(out, rho); }

void write_dataset(std::ostream& out, const ChoiceCounts& counts) {
    const Universe& uni = counts.universe();
    out << "universe";
    for (const auto& id : uni.ids()) out << ',' << id;
    out << "\nmode,counts\nmenu,alternative,value\n";
    for (const auto& [menu, row] : counts.table()) {
        const std::string m = format_menu(uni, menu);
        for (AltIndex i : menu.members()) out << m << ',' << uni.id(i) << ',' << row[i] << '\n';
    }
}

// Params -------------------------------------------------------------------

ParamsFile<double> parse_params_double(std::istream& in) { return parse_params_impl<double>(in); }
ParamsFile<Rational> parse_params_exact(std::istream& in) { return parse_params_impl<Rational>(in); }

void write_params(std::ostream& out, const Universe& universe, const LamParams<double>& params) {
    out << params_json_impl(universe, params).dump(2) << '\n';
}

void write_params(std::ostream& out, const Universe& universe, const LamParams<Rational>& params) {
    out << params_json_impl(universe, params).dump(2) << '\n';
}

// Scalars ------------------------------------------------------------------

Json to_json(const Rational& x) { return to_string(x); }

Json to_json(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational_literal(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return Rational(BigInt(j.get<std::uint64_t>()));
    throw InvalidParameter("exact mode needs an integer or a \"p/q\" string, got " + j.dump());
}

double double_from_json(const Json& j) {
    if (j.is_string()) return parse_real_literal(j.get<std::string>());
    if (j.is_number()) return j.get<double>();
    throw InvalidParameter("expected a number, got " + j.dump());
}

Json params_json(const Universe& universe, const LamParams<double>& params) {
    return params_json_impl(universe, params);
}
Json params_json(const Universe& universe, const LamParams<Rational>& params) {
    return params_json_impl(universe, params);
}
Json choice_json(const StochasticChoice<double>& rho) { return choice_json_impl(rho); }
Json choice_json(const StochasticChoice<Rational>& rho) { return choice_json_impl(rho); }

Json lab_report(const Universe& universe, const LabResult<double>& result) {
    return lab_report_impl(universe, result);
}
Json lab_report(const Universe& universe, const LabResult<Rational>& result) {
    return lab_report_impl(universe, result);
}
Json field_report(const Universe& universe, const FieldResult<double>& result) {
    return field_report_impl(universe, result);
}
Json field_report(const Universe& universe, const FieldResult<Rational>& result) {
    return field_report_impl(universe, result);
}

Json axiom_report(const Universe& universe, const AxiomReport& report, NumberMode mode, const Json& tol) {
    Json out = Json::object();
    out["report"] = "check-axioms";
    out["status"] = report.consistent ? "lam-consistent" : "not-lam-consistent";
    out["mode"] = mode_name(mode);
    out["tolerance"] = tol;
    out["consistent"] = report.consistent;
    Json axioms = Json::array();
    for (std::size_t k = 0; k < report.axioms.size(); ++k) {
        const auto& a = report.axioms[k];
        Json e = Json::object();
        e["axiom"] = k + 1;
        e["name"] = a.name;
        e["pass"] = a.pass;
        if (a.witness) {
            const auto& w = *a.witness;
            Json wj = Json::object();
            if (!w.function.empty()) wj["function"] = w.function;
            if (w.tuple) wj["tuple"] = tuple_json(universe, *w.tuple);
            if (w.other_tuple) wj["other_tuple"] = tuple_json(universe, *w.other_tuple);
            if (w.menu) wj["menu"] = format_menu(universe, *w.menu);
            if (w.alternative) wj["alternative"] = universe.id(*w.alternative);
            wj["detail"] = w.detail;
            e["witness"] = std::move(wj);
        }
        axioms.push_back(std::move(e));
    }
    out["axioms"] = std::move(axioms);
    return out;
}

Json fit_report(const Universe& universe, const FitResult& r, const FitOptions& opts, int starts,
                std::uint64_t seed) {
    Json out = Json::object();
    out["report"] = "fit";
    out["status"] = fit_status_name(r.status);
    out["mode"] = "float";
    out["tolerance"] = Json{{"tol_ll", opts.tol_ll},
                            {"max_iter", opts.max_iter},
                            {"inner_tol", opts.inner.tol},
                            {"inner_max_iter", opts.inner.max_iter},
                            {"boundary_tol", opts.boundary_tol},
                            {"accelerate", opts.accelerate}};
    out["generator"] = "mt19937_64";
    out["seed"] = seed;
    out["starts"] = starts;
    out["params"] = params_json_impl(universe, r.params);
    out["alpha_pair"] = Json::array({r.params.alpha(), 1.0 - r.params.alpha()});
    out["regime"] = regime_json(universe, r.params, 1e-6);
    out["log_likelihood"] = to_json(r.log_likelihood);
    out["iterations"] = r.iterations;
    out["converged"] = r.converged;
    out["min_increment"] = to_json(r.min_increment);
    out["monotone"] = r.min_increment >= -1e-10;
    out["best_start"] = r.best_start;
    Json per = Json::array();
    for (const auto& s : r.starts) {
        per.push_back(Json{{"start", s.pooled ? "pooled" : "random"},
                           {"log_likelihood", to_json(s.log_likelihood)},
                           {"iterations", s.iterations},
                           {"converged", s.converged},
                           {"degenerate", s.degenerate},
                           {"alpha", s.final_params.alpha()}});
    }
    out["per_start"] = std::move(per);
    out["empirical_rho"] = choice_json_impl(r.empirical_rho);
    return out;
}

}  // namespace lam
