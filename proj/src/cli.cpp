#include "lam/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "lam/io.hpp"

namespace lam {

namespace {

struct Outcome {
    Json report;
    int code = exit_ok;
};

template <Scalar T>
T parse_tol(const std::string& text) {
    if (text.empty()) return default_tol<T>();
    T tol;
    if constexpr (is_exact_v<T>) {
        tol = parse_rational_literal(text);
    } else {
        tol = parse_real_literal(text);
    }
    if (tol < 0) throw InvalidParameter("--tol must be non-negative");
    return tol;
}

std::vector<Menu> parse_menu_list(const Universe& uni, const std::string& spec) {
    std::vector<Menu> menus;
    if (spec == "all") return all_menus(uni.size(), 2);
    std::vector<std::string> parts;
    if (!spec.empty() && spec.front() == '@') {
        std::ifstream in(spec.substr(1));
        if (!in) throw InvalidParameter("cannot open menu list " + spec.substr(1));
        std::string line;
        while (std::getline(in, line)) {
            line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == '\r' || c == ' '; }),
                       line.end());
            if (!line.empty() && line.front() != '#') parts.push_back(line);
        }
    } else {
        std::stringstream ss(spec);
        std::string part;
        while (std::getline(ss, part, ',')) parts.push_back(part);
    }
    for (const auto& p : parts) menus.push_back(parse_menu(uni, p));
    if (menus.empty()) throw InvalidParameter("--menus selects no menus");
    return menus;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(path + " is not valid JSON: " + e.what());
    }
}

// Subcommands ----------------------------------------------------------------

struct SimulateArgs {
    std::string params, menus, out;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
};

Outcome run_simulate(const SimulateArgs& a) {
    std::ifstream in(a.params);
    if (!in) throw InvalidParameter("cannot open " + a.params);
    ParamsFile<double> pf = parse_params_double(in);
    const auto menus = parse_menu_list(pf.universe, a.menus);
    ChoiceCounts counts = simulate_counts(pf.universe, pf.params, menus, a.n, a.seed);
    std::ofstream out(a.out);
    if (!out) throw InvalidParameter("cannot write " + a.out);
    write_dataset(out, counts);
    Json report = Json::object();
    report["report"] = "simulate";
    report["status"] = "ok";
    report["generator"] = "mt19937_64";
    report["seed"] = a.seed;
    report["n_per_menu"] = a.n;
    Json ms = Json::array();
    for (const auto& [m, row] : counts.table()) ms.push_back(format_menu(pf.universe, m));
    report["menus"] = std::move(ms);
    report["params"] = params_json(pf.universe, pf.params);
    report["out"] = a.out;
    return {std::move(report), exit_ok};
}

struct LabArgs {
    std::string ai, human, anchor, tol, strategy = "least-squares";
    bool exact = false;
};

template <Scalar T>
Outcome run_lab_mode(const LabArgs& a) {
    auto ai = read_choice<T>(a.ai);
    auto h = read_choice<T>(a.human);
    LabOptions<T> opts;
    opts.tol = parse_tol<T>(a.tol);
    opts.strategy = a.strategy == "single-tuple" ? AlphaStrategy::single_tuple : AlphaStrategy::least_squares;
    auto result = identify_lab(ai, h, ai.universe().index(a.anchor), opts);
    const int code = result.status == LabStatus::point_identified ? exit_ok : exit_not_identified;
    return {lab_report(ai.universe(), result), code};
}

struct FieldArgs {
    std::string ai, anchor, tol;
    double root_tol = 1e-8;
    bool exact = false;
};

template <Scalar T>
Outcome run_field_mode(const FieldArgs& a) {
    auto ai = read_choice<T>(a.ai);
    FieldOptions<T> opts;
    opts.tol = parse_tol<T>(a.tol);
    opts.root_rel_tol = a.root_tol;
    auto result = identify_field(ai, ai.universe().index(a.anchor), opts);
    const int code = result.status == FieldStatus::identified_up_to_swap ? exit_ok : exit_not_identified;
    return {field_report(ai.universe(), result), code};
}

struct AxiomArgs {
    std::string ai, human, tol;
    bool exact = false, strict = false;
};

template <Scalar T>
Outcome run_axioms_mode(const AxiomArgs& a) {
    auto ai = read_choice<T>(a.ai);
    auto h = read_choice<T>(a.human);
    const T tol = parse_tol<T>(a.tol);
    auto report = check_axioms(ai, h, tol, a.strict ? AxiomScan::strict : AxiomScan::slope);
    const NumberMode mode = is_exact_v<T> ? NumberMode::exact : NumberMode::floating;
    return {axiom_report(ai.universe(), report, mode, to_json(tol)),
            report.consistent ? exit_ok : exit_not_identified};
}

struct FitArgs {
    std::string data, anchor;
    int starts = 5;
    std::uint64_t seed = 0;
    FitOptions opts{};
};

Outcome run_fit(FitArgs a) {
    ChoiceCounts counts = read_counts(a.data);
    a.opts.anchor = a.anchor.empty() ? 0 : counts.universe().index(a.anchor);
    FitResult r = fit_mle(counts, a.starts, a.opts, a.seed);
    const int code = r.status == FitStatus::degenerate_fit ? exit_not_identified : exit_ok;
    return {fit_report(counts.universe(), r, a.opts, a.starts, a.seed), code};
}

struct GapArgs {
    std::string lab, field;
};

Outcome run_gap(const GapArgs& a) {
    const Json lab = read_json_file(a.lab);
    const Json field = read_json_file(a.field);
    Json report = Json::object();
    report["report"] = "deception-gap";
    auto undefined = [&](const std::string& why) {
        report["status"] = "gap-undefined";
        report["reason"] = why;
        return Outcome{report, exit_not_identified};
    };
    if (lab.value("report", "") != "identify-lab") throw InvalidParameter(a.lab + " is not an identify-lab report");
    if (field.value("report", "") != "identify-field") {
        throw InvalidParameter(a.field + " is not an identify-field report");
    }
    if (lab.value("status", "") != "point-identified") {
        return undefined("laboratory report is " + lab.value("status", std::string("?")));
    }
    if (field.value("status", "") != "identified-up-to-swap") {
        return undefined("field report is " + field.value("status", std::string("?")));
    }
    const Json& la = lab.at("params").at("alpha");
    const Json& fa = field.at("alpha_pair").at(0);
    const bool exact = lab.value("mode", "") == "exact" && field.value("mode", "") == "exact";
    report["status"] = "ok";
    report["mode"] = exact ? "exact" : "float";
    report["tolerance"] = exact ? to_json(Rational(0)) : to_json(0.0);
    if (exact) {
        const Rational l = rational_from_json(la), f = rational_from_json(fa);
        report["lab_alpha"] = to_json(l);
        report["field_alpha_pair"] = Json::array({to_json(f), to_json(Rational(1 - f))});
        report["gap"] = to_json(deception_gap(l, f));
    } else {
        const double l = double_from_json(la), f = double_from_json(fa);
        report["lab_alpha"] = l;
        report["field_alpha_pair"] = Json::array({f, 1.0 - f});
        report["gap"] = deception_gap(l, f);
    }
    return {std::move(report), exit_ok};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Luce alignment model: simulation, identification and estimation", "lam_cli"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Draw choice counts from a parameter file");
    c_sim->add_option("--params", sim.params, "Parameter file (JSON)")->required();
    c_sim->add_option("--menus", sim.menus, "'all', comma list of menus like x;y,x;y;z, or @file")->required();
    c_sim->add_option("--n", sim.n, "Draws per menu")->required()->check(CLI::PositiveNumber);
    c_sim->add_option("--seed", sim.seed, "Generator seed")->required();
    c_sim->add_option("--out", sim.out, "Output counts dataset")->required();

    LabArgs lab;
    auto* c_lab = app.add_subcommand("identify-lab", "Identify (u, v, alpha) from AI and human data");
    c_lab->add_option("--ai", lab.ai, "AI probability dataset")->required();
    c_lab->add_option("--human", lab.human, "Human probability dataset")->required();
    c_lab->add_option("--anchor", lab.anchor, "Anchor alternative")->required();
    c_lab->add_flag("--exact", lab.exact, "Exact rational arithmetic");
    c_lab->add_option("--tol", lab.tol, "Zero tolerance");
    c_lab->add_option("--strategy", lab.strategy, "Compliance estimator")
        ->check(CLI::IsMember({"least-squares", "single-tuple"}));

    FieldArgs fld;
    auto* c_fld = app.add_subcommand("identify-field", "Identify the swap class from AI data alone");
    c_fld->add_option("--ai", fld.ai, "AI probability dataset")->required();
    c_fld->add_option("--anchor", fld.anchor, "Anchor alternative")->required();
    c_fld->add_flag("--exact", fld.exact, "Exact rational arithmetic");
    c_fld->add_option("--tol", fld.tol, "Zero tolerance");
    c_fld->add_option("--root-tol", fld.root_tol, "Relative tolerance for root merging and poles (float mode)");

    AxiomArgs ax;
    auto* c_ax = app.add_subcommand("check-axioms", "Test the five LAM axioms");
    c_ax->add_option("--ai", ax.ai, "AI probability dataset")->required();
    c_ax->add_option("--human", ax.human, "Human probability dataset")->required();
    c_ax->add_flag("--exact", ax.exact, "Exact rational arithmetic");
    c_ax->add_option("--tol", ax.tol, "Zero tolerance");
    c_ax->add_flag("--strict", ax.strict, "Pairwise proportionality scan");

    FitArgs fit;
    auto* c_fit = app.add_subcommand("fit", "Maximum likelihood fit by multi-start EM");
    c_fit->add_option("--data", fit.data, "Counts dataset")->required();
    c_fit->add_option("--starts", fit.starts, "Random starts")->required()->check(CLI::PositiveNumber);
    c_fit->add_option("--seed", fit.seed, "Generator seed")->required();
    c_fit->add_option("--anchor", fit.anchor, "Anchor alternative (default: first)");
    c_fit->add_option("--max-iter", fit.opts.max_iter, "EM iteration cap")->check(CLI::PositiveNumber);
    c_fit->add_option("--tol-ll", fit.opts.tol_ll, "Relative likelihood improvement threshold");

    GapArgs gap;
    auto* c_gap = app.add_subcommand("deception-gap", "Distance between lab and field compliance");
    c_gap->add_option("--lab", gap.lab, "identify-lab report")->required();
    c_gap->add_option("--field", gap.field, "identify-field report")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return exit_input_error;
    }

    try {
        Outcome o;
        if (*c_sim) {
            o = run_simulate(sim);
        } else if (*c_lab) {
            o = lab.exact ? run_lab_mode<Rational>(lab) : run_lab_mode<double>(lab);
        } else if (*c_fld) {
            o = fld.exact ? run_field_mode<Rational>(fld) : run_field_mode<double>(fld);
        } else if (*c_ax) {
            o = ax.exact ? run_axioms_mode<Rational>(ax) : run_axioms_mode<double>(ax);
        } else if (*c_fit) {
            o = run_fit(fit);
        } else {
            o = run_gap(gap);
        }
        out << o.report.dump(2) << '\n';
        return o.code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
}

}  // namespace lam
