// Command-line driver: fragment checking, solving, encoding, relativization
// and the serial-vs-parallel kernel benchmark. JSON goes to stdout,
// diagnostics to stderr; exit codes are documented in the README.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "stratisat/encoders.hpp"
#include "stratisat/errors.hpp"
#include "stratisat/json_io.hpp"
#include "stratisat/parser.hpp"
#include "stratisat/search.hpp"
#include "stratisat/solver.hpp"

namespace {

constexpr int kExitSat = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitResource = 2;
constexpr int kExitNotInFragment = 3;
constexpr int kExitUsage = 64;

using stratisat::FormulaPtr;
using stratisat::Variable;

std::string read_input(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

FormulaPtr parse_or_exit(const std::string& path) {
    stratisat::ParseResult res = stratisat::parse_file(read_input(path));
    if (!res.ok()) {
        for (const auto& d : res.diagnostics)
            std::cerr << path << ": " << stratisat::format_diagnostic(d) << "\n";
        std::exit(kExitUsage);
    }
    return res.formula;
}

std::uint64_t default_budget() {
    if (const char* env = std::getenv("STRATISAT_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0)
            return v;
        std::cerr << "warning: ignoring malformed STRATISAT_BUDGET\n";
    }
    return 20'000'000;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

Variable sort0_var(const std::string& n) { return {n, stratisat::Sort::Individual}; }
Variable sort1_var(const std::string& n) { return {n, stratisat::Sort::Set}; }
Variable sort2_var(const std::string& n) { return {n, stratisat::Sort::Collection}; }

int run_check(const std::string& path, std::uint64_t budget) {
    FormulaPtr f = parse_or_exit(path);
    stratisat::NormalizeOptions opts;
    opts.validity_budget = budget;
    stratisat::FragmentReport rep = stratisat::check_fragment(f, opts);
    std::cout << stratisat::fragment_report_to_json(rep).dump(2) << "\n";
    if (rep.resource_limited)
        return kExitResource;
    return rep.in_fragment ? kExitSat : kExitNotInFragment;
}

int run_solve(const std::string& path, const stratisat::SolveOptions& opts) {
    FormulaPtr f = parse_or_exit(path);
    try {
        stratisat::SatResult r = stratisat::decide(f, opts);
        std::cout << stratisat::result_to_json(r).dump(2) << "\n";
        switch (r.kind) {
        case stratisat::SatResult::Kind::Sat: return kExitSat;
        case stratisat::SatResult::Kind::Unsat: return kExitUnsat;
        case stratisat::SatResult::Kind::ResourceLimit: return kExitResource;
        }
    } catch (const stratisat::NotInFragmentError& e) {
        std::cerr << "input is outside the restricted fragment; failed obligations:\n";
        for (const auto& o : e.report.obligations)
            if (!o.valid)
                std::cerr << "  " << stratisat::render_formula(o.obligation) << "\n";
        std::cout << stratisat::fragment_report_to_json(e.report).dump(2) << "\n";
        return kExitNotInFragment;
    }
    return kExitUsage;
}

struct EncodeArgs {
    std::string construct;
    std::vector<std::string> args;
};

FormulaPtr build_construct(const EncodeArgs& e) {
    const auto& a = e.args;
    auto need = [&](std::size_t n) {
        if (a.size() != n)
            throw stratisat::WellFormednessError("encode " + e.construct + ": expected " +
                                                 std::to_string(n) + " arguments");
    };
    auto at_least = [&](std::size_t n) {
        if (a.size() < n)
            throw stratisat::WellFormednessError("encode " + e.construct + ": expected at least " +
                                                 std::to_string(n) + " arguments");
    };
    auto set_args = [&](std::size_t from) {
        std::vector<Variable> out;
        for (std::size_t i = from; i < a.size(); ++i)
            out.push_back(sort1_var(a[i]));
        return out;
    };
    using namespace stratisat;
    if (e.construct == "empty0") { need(1); return build_empty0(sort1_var(a[0])); }
    if (e.construct == "univ0") { need(1); return build_universe0(sort1_var(a[0])); }
    if (e.construct == "compl0") { need(2); return build_complement0(sort1_var(a[0]), sort1_var(a[1])); }
    if (e.construct == "union0") { need(3); return build_union0(sort1_var(a[0]), sort1_var(a[1]), sort1_var(a[2])); }
    if (e.construct == "inter0") { need(3); return build_intersection0(sort1_var(a[0]), sort1_var(a[1]), sort1_var(a[2])); }
    if (e.construct == "diff0") { need(3); return build_difference0(sort1_var(a[0]), sort1_var(a[1]), sort1_var(a[2])); }
    if (e.construct == "subset") { need(2); return build_subset(sort1_var(a[0]), sort1_var(a[1])); }
    if (e.construct == "card") {
        need(3);
        CardinalityKind kind;
        if (a[1] == "le") kind = CardinalityKind::AtMost;
        else if (a[1] == "lt") kind = CardinalityKind::LessThan;
        else if (a[1] == "ge") kind = CardinalityKind::AtLeast;
        else if (a[1] == "eq") kind = CardinalityKind::Exactly;
        else throw WellFormednessError("encode card: kind must be le|lt|ge|eq");
        return build_cardinality(kind, sort1_var(a[0]), std::stoi(a[2]));
    }
    if (e.construct == "empty1") { need(1); return build_empty1(sort2_var(a[0])); }
    if (e.construct == "univ1") { need(1); return build_universe1(sort2_var(a[0])); }
    if (e.construct == "compl1") { need(2); return build_complement1(sort2_var(a[0]), sort2_var(a[1])); }
    if (e.construct == "union1") { need(3); return build_union1(sort2_var(a[0]), sort2_var(a[1]), sort2_var(a[2])); }
    if (e.construct == "inter1") { need(3); return build_intersection1(sort2_var(a[0]), sort2_var(a[1]), sort2_var(a[2])); }
    if (e.construct == "diff1") { need(3); return build_difference1(sort2_var(a[0]), sort2_var(a[1]), sort2_var(a[2])); }
    if (e.construct == "enum1") { at_least(2); return build_enumeration1(sort2_var(a[0]), set_args(1)); }
    if (e.construct == "pow") { need(2); return build_pow(sort2_var(a[0]), sort1_var(a[1])); }
    if (e.construct == "pow-le") { need(3); return build_pow_atmost(sort2_var(a[0]), sort1_var(a[1]), std::stoi(a[2])); }
    if (e.construct == "pow-eq") { need(3); return build_pow_exactly(sort2_var(a[0]), sort1_var(a[1]), std::stoi(a[2])); }
    if (e.construct == "pow-ge") { need(3); return build_pow_atleast(sort2_var(a[0]), sort1_var(a[1]), std::stoi(a[2])); }
    if (e.construct == "pow-lt") { need(3); return build_pow_lessthan(sort2_var(a[0]), sort1_var(a[1]), std::stoi(a[2])); }
    if (e.construct == "pow-star") { at_least(2); return build_pow_star(sort2_var(a[0]), set_args(1)); }
    if (e.construct == "ucp-enum") { at_least(2); return build_ucp_enum(sort2_var(a[0]), set_args(1)); }
    if (e.construct == "ucp-disjoint") { at_least(2); return build_ucp_disjoint(sort2_var(a[0]), set_args(1)); }
    if (e.construct == "ucp-same") { need(3); return build_ucp_same(sort2_var(a[0]), sort1_var(a[1]), std::stoi(a[2])); }
    if (e.construct == "ucp-partition") { at_least(2); return build_ucp_partition(sort2_var(a[0]), set_args(1)); }
    throw stratisat::WellFormednessError("encode: unknown construct '" + e.construct + "'");
}

int run_encode(const EncodeArgs& e, const std::string& report, int n_max) {
    if (!report.empty()) {
        if (report != "ucp")
            throw stratisat::WellFormednessError("encode --report: only 'ucp' is available");
        std::cout << "n,bell,len_enum,len_partition\n";
        for (const auto& row : stratisat::length_report(n_max))
            std::cout << row.n << "," << row.bell << "," << row.len_enum << ","
                      << row.len_partition << "\n";
        return 0;
    }
    std::cout << stratisat::render(build_construct(e));
    return 0;
}

int run_relativize(const std::string& path, const std::string& model_path, std::uint64_t budget) {
    FormulaPtr f = parse_or_exit(path);
    stratisat::Interpretation M =
        stratisat::model_from_json(nlohmann::json::parse(read_input(model_path)));
    if (!stratisat::evaluate(M, f)) {
        std::cerr << "the given model does not satisfy the formula\n";
        return kExitUnsat;
    }
    auto conjs = stratisat::normalize(f);
    for (const auto& conj : conjs) {
        if (!stratisat::evaluate(M, conj.as_formula()))
            continue;
        stratisat::UniverseReport rep = stratisat::build_universe(M, conj, budget);
        stratisat::RelativizedModel rel = stratisat::relativize(M, rep.params());
        nlohmann::json out;
        out["report"] = stratisat::universe_report_to_json(rep);
        out["model"] = stratisat::model_to_json(rel.model);
        out["element_map"] = nlohmann::json(rel.element_map);
        out["conjunction"] = stratisat::render_formula(conj.as_formula());
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cerr << "no normalized conjunction is satisfied by the model\n";
    return kExitUnsat;
}

int run_bench(const std::string& dir, std::uint64_t budget) {
    using clock = std::chrono::steady_clock;
    // Kernel rows: the serial reference against the OpenMP scan.
    std::cout << "kernel,m,space,models,serial_ms,parallel_ms\n";
    Variable x = sort0_var("x"), y = sort0_var("y");
    Variable X = sort1_var("X"), Y = sort1_var("Y");
    FormulaPtr member = stratisat::mk_and(
        stratisat::mk_atom(stratisat::atom_mem01(x, X)),
        stratisat::mk_implies(stratisat::mk_atom(stratisat::atom_mem01(y, X)),
                              stratisat::mk_atom(stratisat::atom_mem01(y, Y))));
    Variable z = sort0_var("z");
    FormulaPtr covered = stratisat::mk_forall0(
        {z}, stratisat::mk_implies(stratisat::mk_atom(stratisat::atom_mem01(z, X)),
                                   stratisat::mk_atom(stratisat::atom_mem01(z, Y))));
    struct Row {
        const char* name;
        FormulaPtr f;
        int m;
    };
    std::vector<Row> rows;
    for (int m : {6, 7, 8}) // space m^2 * 4^m
        rows.push_back({"membership", member, m});
    for (int m : {8, 10, 12}) // space 4^m
        rows.push_back({"subset-universal", covered, m});
    for (const auto& row : rows) {
        auto t0 = clock::now();
        std::uint64_t serial = stratisat::count_models(row.f, row.m, budget, false);
        double serial_ms = ms_since(t0);
        t0 = clock::now();
        std::uint64_t parallel = stratisat::count_models(row.f, row.m, budget, true);
        double parallel_ms = ms_since(t0);
        if (serial != parallel) {
            std::cerr << "kernel mismatch on " << row.name << " at m=" << row.m << "\n";
            return kExitResource;
        }
        stratisat::CompiledFormula cf(row.f);
        stratisat::ModelSpace space(cf, row.m);
        std::cout << row.name << "," << row.m << "," << space.size() << "," << serial << ","
                  << serial_ms << "," << parallel_ms << "\n";
    }
    if (dir.empty())
        return 0;
    // Corpus rows: end-to-end timings per file.
    std::cout << "\nfile,parse_ms,check_ms,fragment,solve_ms,result\n";
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".3lqst")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        auto t0 = clock::now();
        stratisat::ParseResult res = stratisat::parse_file(read_input(file.string()));
        double parse_ms = ms_since(t0);
        if (!res.ok()) {
            std::cout << file.filename().string() << "," << parse_ms << ",,parse-error,,\n";
            continue;
        }
        t0 = clock::now();
        stratisat::FragmentReport rep = stratisat::check_fragment(res.formula);
        double check_ms = ms_since(t0);
        std::string verdict = rep.in_fragment ? "in" : "out";
        std::string result = "skipped";
        double solve_ms = 0;
        if (rep.in_fragment) {
            stratisat::SolveOptions opts;
            opts.budget = budget;
            t0 = clock::now();
            stratisat::SatResult r = stratisat::decide(res.formula, opts);
            solve_ms = ms_since(t0);
            result = r.kind == stratisat::SatResult::Kind::Sat     ? "sat"
                     : r.kind == stratisat::SatResult::Kind::Unsat ? "unsat"
                                                                   : "resource-limit";
        }
        std::cout << file.filename().string() << "," << parse_ms << "," << check_ms << ","
                  << verdict << "," << solve_ms << "," << result << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"decision engine for a three-sorted quantified set-theoretic language"};
    app.require_subcommand(1);

    std::uint64_t budget = default_budget();
    int jobs = 0;
    std::uint64_t seed = 1;
    app.add_option("--budget", budget, "resource budget (grounding literals / conflicts / scans)");
    app.add_option("--jobs", jobs, "worker threads for parallel stages (0: library default)");
    app.add_option("--seed", seed, "seed for randomized auxiliaries");

    auto* check = app.add_subcommand("check", "fragment membership report");
    std::string check_file;
    check->add_option("file", check_file, "input .3lqst file")->required();

    auto* solve = app.add_subcommand("solve", "decide satisfiability");
    std::string solve_file, dimacs_dir;
    int max_m = 0;
    bool no_symmetry = false, force = false;
    solve->add_option("file", solve_file, "input .3lqst file")->required();
    solve->add_option("--max-m", max_m, "cap the searched domain size");
    solve->add_option("--emit-dimacs", dimacs_dir, "dump each grounded instance to this directory");
    solve->add_flag("--no-symmetry", no_symmetry, "disable symmetry breaking");
    solve->add_flag("--force", force, "skip the fragment membership gate");

    auto* encode = app.add_subcommand("encode", "emit a set-theoretic construct as a formula");
    EncodeArgs enc;
    std::string report;
    int n_max = 5;
    encode->add_option("construct", enc.construct, "construct name");
    encode->add_option("args", enc.args, "variable names / integer parameters");
    encode->add_option("--report", report, "emit a CSV growth report instead (ucp)");
    encode->add_option("--n-max", n_max, "largest n for --report");

    auto* relativize = app.add_subcommand("relativize", "small-universe construction for a model");
    std::string rel_file, rel_model;
    relativize->add_option("file", rel_file, "input .3lqst file")->required();
    relativize->add_option("--model", rel_model, "model JSON file")->required();

    auto* bench = app.add_subcommand("bench", "kernel and corpus timing table");
    std::string bench_dir;
    bench->add_option("dir", bench_dir, "corpus directory of .3lqst files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

#ifdef _OPENMP
    if (jobs > 0)
        omp_set_num_threads(jobs);
#endif
    (void)seed;

    try {
        if (check->parsed())
            return run_check(check_file, budget);
        if (solve->parsed()) {
            stratisat::SolveOptions opts;
            opts.max_m = max_m;
            opts.budget = budget;
            opts.symmetry = !no_symmetry;
            opts.enforce_fragment = !force;
            opts.dimacs_dir = dimacs_dir;
            return run_solve(solve_file, opts);
        }
        if (encode->parsed()) {
            if (report.empty() && enc.construct.empty()) {
                std::cerr << "encode: construct name required (or --report)\n";
                return kExitUsage;
            }
            return run_encode(enc, report, n_max);
        }
        if (relativize->parsed())
            return run_relativize(rel_file, rel_model, budget);
        if (bench->parsed())
            return run_bench(bench_dir, budget);
    } catch (const stratisat::ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const stratisat::WellFormednessError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
