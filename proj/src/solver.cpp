#include "stratisat/solver.hpp"

#include <filesystem>
#include <fstream>

#include "stratisat/errors.hpp"

namespace stratisat {

CnfInstance ground_conjunction(const NormalizedConjunction& conj, int m,
                               const GroundOptions& opts) {
    return ground(conj.as_formula(), m, opts);
}

namespace {

// Defaults for variables a conjunction does not mention, so the verified
// model assigns every free variable of the original formula.
Interpretation extend_to(const Interpretation& M, const VariableSets& fv) {
    Interpretation out = M;
    for (const auto& v : fv.v0)
        out.assign0.emplace(v.name, 0);
    for (const auto& v : fv.v1)
        out.assign1.emplace(v.name, 0);
    for (const auto& v : fv.v2)
        out.assign2.emplace(v.name, std::set<Mask>{});
    return out;
}

void dump_dimacs(const std::string& dir, std::size_t conj_index, int m, const CnfInstance& cnf) {
    std::filesystem::create_directories(dir);
    std::filesystem::path p =
        std::filesystem::path(dir) /
        ("conj" + std::to_string(conj_index) + "_m" + std::to_string(m) + ".cnf");
    std::ofstream os(p);
    os << export_dimacs(cnf);
}

} // namespace

SatResult decide(const FormulaPtr& f, const SolveOptions& opts) {
    NormalizeOptions nopts;
    nopts.dnf_literal_cap = opts.dnf_literal_cap;
    nopts.validity_budget = opts.budget;

    if (opts.enforce_fragment) {
        FragmentReport rep = check_fragment(f, nopts);
        if (rep.resource_limited) {
            SatResult r;
            r.kind = SatResult::Kind::ResourceLimit;
            r.stage = "fragment-check";
            r.detail = rep.note.empty() ? "obligation check exceeded its budget" : rep.note;
            return r;
        }
        if (!rep.in_fragment)
            throw NotInFragmentError(std::move(rep));
    }

    std::vector<NormalizedConjunction> conjunctions;
    try {
        conjunctions = normalize(f, nopts);
    } catch (const ResourceLimitError& e) {
        SatResult r;
        r.kind = SatResult::Kind::ResourceLimit;
        r.stage = e.stage();
        r.detail = e.detail();
        return r;
    }

    SatResult result;
    if (conjunctions.empty()) {
        // every disjunct of the DNF was propositionally contradictory
        result.kind = SatResult::Kind::Unsat;
        return result;
    }

    const VariableSets original_free = free_variables(f);
    std::vector<std::uint64_t> bounds;
    std::uint64_t max_bound = 0;
    for (const auto& conj : conjunctions) {
        std::uint64_t b = domain_bound(conj);
        if (opts.max_m > 0 && b > static_cast<std::uint64_t>(opts.max_m)) {
            b = static_cast<std::uint64_t>(opts.max_m);
            result.bound_complete = false;
        }
        bounds.push_back(b);
        max_bound = std::max(max_bound, b);
    }

    GroundOptions gopts;
    gopts.literal_budget = opts.budget;
    gopts.symmetry_break = opts.symmetry;
    DpllOptions dopts;
    dopts.conflict_budget = opts.budget;

    std::vector<bool> truncated(conjunctions.size(), false);
    bool any_limit = false;
    std::string limit_stage, limit_detail;

    // Increasing domain sizes, every conjunction per size: the first model
    // found is a smallest one over all branches.
    for (std::uint64_t m = 1; m <= max_bound; ++m) {
        for (std::size_t i = 0; i < conjunctions.size(); ++i) {
            if (truncated[i] || m > bounds[i])
                continue;
            CnfInstance cnf;
            std::optional<std::vector<bool>> assignment;
            try {
                cnf = ground_conjunction(conjunctions[i], static_cast<int>(m), gopts);
                if (!opts.dimacs_dir.empty())
                    dump_dimacs(opts.dimacs_dir, i, static_cast<int>(m), cnf);
                assignment = dpll(cnf, dopts);
            } catch (const ResourceLimitError& e) {
                // Larger sizes only get more expensive for this conjunction.
                truncated[i] = true;
                any_limit = true;
                limit_stage = e.stage();
                limit_detail = e.detail();
                continue;
            }
            if (!assignment)
                continue;
            Interpretation M = reconstruct_model(cnf, *assignment);
            if (!evaluate(M, conjunctions[i].as_formula()))
                throw InternalError("decide: sat answer failed conjunction re-verification");
            Interpretation full = extend_to(M, original_free);
            if (!evaluate(full, f))
                throw InternalError("decide: sat answer failed re-verification on the input");
            result.kind = SatResult::Kind::Sat;
            result.model = std::move(full);
            result.m = static_cast<int>(m);
            return result;
        }
    }

    if (any_limit) {
        result.kind = SatResult::Kind::ResourceLimit;
        result.stage = limit_stage;
        result.detail = limit_detail;
        return result;
    }
    result.kind = SatResult::Kind::Unsat;
    return result;
}

} // namespace stratisat
