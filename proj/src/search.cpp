#include "stratisat/search.hpp"

#include <atomic>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stratisat/errors.hpp"

namespace stratisat {

namespace {

// Multiplies with overflow detection; the candidate space must fit uint64.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        throw ResourceLimitError("model-space", "candidate space exceeds 2^64");
    return a * b;
}

std::uint64_t pow_u64(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exp; ++i)
        out = checked_mul(out, base);
    return out;
}

} // namespace

ModelSpace::ModelSpace(const CompiledFormula& cf, int m) : cf_(&cf), m_(m) {
    if (m < 1 || m > kMaxDomain)
        throw EvalError("domain size out of range: " + std::to_string(m));
    std::size_t n0 = cf.free_of(Sort::Individual).size();
    std::size_t n1 = cf.free_of(Sort::Set).size();
    std::size_t n2 = cf.free_of(Sort::Collection).size();
    radix0_ = static_cast<std::uint64_t>(m);
    if (m >= 63)
        throw ResourceLimitError("model-space", "domain too large for subset radix");
    radix1_ = std::uint64_t{1} << m;
    if (n2 > 0 && m > 6)
        throw ResourceLimitError("model-space",
                                 "sort-2 enumeration needs 2^(2^m) candidates; refuse m > 6");
    radix2_ = n2 > 0 ? pow_u64(2, radix1_) : 1;
    weight1_ = pow_u64(radix2_, n2);
    weight0_ = checked_mul(weight1_, pow_u64(radix1_, n1));
    size_ = checked_mul(weight0_, pow_u64(radix0_, n0));
}

void ModelSpace::load(std::uint64_t index, EvalEnv& env) const {
    // Least significant digits belong to the *last* variable of sort 2, so
    // the first sort-0 variable ends up most significant.
    std::size_t n0 = cf_->free_of(Sort::Individual).size();
    std::size_t n1 = cf_->free_of(Sort::Set).size();
    std::size_t n2 = cf_->free_of(Sort::Collection).size();
    for (std::size_t i = n2; i-- > 0;) {
        env.v2[i].small = true;
        env.v2[i].big = nullptr;
        env.v2[i].bits = index % radix2_;
        index /= radix2_;
    }
    for (std::size_t i = n1; i-- > 0;) {
        env.v1[i] = static_cast<Mask>(index % radix1_);
        index /= radix1_;
    }
    for (std::size_t i = n0; i-- > 0;) {
        env.v0[i] = static_cast<int>(index % radix0_);
        index /= radix0_;
    }
}

Interpretation ModelSpace::decode(std::uint64_t index) const {
    EvalEnv env = cf_->blank_env(m_);
    load(index, env);
    Interpretation M;
    M.m = m_;
    const auto& f0 = cf_->free_of(Sort::Individual);
    const auto& f1 = cf_->free_of(Sort::Set);
    const auto& f2 = cf_->free_of(Sort::Collection);
    for (std::size_t i = 0; i < f0.size(); ++i)
        M.assign0[f0[i].name] = env.v0[i];
    for (std::size_t i = 0; i < f1.size(); ++i)
        M.assign1[f1[i].name] = env.v1[i];
    for (std::size_t i = 0; i < f2.size(); ++i) {
        std::set<Mask> val;
        for (Mask s = 0; s <= env.full; ++s)
            if (env.v2[i].contains(s))
                val.insert(s);
        M.assign2[f2[i].name] = std::move(val);
    }
    return M;
}

void for_each_model(const FormulaPtr& f, int m, std::uint64_t budget,
                    const std::function<bool(const Interpretation&)>& fn) {
    CompiledFormula cf(f);
    ModelSpace space(cf, m);
    EvalEnv env = cf.blank_env(m);
    for (std::uint64_t i = 0; i < space.size(); ++i) {
        if (i >= budget)
            throw ResourceLimitError("model-search",
                                     "scanned " + std::to_string(i) + " candidates at m=" +
                                         std::to_string(m));
        space.load(i, env);
        if (cf.eval(env)) {
            if (!fn(space.decode(i)))
                return;
        }
    }
}

std::vector<Interpretation> enumerate_models(const FormulaPtr& f, int m, std::uint64_t budget,
                                             std::size_t max_models) {
    std::vector<Interpretation> out;
    if (max_models == 0)
        return out;
    for_each_model(f, m, budget, [&](const Interpretation& M) {
        out.push_back(M);
        return out.size() < max_models;
    });
    return out;
}

namespace {

constexpr std::uint64_t kBlock = 1 << 16;

std::optional<std::uint64_t> first_index_parallel(const CompiledFormula& cf, const ModelSpace& space,
                                                  std::uint64_t budget) {
    const std::uint64_t n = space.size();
    EvalEnv proto = cf.blank_env(space.domain_size());
    for (std::uint64_t base = 0; base < n; base += kBlock) {
        const std::uint64_t end = std::min({n, base + kBlock, budget});
        std::uint64_t best = UINT64_MAX;
#ifdef _OPENMP
#pragma omp parallel
        {
            EvalEnv env = proto;
            std::uint64_t local = UINT64_MAX;
#pragma omp for nowait schedule(static)
            for (std::int64_t i = static_cast<std::int64_t>(base); i < static_cast<std::int64_t>(end); ++i) {
                if (local != UINT64_MAX)
                    continue;
                space.load(static_cast<std::uint64_t>(i), env);
                if (cf.eval(env))
                    local = static_cast<std::uint64_t>(i);
            }
#pragma omp critical
            best = std::min(best, local);
        }
#else
        EvalEnv env = proto;
        for (std::uint64_t i = base; i < end; ++i) {
            space.load(i, env);
            if (cf.eval(env)) {
                best = i;
                break;
            }
        }
#endif
        if (best != UINT64_MAX)
            return best;
        if (end == budget && end < n)
            throw ResourceLimitError("model-search",
                                     "scanned " + std::to_string(end) + " candidates at m=" +
                                         std::to_string(space.domain_size()));
    }
    return std::nullopt;
}

std::optional<std::uint64_t> first_index_serial(const CompiledFormula& cf, const ModelSpace& space,
                                                std::uint64_t budget) {
    EvalEnv env = cf.blank_env(space.domain_size());
    for (std::uint64_t i = 0; i < space.size(); ++i) {
        if (i >= budget)
            throw ResourceLimitError("model-search",
                                     "scanned " + std::to_string(i) + " candidates at m=" +
                                         std::to_string(space.domain_size()));
        space.load(i, env);
        if (cf.eval(env))
            return i;
    }
    return std::nullopt;
}

} // namespace

std::optional<Interpretation> first_model(const FormulaPtr& f, int m, std::uint64_t budget,
                                          bool parallel) {
    CompiledFormula cf(f);
    ModelSpace space(cf, m);
    auto idx = parallel ? first_index_parallel(cf, space, budget)
                        : first_index_serial(cf, space, budget);
    if (!idx)
        return std::nullopt;
    return space.decode(*idx);
}

std::uint64_t count_models(const FormulaPtr& f, int m, std::uint64_t budget, bool parallel) {
    CompiledFormula cf(f);
    ModelSpace space(cf, m);
    const std::uint64_t n = space.size();
    if (n > budget)
        throw ResourceLimitError("model-count",
                                 "space of " + std::to_string(n) + " candidates exceeds budget");
    std::uint64_t count = 0;
    if (parallel) {
#ifdef _OPENMP
        EvalEnv proto = cf.blank_env(m);
#pragma omp parallel
        {
            EvalEnv env = proto;
            std::uint64_t local = 0;
#pragma omp for nowait schedule(static)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
                space.load(static_cast<std::uint64_t>(i), env);
                if (cf.eval(env))
                    ++local;
            }
#pragma omp atomic
            count += local;
        }
        return count;
#endif
    }
    EvalEnv env = cf.blank_env(m);
    for (std::uint64_t i = 0; i < n; ++i) {
        space.load(i, env);
        if (cf.eval(env))
            ++count;
    }
    return count;
}

std::optional<Interpretation> countermodel_upto(const FormulaPtr& f, int m_max,
                                                std::uint64_t budget, bool parallel) {
    FormulaPtr neg = mk_not(f);
    for (int m = 1; m <= m_max; ++m) {
        auto M = first_model(neg, m, budget, parallel);
        if (M)
            return M;
    }
    return std::nullopt;
}

bool is_valid_upto(const FormulaPtr& f, int m_max, std::uint64_t budget, bool parallel) {
    return !countermodel_upto(f, m_max, budget, parallel).has_value();
}

} // namespace stratisat
