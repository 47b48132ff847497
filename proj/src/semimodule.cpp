#include "kdv/semimodule.hpp"

#include <algorithm>
#include <numeric>

#include "kdv/errors.hpp"

namespace kdv {

ValueSemimodule lambda_from_basis(const std::vector<long long>& values, long long n) {
    ValueSemimodule lam;
    lam.n = n;
    lam.class_min.assign(static_cast<size_t>(n), -1);
    for (long long v : values) {
        if (v <= 0) throw InputError("lambda_from_basis: values must be positive");
        long long c = v % n;
        long long& slot = lam.class_min[static_cast<size_t>(c)];
        if (slot != -1) throw InputError("lambda_from_basis: values congruent mod n");
        slot = v;
    }
    for (long long v : lam.class_min)
        if (v == -1) throw InputError("lambda_from_basis: a congruence class is missing");
    return lam;
}

SgContext make_sg_context(const std::vector<long long>& sg_gens) {
    if (sg_gens.empty()) throw InputError("empty semigroup generator list");
    SgContext ctx;
    ctx.gens = sg_gens;
    ctx.e_seq.push_back(sg_gens[0]);
    for (size_t j = 1; j < sg_gens.size(); ++j)
        ctx.e_seq.push_back(std::gcd(ctx.e_seq.back(), sg_gens[j]));
    if (ctx.e_seq.back() != 1)
        throw InputError("semigroup generators do not have gcd 1");
    // beta_1 = betabar_1, beta_j = betabar_j - n_{j-1} betabar_{j-1} + beta_{j-1}
    for (size_t j = 1; j < sg_gens.size(); ++j) {
        if (j == 1) {
            ctx.betas.push_back(sg_gens[1]);
        } else {
            long long nj = ctx.e_seq[j - 2] / ctx.e_seq[j - 1];
            ctx.betas.push_back(sg_gens[j] - nj * sg_gens[j - 1] + ctx.betas.back());
        }
    }
    ctx.sg = make_semigroup(sg_gens);
    return ctx;
}

namespace {

long long mod(long long a, long long m) { return ((a % m) + m) % m; }

bool in_sg0(const SgContext& ctx, long long m) { // membership in S union {0}
    return m == 0 || (m > 0 && ctx.sg.contains(m));
}

// chains k <= bb_{a_1} < bb_{b_1} <= bb_{a_2} < ... over generator indices
bool c_chain_search(const SgContext& ctx, long long k, long long rest, size_t from) {
    if (in_sg0(ctx, rest)) return true;
    size_t g = ctx.gens.size() - 1;
    for (size_t a = from; a <= g; ++a) {
        if (k > ctx.gens[a]) continue;
        for (size_t bidx = a + 1; bidx <= g; ++bidx) {
            long long step = ctx.gens[bidx] - ctx.gens[a];
            if (step > rest) continue;
            // the next pair must start at or above b
            if (c_chain_search(ctx, k + step, rest - step, bidx)) return true;
        }
    }
    return false;
}

} // namespace

bool closure_member(const std::vector<long long>& S, CollectionKind kind, long long m,
                    const SgContext& ctx) {
    long long n = ctx.gens[0];
    size_t g = ctx.gens.size() - 1;
    for (long long k : S) {
        if (k > m) continue;
        switch (kind) {
        case CollectionKind::CX:
            if ((m - k) % n == 0) return true;
            break;
        case CollectionKind::S:
            if (in_sg0(ctx, m - k)) return true;
            break;
        case CollectionKind::CW: {
            if (in_sg0(ctx, m - k)) return true;
            for (size_t a = 1; a <= g; ++a) {
                if (k > ctx.gens[a]) continue;
                if (mod(k - ctx.betas[a - 1], ctx.e_seq[a - 1]) != 0) continue;
                for (size_t bn = a + 1; bn <= g; ++bn) {
                    long long rest = m - k - (ctx.gens[bn] - ctx.gens[a]);
                    if (in_sg0(ctx, rest)) return true;
                }
            }
            break;
        }
        case CollectionKind::C:
            if (c_chain_search(ctx, k, m - k, 1)) return true;
            break;
        }
    }
    return false;
}

std::vector<long long> minimal_generators(const ValueSemimodule& lam, CollectionKind kind,
                                          const SgContext& ctx) {
    long long bound = lam.max_class_min();
    std::vector<long long> below; // members of the semimodule below the scan point
    std::vector<long long> gens;
    for (long long k = 1; k <= bound; ++k) {
        if (!lam.contains(k)) continue;
        if (!closure_member(below, kind, k, ctx)) gens.push_back(k);
        below.push_back(k);
    }
    return gens;
}

std::vector<size_t> basis_of_forms(const CxBasis& basis,
                                   const std::vector<FormReport>& reports,
                                   CollectionKind kind, const SgContext& ctx) {
    ValueSemimodule lam = lambda_from_basis(basis.values(), basis.n);
    std::vector<long long> gens = minimal_generators(lam, kind, ctx);
    std::vector<size_t> out;
    for (long long v : gens) {
        bool found = false;
        for (size_t i = 0; i < basis.entries.size(); ++i) {
            if (basis.entries[i].value == Value::finite(v)) {
                out.push_back(i);
                found = true;
                break;
            }
        }
        if (!found)
            throw InternalError("minimal generator " + std::to_string(v) +
                                " is not a basis value");
    }
    for (size_t i : out) {
        const FormReport& rep = reports.at(i);
        if (rep.type == FormType::Trivial) continue;
        if (kind == CollectionKind::S && rep.type == FormType::RootMultiple)
            throw InternalError("S-basis selected an untouched root multiple");
        if ((kind == CollectionKind::CW || kind == CollectionKind::C) &&
            rep.type != FormType::Dicritical)
            throw InternalError("CW/C-basis selected a non-dicritical form");
    }
    return out;
}

std::vector<long long> recover_semigroup(const std::vector<long long>& sorted_values) {
    if (sorted_values.empty()) throw InputError("recover_semigroup: empty basis");
    if (!std::is_sorted(sorted_values.begin(), sorted_values.end()))
        throw InputError("recover_semigroup: values must be sorted increasingly");
    long long n = sorted_values.front();
    std::vector<long long> gens{n};
    long long e = n;
    long long nu = 1;
    while (e != 1) {
        size_t pos = static_cast<size_t>(2 * nu); // 1-indexed position 2 nu_l
        if (pos - 1 >= sorted_values.size())
            throw InputError("recover_semigroup: basis too short for its gcd ladder");
        long long bb = sorted_values[pos - 1];
        gens.push_back(bb);
        long long e2 = std::gcd(e, bb);
        if (e2 == e)
            throw InputError("recover_semigroup: gcd ladder stalled at " + std::to_string(e));
        e = e2;
        nu = n / e;
    }
    return gens;
}

CCheckResult is_c_collection(const ValueSemimodule& lam, const SgContext& ctx,
                             long long bound) {
    CCheckResult res;
    size_t g = ctx.gens.size() - 1;
    for (long long m = 1; m <= bound; ++m) {
        if (!lam.contains(m)) continue;
        for (size_t gi = 0; gi < ctx.gens.size(); ++gi) {
            if (!lam.contains(m + ctx.gens[gi])) {
                res.ok = false;
                res.counterexample = m;
                res.rule_j = 0;
                res.rule_k = static_cast<long long>(gi);
                return res;
            }
        }
        for (size_t j = 1; j <= g; ++j) {
            if (m > ctx.gens[j]) continue;
            for (size_t k = j; k <= g; ++k) {
                if (!lam.contains(m + ctx.gens[k] - ctx.gens[j])) {
                    res.ok = false;
                    res.counterexample = m;
                    res.rule_j = static_cast<long long>(j);
                    res.rule_k = static_cast<long long>(k);
                    return res;
                }
            }
        }
    }
    return res;
}

} // namespace kdv
