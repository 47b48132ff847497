#include "kdv/randgen.hpp"

#include <algorithm>
#include <numeric>

#include "kdv/errors.hpp"

namespace kdv {

namespace {

// factor n = n_1 ... n_g with every factor >= 2 and n <= n_max
std::vector<long long> pick_factors(Rng& rng, int genus, long long n_max) {
    for (int tries = 0; tries < 64; ++tries) {
        std::vector<long long> f;
        long long prod = 1;
        bool ok = true;
        for (int j = 0; j < genus; ++j) {
            long long nj = rng.range(2, 3);
            if (prod * nj > n_max) {
                ok = false;
                break;
            }
            f.push_back(nj);
            prod *= nj;
        }
        if (ok) return f;
    }
    return std::vector<long long>(static_cast<size_t>(genus), 2);
}

} // namespace

Branch random_branch(Rng& rng, const RandomBranchOptions& opts) {
    int genus = opts.genus > 0 ? opts.genus : static_cast<int>(rng.range(1, 3));
    for (int attempt = 0; attempt < 256; ++attempt) {
        std::vector<long long> nf = pick_factors(rng, genus, opts.n_max);
        long long n = 1;
        for (long long x : nf) n *= x;
        if (n < 2) continue;

        // gcd ladder e_0 = n, e_j = e_{j-1} / n_j
        std::vector<long long> e{n};
        for (long long x : nf) e.push_back(e.back() / x);

        // characteristic exponents: beta_j in (e_j) \ (e_{j-1}), increasing
        std::vector<long long> betas;
        bool ok = true;
        long long prev = n;
        for (int j = 1; j <= genus; ++j) {
            long long ej = e[static_cast<size_t>(j)];
            long long ejm = e[static_cast<size_t>(j - 1)];
            long long nj = nf[static_cast<size_t>(j - 1)];
            long long beta = -1;
            for (int tries = 0; tries < 64; ++tries) {
                long long m = rng.range(1, 6);        // multiples of e_j past prev
                long long cand = prev + m * ej;
                long long q = cand / ej;
                if (std::gcd(q, nj) != 1) continue;   // must break the ladder exactly
                if (cand % ejm == 0) continue;
                beta = cand;
                break;
            }
            if (beta < 0) {
                ok = false;
                break;
            }
            betas.push_back(beta);
            prev = beta;
        }
        if (!ok) continue;

        // semigroup bound via the recursion
        std::vector<long long> bb{betas[0]};
        for (int j = 1; j < genus; ++j) {
            long long nj = nf[static_cast<size_t>(j - 1)];
            bb.push_back(nj * bb.back() - betas[static_cast<size_t>(j - 1)] +
                         betas[static_cast<size_t>(j)]);
        }
        if (bb.back() > opts.betabar_max) continue;

        std::vector<std::pair<long long, Rat>> terms;
        for (int j = 0; j < genus; ++j) terms.emplace_back(betas[static_cast<size_t>(j)], rng.rat());

        // sprinkle non-characteristic grid exponents, some zero (skipped), some not
        long long top = betas.back() + rng.range(0, 8);
        for (int t = 0; t < opts.extra_terms; ++t) {
            int seg = static_cast<int>(rng.below(genus));
            long long ej = e[static_cast<size_t>(seg + 1)];
            long long base = betas[static_cast<size_t>(seg)];
            long long hi = (seg + 1 < genus) ? betas[static_cast<size_t>(seg + 1)] : top + 2 * ej;
            if (base + ej > hi) continue;
            long long steps = (hi - base) / ej;
            long long cand = base + rng.range(1, std::max<long long>(steps, 1)) * ej;
            if (cand >= hi && seg + 1 < genus) continue;
            bool dup = false;
            for (const auto& [ex, c] : terms) dup = dup || ex == cand;
            if (dup || rng.chance(1, 3)) continue; // a third of the slots stay zero
            terms.emplace_back(cand, rng.rat());
        }
        std::sort(terms.begin(), terms.end());
        try {
            return parse_branch(n, terms);
        } catch (const InputError&) {
            continue;
        }
    }
    throw InternalError("random_branch: exhausted attempts");
}

} // namespace kdv
