#pragma once

#include <cstdint>

#include "kdv/branch.hpp"

namespace kdv {

// Deterministic cross-platform generator (splitmix64 core); used by the
// randomized test campaigns and the CLI's `random` subcommand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    long long below(long long k) { // uniform-ish in [0, k)
        return static_cast<long long>(next() % static_cast<std::uint64_t>(k));
    }
    long long range(long long lo, long long hi) { return lo + below(hi - lo + 1); }
    bool chance(long long num, long long den) { return below(den) < num; }
    Rat rat() { // small nonzero rational
        long long p = range(1, 9) * (chance(1, 2) ? 1 : -1);
        long long q = range(1, 5);
        return Rat(p, q);
    }

private:
    std::uint64_t state_;
};

struct RandomBranchOptions {
    int genus = 0;            // 0 = random in [1, 3]
    long long n_max = 12;
    long long betabar_max = 200;
    int extra_terms = 4;      // non-characteristic grid terms to sprinkle
};

// A valid random branch: multiplicities factor through the requested genus,
// characteristic exponents respect the gcd ladder, the last semigroup
// generator stays below betabar_max, and a mix of zero/nonzero coefficients
// fills non-characteristic grid exponents.
Branch random_branch(Rng& rng, const RandomBranchOptions& opts = {});

} // namespace kdv
