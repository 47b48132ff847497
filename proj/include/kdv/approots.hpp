#pragma once

#include <map>
#include <mutex>

#include "kdv/branch.hpp"
#include "kdv/value.hpp"
#include "kdv/xypoly.hpp"

namespace kdv {

// The j-th approximate root: an irreducible equation of the truncation of the
// branch below its j-th characteristic exponent, monic in y of degree nu_{j-1}.
struct ApproxRoot {
    int index = 0;
    XYPoly poly;
    Value value_on_branch; // = betabar_j
};

// Computed as the resultant in s of (s^m - x) and (y - p(s)), where
// (s^m, p(s)) is the primitive reparametrization of the truncated curve;
// realized as the characteristic polynomial of the multiplication-by-p
// matrix on Q[x][s]/(s^m - x).
ApproxRoot approximate_root(const Branch& b, int j);

// Immutable memo table over a fixed branch.
class ApproxRootCache {
public:
    explicit ApproxRootCache(const Branch& b) : b_(&b) {}

    const ApproxRoot& get(int j) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find(j);
        if (it == memo_.end()) it = memo_.emplace(j, approximate_root(*b_, j)).first;
        return it->second;
    }

private:
    const Branch* b_;
    mutable std::mutex mu_;
    mutable std::map<int, ApproxRoot> memo_;
};

} // namespace kdv
