#pragma once

#include <vector>

#include "kdv/branch.hpp"
#include "kdv/engine.hpp"

namespace kdv {

// The set of orders of 1-forms, represented by its n class minima: a value m
// belongs iff m >= class_min[m mod n].
struct ValueSemimodule {
    long long n = 0;
    std::vector<long long> class_min; // index c: minimal element congruent to c

    bool contains(long long m) const {
        if (m <= 0) return false;
        return m >= class_min[static_cast<size_t>(m % n)];
    }
    long long conductor() const {
        long long mx = 0;
        for (long long v : class_min) mx = std::max(mx, v);
        return mx - n + 1;
    }
    long long max_class_min() const {
        long long mx = 0;
        for (long long v : class_min) mx = std::max(mx, v);
        return mx;
    }
    std::vector<long long> elements_up_to(long long bound) const {
        std::vector<long long> out;
        for (long long m = 1; m <= bound; ++m)
            if (contains(m)) out.push_back(m);
        return out;
    }
};

ValueSemimodule lambda_from_basis(const std::vector<long long>& values, long long n);

enum class CollectionKind { CX, S, CW, C };

// Context derived from the semigroup generators (n, betabar_1..betabar_g):
// the gcd ladder, the characteristic exponents and a membership table.
struct SgContext {
    std::vector<long long> gens;   // n, betabar_1..betabar_g
    std::vector<long long> e_seq;  // e_0..e_g
    std::vector<long long> betas;  // beta_1..beta_g (recovered)
    Semigroup sg;
};

SgContext make_sg_context(const std::vector<long long>& sg_gens);

// Decides membership of m in the closure of the finite set S under the given
// collection notion, using the closed-form descriptions of the closures.
bool closure_member(const std::vector<long long>& S, CollectionKind kind, long long m,
                    const SgContext& ctx);

// Minimal generator set of the semimodule under the given notion, scanned up
// to the largest class minimum.
std::vector<long long> minimal_generators(const ValueSemimodule& lam, CollectionKind kind,
                                          const SgContext& ctx);

// Positions (into basis.entries) of the forms carrying the minimal generators.
// Checks the classification constraints: an S-basis selects no untouched
// root-multiple form, and CW/C-bases select only dicritical forms.
std::vector<size_t> basis_of_forms(const CxBasis& basis,
                                   const std::vector<FormReport>& reports,
                                   CollectionKind kind, const SgContext& ctx);

// Reads the semigroup generators off the sorted basis values (the generator
// betabar_{l+1} sits at position 2 nu_l, 1-indexed).
std::vector<long long> recover_semigroup(const std::vector<long long>& sorted_values);

struct CCheckResult {
    bool ok = true;
    long long counterexample = 0;
    long long rule_j = 0, rule_k = 0; // failing pair, 0 = semigroup shift
};

// Exhaustively verifies closure under the semigroup and under the chain rule
// for all members up to the bound.
CCheckResult is_c_collection(const ValueSemimodule& lam, const SgContext& ctx,
                             long long bound);

} // namespace kdv
