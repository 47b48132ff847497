#pragma once

#include <map>
#include <vector>

#include "kdv/param_scalar.hpp"
#include "kdv/rational.hpp"

namespace kdv {

// A possibly non-primitive, possibly symbolic parametrization
// (t^n, sum a_beta t^beta): truncations and one-symbol family members.
struct ParamCurve {
    long long n = 0;
    std::map<long long, ParamScalar> terms;
    long long primitivity = 1; // gcd of n and the exponents carrying nonzero coefficients

    bool is_concrete() const {
        for (const auto& [e, c] : terms)
            if (!c.is_constant()) return false;
        return true;
    }
};

// An irreducible plane branch given by a polynomial Puiseux parametrization
// in normal form, together with all derived numerical invariants.
// Immutable after parse_branch.
struct Branch {
    long long n = 0;                       // multiplicity
    std::map<long long, Rat> terms;        // beta -> a_beta, all nonzero
    std::vector<long long> char_exponents; // beta_1 < ... < beta_g
    std::vector<long long> e_seq;          // e_0 = n, ..., e_g = 1
    std::vector<long long> n_seq;          // n_1, ..., n_g
    std::vector<long long> nu_seq;         // nu_0 = 1, ..., nu_g = n
    std::vector<long long> sg_gens;        // n, betabar_1, ..., betabar_g

    int genus() const { return static_cast<int>(char_exponents.size()); }
    Rat coeff(long long beta) const {
        auto it = terms.find(beta);
        return it == terms.end() ? Rat(0) : it->second;
    }
    long long max_support_exponent() const { return terms.rbegin()->first; }

    ParamCurve as_curve() const;
    // Family member: actual coefficients except a symbolic one at beta_star.
    ParamCurve member_with_symbol(long long beta_star) const;
    // Actual coefficients except the one at beta replaced by `value`.
    ParamCurve perturbed(long long beta, const Rat& value) const;
};

// Validates and derives every invariant.  Errors: ZeroCoefficient,
// NonPrimitive, NotSingularNormalForm.
Branch parse_branch(long long n, const std::vector<std::pair<long long, Rat>>& terms);

// (n, betabar_1, ..., betabar_g)
std::vector<long long> semigroup_generators(const Branch& b);

// E_Gamma intersected with [beta_1, cap]; optionally prepends n (for call
// sites that need E_Gamma united with {n}).
std::vector<long long> exponent_set(const Branch& b, long long cap, bool include_n = false);

bool in_exponent_set(const Branch& b, long long beta);
// Next element of E_Gamma; by convention next(n) = beta_1.
long long next_exponent(const Branch& b, long long beta);
// Previous element of E_Gamma (beta must have one).
long long prev_exponent(const Branch& b, long long beta);

// Terms with exponent strictly below beta; beta must lie in E_Gamma or be n
// (empty curve) or past the support (the full curve).
ParamCurve truncation(const Branch& b, long long beta);

// Standard numerical-semigroup utilities over a generator set with gcd 1.
struct Semigroup {
    long long modulus = 1;          // the generator used for the Apery table
    std::vector<long long> gens;
    std::vector<long long> apery;   // minimal element in each class mod modulus (0 for class 0)
    long long conductor = 0;

    bool contains(long long m) const {
        if (m < 0) return false;
        return m >= apery[static_cast<size_t>(m % modulus)];
    }
    long long max_apery() const;
};

Semigroup make_semigroup(const std::vector<long long>& gens);

} // namespace kdv
