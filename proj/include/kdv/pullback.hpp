#pragma once

#include <map>
#include <optional>
#include <vector>

#include "kdv/branch.hpp"
#include "kdv/series.hpp"
#include "kdv/tpoly.hpp"
#include "kdv/value.hpp"
#include "kdv/xypoly.hpp"

namespace kdv {

// Result of an exact pullback along a parametrization.  For a 1-form w the
// stored series is t * C^*(w), so its order is the (unnormalized) contact
// order directly; for a function it is f composed with the parametrization.
struct PullbackResult {
    TPoly series;
    long long primitivity = 1;
};

PullbackResult pullback_function(const XYPoly& f, const ParamCurve& c);
PullbackResult pullback_form(const OneForm& w, const ParamCurve& c);

// Contact orders, normalized by the primitivity factor (Infinity for an
// identically vanishing pullback).  Throws NonDivisibleOrder if the raw
// order is not a multiple of the primitivity factor.
Value order_on_function(const XYPoly& f, const ParamCurve& c);
Value order_on_branch(const OneForm& w, const ParamCurve& c);

inline Value order_on_function(const XYPoly& f, const Branch& b) {
    return order_on_function(f, b.as_curve());
}
inline Value order_on_branch(const OneForm& w, const Branch& b) {
    return order_on_branch(w, b.as_curve());
}

// Order data of a 1-form along the one-parameter family that keeps the
// branch coefficients except for a free coefficient a at beta_star.
struct GenericOrderReport {
    Value generic_order;              // least order not identically zero in a
    ParamScalar lead;                 // its coefficient, as a polynomial in a
    bool constant_in_a = true;
    std::optional<Rat> root_if_linear;
};

GenericOrderReport generic_order(const OneForm& w, const Branch& b, long long beta_star);

// True iff the contact order on the branch itself exceeds the generic order
// at beta_star, i.e. the form contains the branch past beta_star.
bool beg_exceeds(const OneForm& w, const Branch& b, long long beta_star);

// The curve agreeing with the branch below start_beta whose coefficients are
// chosen exponent by exponent to push the pullback order of w past T.
ParamCurve companion_curve(const OneForm& w, const Branch& b, long long start_beta,
                           long long T);

// Decides "normalized order of t * C^*(w) exceeds T" without computing the
// full pullback: the series is truncated at primitivity * T.
bool order_exceeds(const OneForm& w, const ParamCurve& c, long long T);

// Division against a family of forms with pairwise incongruent values mod n:
// repeatedly subtracts c x^r * basis_form matching the residual's value class
// until the residual order exceeds T.
struct Decomposition {
    std::vector<std::map<long long, Rat>> coefficients; // per basis entry: x-exponent -> c
    Value residual_order;
    OneForm residual;
};

Decomposition decompose(const OneForm& w,
                        const std::vector<std::pair<OneForm, Value>>& basis,
                        const Branch& b, long long T);

// ---- concrete series pullbacks (plumbing shared by the construction and
// ---- the brute-force oracle; truncation keeps every computation bounded)

class SeriesPuller {
public:
    SeriesPuller(const Branch& b, long long cap);

    long long cap() const { return cap_; }
    const Branch& branch() const { return *b_; }

    Series pull_function(const XYPoly& f) const;
    // t * Gamma^*(w)
    Series pull_form(const OneForm& w) const;
    // plain composition of a coefficient polynomial with the parametrization
    Series compose(const XYPoly& f) const { return pull_function(f); }

private:
    const Series& ypow(long long k) const;

    const Branch* b_;
    long long cap_;
    Series ty_; // t * y'(t)
    mutable std::vector<Series> ypows_;
};

// Exact upper bound for the t-exponent of t * C^*(w); above it the pullback
// is guaranteed zero, which turns truncated emptiness into exact vanishing.
long long pullback_exponent_bound(const OneForm& w, const ParamCurve& c);
long long pullback_exponent_bound(const XYPoly& f, const ParamCurve& c);

// Symbolic pullbacks along a (possibly symbolic) curve, truncated at cap.
TPoly pull_function_trunc(const XYPoly& f, const ParamCurve& c, long long cap);
TPoly pull_form_trunc(const OneForm& w, const ParamCurve& c, long long cap);

} // namespace kdv
