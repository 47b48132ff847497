#pragma once

#include <map>

#include "kdv/param_scalar.hpp"
#include "kdv/value.hpp"

namespace kdv {

// Exact univariate polynomial in t with ParamScalar coefficients,
// sparse over the exponent.  Zero coefficients are never stored.
class TPoly {
public:
    using Terms = std::map<long long, ParamScalar>;

    TPoly() = default;

    bool is_zero() const { return terms_.empty(); }

    void add_term(long long exp, const ParamScalar& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(exp);
        if (it == terms_.end()) {
            terms_.emplace(exp, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    // Least stored exponent; infinity for the zero polynomial.
    Value order() const {
        if (terms_.empty()) return Value::infinity();
        return Value::finite(terms_.begin()->first);
    }

    ParamScalar coeff(long long exp) const {
        auto it = terms_.find(exp);
        return it == terms_.end() ? ParamScalar() : it->second;
    }

    const Terms& terms() const { return terms_; }

    TPoly& operator+=(const TPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    friend TPoly operator+(TPoly a, const TPoly& b) { a += b; return a; }

    void add_scaled(const TPoly& o, const ParamScalar& c, long long shift = 0) {
        if (c.is_zero()) return;
        for (const auto& [e, x] : o.terms_) add_term(e + shift, x * c);
    }

    // Product, keeping only exponents <= cap (cap < 0 means no cap).
    static TPoly mul(const TPoly& a, const TPoly& b, long long cap = -1) {
        TPoly r;
        for (const auto& [ea, ca] : a.terms_) {
            if (cap >= 0 && ea > cap) break;
            for (const auto& [eb, cb] : b.terms_) {
                long long e = ea + eb;
                if (cap >= 0 && e > cap) break;
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    TPoly truncated(long long cap) const {
        TPoly r;
        for (const auto& [e, c] : terms_) {
            if (e > cap) break;
            r.terms_.emplace(e, c);
        }
        return r;
    }

    // Substitute a concrete value for the parameter a.
    TPoly eval_param(const Rat& a) const {
        TPoly r;
        for (const auto& [e, c] : terms_) r.add_term(e, ParamScalar(c.eval(a)));
        return r;
    }

private:
    Terms terms_;
};

inline Value tpoly_order(const TPoly& p) { return p.order(); }

} // namespace kdv
