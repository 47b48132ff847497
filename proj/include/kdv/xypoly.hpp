#pragma once

#include <map>
#include <string>
#include <utility>

#include "kdv/rational.hpp"

namespace kdv {

// Exact bivariate polynomial in x, y with rational coefficients, sparse.
class XYPoly {
public:
    using Key = std::pair<long long, long long>; // (x exponent, y exponent)
    using Terms = std::map<Key, Rat>;

    XYPoly() = default;

    static XYPoly monomial(const Rat& c, long long xe, long long ye) {
        XYPoly p;
        p.add_term(xe, ye, c);
        return p;
    }
    static XYPoly one() { return monomial(Rat(1), 0, 0); }
    static XYPoly x() { return monomial(Rat(1), 1, 0); }
    static XYPoly y() { return monomial(Rat(1), 0, 1); }

    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    const Terms& terms() const { return terms_; }

    void add_term(long long xe, long long ye, const Rat& c) {
        if (c.is_zero()) return;
        auto key = Key{xe, ye};
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Rat coeff(long long xe, long long ye) const {
        auto it = terms_.find(Key{xe, ye});
        return it == terms_.end() ? Rat(0) : it->second;
    }

    long long y_degree() const {
        long long d = -1;
        for (const auto& [k, c] : terms_)
            if (k.second > d) d = k.second;
        return d;
    }
    long long x_degree() const {
        long long d = -1;
        for (const auto& [k, c] : terms_)
            if (k.first > d) d = k.first;
        return d;
    }

    XYPoly& operator+=(const XYPoly& o) {
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
        return *this;
    }
    XYPoly& operator-=(const XYPoly& o) {
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
        return *this;
    }
    friend XYPoly operator+(XYPoly a, const XYPoly& b) { a += b; return a; }
    friend XYPoly operator-(XYPoly a, const XYPoly& b) { a -= b; return a; }
    friend XYPoly operator*(const XYPoly& a, const XYPoly& b) {
        XYPoly r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_)
                r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return r;
    }
    friend bool operator==(const XYPoly& a, const XYPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const XYPoly& a, const XYPoly& b) { return !(a == b); }

    // this += c * x^xshift * o
    void add_scaled(const XYPoly& o, const Rat& c, long long xshift = 0) {
        if (c.is_zero()) return;
        for (const auto& [k, v] : o.terms_) add_term(k.first + xshift, k.second, c * v);
    }

    XYPoly scaled(const Rat& c, long long xpow = 0) const {
        XYPoly r;
        r.add_scaled(*this, c, xpow);
        return r;
    }

    // Partial derivative in y.
    XYPoly dy() const {
        XYPoly r;
        for (const auto& [k, c] : terms_)
            if (k.second > 0) r.add_term(k.first, k.second - 1, c * Rat(k.second));
        return r;
    }
    XYPoly dx() const {
        XYPoly r;
        for (const auto& [k, c] : terms_)
            if (k.first > 0) r.add_term(k.first - 1, k.second, c * Rat(k.first));
        return r;
    }

    // Divided derivative in y: (d/dy)^i / i!   (exact over Q).
    XYPoly dy_divided(int i) const;

    // Renders e.g. "y^2 - x^3", deterministic term order.
    std::string str() const;

    // Parses the same grammar (terms "c x^i y^j" joined by +/-).
    static XYPoly parse(const std::string& s);

private:
    Terms terms_;
};

inline XYPoly poly_add(const XYPoly& a, const XYPoly& b) { return a + b; }
inline XYPoly poly_mul(const XYPoly& a, const XYPoly& b) { return a * b; }

// An exact 1-form  adx * dx + ady * dy  with polynomial coefficients.
struct OneForm {
    XYPoly adx, ady;

    OneForm() = default;
    OneForm(XYPoly a, XYPoly b) : adx(std::move(a)), ady(std::move(b)) {}

    static OneForm d_x() { return OneForm(XYPoly::one(), XYPoly()); }
    static OneForm d_y() { return OneForm(XYPoly(), XYPoly::one()); }
    // Exact differential df.
    static OneForm d(const XYPoly& f) { return OneForm(f.dx(), f.dy()); }

    bool is_zero() const { return adx.is_zero() && ady.is_zero(); }

    OneForm& operator-=(const OneForm& o) {
        adx -= o.adx;
        ady -= o.ady;
        return *this;
    }
    friend OneForm operator-(OneForm a, const OneForm& b) { a -= b; return a; }
    friend OneForm operator+(OneForm a, const OneForm& b) {
        a.adx += b.adx;
        a.ady += b.ady;
        return a;
    }
    friend bool operator==(const OneForm& a, const OneForm& b) {
        return a.adx == b.adx && a.ady == b.ady;
    }

    // this -= c * x^xshift * o
    void sub_scaled(const OneForm& o, const Rat& c, long long xshift) {
        adx.add_scaled(o.adx, -c, xshift);
        ady.add_scaled(o.ady, -c, xshift);
    }

    // Multiply componentwise by a function.
    friend OneForm operator*(const XYPoly& f, const OneForm& w) {
        return OneForm(f * w.adx, f * w.ady);
    }

    std::string str() const;
    static OneForm parse(const std::string& s);
};

// c * x^xpow * form, componentwise.
inline OneForm form_scale(const OneForm& w, const Rat& c, long long xpow) {
    return OneForm(w.adx.scaled(c, xpow), w.ady.scaled(c, xpow));
}

} // namespace kdv
