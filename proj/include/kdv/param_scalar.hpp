#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kdv/rational.hpp"

namespace kdv {

// A polynomial in the single free coefficient "a", over the rationals.
// Only one coefficient of the curve family is ever symbolic at a time,
// so one indeterminate suffices.  Degree-0 elements embed Rat losslessly.
class ParamScalar {
public:
    ParamScalar() = default;
    ParamScalar(const Rat& c) {
        if (!c.is_zero()) c_.push_back(c);
    }
    ParamScalar(long long c) : ParamScalar(Rat(c)) {}

    // The indeterminate a itself.
    static ParamScalar symbol() {
        ParamScalar p;
        p.c_ = {Rat(0), Rat(1)};
        return p;
    }
    static ParamScalar monomial(const Rat& c, int pow) {
        ParamScalar p;
        if (c.is_zero()) return p;
        p.c_.assign(static_cast<size_t>(pow) + 1, Rat(0));
        p.c_.back() = c;
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    // Degree in a; -1 for the zero element.
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    Rat coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return Rat(0);
        return c_[static_cast<size_t>(i)];
    }
    Rat constant_term() const { return coeff(0); }

    Rat eval(const Rat& a) const {
        Rat acc(0);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * a + c_[i];
        return acc;
    }

    // Root of a degree-1 element.
    std::optional<Rat> linear_root() const {
        if (degree() != 1) return std::nullopt;
        return -c_[0] / c_[1];
    }

    ParamScalar& operator+=(const ParamScalar& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    ParamScalar& operator-=(const ParamScalar& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend ParamScalar operator+(ParamScalar a, const ParamScalar& b) { a += b; return a; }
    friend ParamScalar operator-(ParamScalar a, const ParamScalar& b) { a -= b; return a; }
    friend ParamScalar operator*(const ParamScalar& a, const ParamScalar& b) {
        ParamScalar r;
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        r.trim();
        return r;
    }
    ParamScalar& operator*=(const Rat& c) {
        if (c.is_zero()) {
            c_.clear();
            return *this;
        }
        for (auto& x : c_) x *= c;
        return *this;
    }
    friend ParamScalar operator*(ParamScalar a, const Rat& c) { a *= c; return a; }
    ParamScalar operator-() const {
        ParamScalar r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend bool operator==(const ParamScalar& a, const ParamScalar& b) { return a.c_ == b.c_; }
    friend bool operator!=(const ParamScalar& a, const ParamScalar& b) { return !(a == b); }

    // Renders e.g. "-4/3 a", "2 + 3 a^2".
    std::string str() const;

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<Rat> c_; // c_[i] multiplies a^i; no trailing zeros
};

} // namespace kdv
