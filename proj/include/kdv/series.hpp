#pragma once

#include <utility>
#include <vector>

#include "kdv/rational.hpp"
#include "kdv/value.hpp"

namespace kdv {

// Order of a possibly truncated series.  `Beyond` means every exponent up to
// the truncation cap vanished but terms were dropped above it, so the true
// order is only known to exceed the cap.
struct OrderInfo {
    enum Kind { Finite, Beyond, Infinite } kind;
    long long e; // finite exponent, or the cap for Beyond

    static OrderInfo finite(long long v) { return {Finite, v}; }
    static OrderInfo beyond(long long cap) { return {Beyond, cap}; }
    static OrderInfo infinite() { return {Infinite, 0}; }

    bool is_finite() const { return kind == Finite; }
    Value to_value() const {
        if (kind == Finite) return Value::finite(e);
        if (kind == Infinite) return Value::infinity();
        throw InternalError("OrderInfo: order exceeds the truncation cap; enlarge the cap");
    }
    // Compares against a finite threshold: "order > m" is decidable for all kinds
    // as long as Beyond caps exceed m.
    bool greater_than(long long m) const {
        if (kind == Finite) return e > m;
        if (kind == Beyond) {
            if (e < m) throw InternalError("OrderInfo: comparison beyond truncation cap");
            return true;
        }
        return true;
    }
};

// Concrete rational power series in t, truncated at a cap.  Terms are kept
// sorted by exponent with nonzero coefficients only.  `exact` records whether
// any term above the cap was ever discarded along the computation.
struct Series {
    std::vector<std::pair<long long, Rat>> terms;
    bool exact = true;

    bool stored_empty() const { return terms.empty(); }

    OrderInfo order(long long cap) const {
        if (!terms.empty()) return OrderInfo::finite(terms.front().first);
        return exact ? OrderInfo::infinite() : OrderInfo::beyond(cap);
    }

    Rat coeff(long long exp) const {
        size_t lo = 0, hi = terms.size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (terms[mid].first < exp)
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo < terms.size() && terms[lo].first == exp) return terms[lo].second;
        return Rat(0);
    }

    void add_term(long long exp, const Rat& c, long long cap) {
        if (c.is_zero()) return;
        if (exp > cap) {
            exact = false;
            return;
        }
        // callers mostly append in order; fall back to insertion otherwise
        if (terms.empty() || terms.back().first < exp) {
            terms.emplace_back(exp, c);
            return;
        }
        size_t lo = 0, hi = terms.size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (terms[mid].first < exp)
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo < terms.size() && terms[lo].first == exp) {
            terms[lo].second += c;
            if (terms[lo].second.is_zero()) terms.erase(terms.begin() + static_cast<long>(lo));
        } else {
            terms.insert(terms.begin() + static_cast<long>(lo), {exp, c});
        }
    }

    // this += c * t^shift * s, truncated at cap.
    void add_scaled_shifted(const Series& s, const Rat& c, long long shift, long long cap) {
        if (!s.exact) exact = false;
        if (c.is_zero()) return;
        std::vector<std::pair<long long, Rat>> out;
        out.reserve(terms.size() + s.terms.size());
        size_t i = 0, j = 0;
        while (i < terms.size() || j < s.terms.size()) {
            long long es = (j < s.terms.size()) ? s.terms[j].first + shift : -1;
            if (j < s.terms.size() && es > cap) {
                exact = false;
                ++j;
                continue;
            }
            if (j >= s.terms.size() || (i < terms.size() && terms[i].first < es)) {
                out.push_back(terms[i++]);
            } else if (i >= terms.size() || terms[i].first > es) {
                out.emplace_back(es, c * s.terms[j].second);
                ++j;
            } else {
                Rat v = terms[i].second + c * s.terms[j].second;
                if (!v.is_zero()) out.emplace_back(es, v);
                ++i;
                ++j;
            }
        }
        terms = std::move(out);
    }

    struct Source {
        const Series* s;
        Rat scale;
        long long shift;
    };

    // Merged linear combination  sum_k scale_k * t^{shift_k} * s_k, one pass.
    static Series merge_many(const std::vector<Source>& sources, long long cap) {
        Series out;
        std::vector<size_t> pos(sources.size(), 0);
        for (const Source& src : sources)
            if (!src.s->exact) out.exact = false;
        for (;;) {
            long long e = cap + 1;
            for (size_t k = 0; k < sources.size(); ++k) {
                const auto& t = sources[k].s->terms;
                if (pos[k] < t.size()) {
                    long long ek = t[pos[k]].first + sources[k].shift;
                    if (ek < e) e = ek;
                }
            }
            if (e > cap) break;
            Rat c(0);
            for (size_t k = 0; k < sources.size(); ++k) {
                const auto& t = sources[k].s->terms;
                if (pos[k] < t.size() && t[pos[k]].first + sources[k].shift == e) {
                    c += sources[k].scale * t[pos[k]].second;
                    ++pos[k];
                }
            }
            if (!c.is_zero()) out.terms.emplace_back(e, c);
        }
        for (size_t k = 0; k < sources.size(); ++k) {
            const auto& t = sources[k].s->terms;
            if (pos[k] < t.size()) out.exact = false; // terms beyond the cap dropped
        }
        return out;
    }

    static Series mul(const Series& a, const Series& b, long long cap) {
        Series r;
        r.exact = a.exact && b.exact;
        for (const auto& [ea, ca] : a.terms) {
            for (const auto& [eb, cb] : b.terms) {
                if (ea + eb > cap) {
                    r.exact = false;
                    break;
                }
                r.add_term(ea + eb, ca * cb, cap);
            }
        }
        return r;
    }

    void scale(const Rat& c) {
        if (c.is_zero()) {
            terms.clear();
            return;
        }
        for (auto& [e, x] : terms) x *= c;
    }
};

// Lazily walks the merged support of u + w*v and reports the order of the sum
// without materializing it.
inline OrderInfo sum_order(const Series& u, const Series& v, const Rat& w, long long cap) {
    size_t i = 0, j = 0;
    while (i < u.terms.size() || j < v.terms.size()) {
        long long eu = i < u.terms.size() ? u.terms[i].first : cap + 1;
        long long ev = j < v.terms.size() ? v.terms[j].first : cap + 1;
        long long e = eu < ev ? eu : ev;
        if (e > cap) break;
        Rat c(0);
        if (eu == e) c += u.terms[i++].second;
        if (ev == e) {
            c += w * v.terms[j].second;
            ++j;
        }
        if (!c.is_zero()) return OrderInfo::finite(e);
    }
    if (u.exact && v.exact) return OrderInfo::infinite();
    return OrderInfo::beyond(cap);
}

inline Rat sum_coeff(const Series& u, const Series& v, const Rat& w, long long exp) {
    return u.coeff(exp) + w * v.coeff(exp);
}

} // namespace kdv
