#include "kdv/oracle.hpp"

#include <algorithm>

#include "kdv/engine.hpp"
#include "kdv/errors.hpp"
#include "kdv/pullback.hpp"
#include "kdv/semimodule.hpp"

namespace kdv {

long long EchelonTable::absorb(std::vector<Rat> row) {
    long long start = 0;
    for (;;) {
        long long lead = -1;
        for (long long e = start; e <= bound; ++e) {
            if (!row[static_cast<size_t>(e)].is_zero()) {
                lead = e;
                break;
            }
        }
        if (lead < 0) return -1;
        long long found = pivot_row[static_cast<size_t>(lead)];
        if (found < 0) {
            pivot_row[static_cast<size_t>(lead)] = static_cast<long long>(rows.size());
            rows.push_back(std::move(row));
            row_pivot.push_back(lead);
            return lead;
        }
        const std::vector<Rat>& p = rows[static_cast<size_t>(found)];
        Rat f = row[static_cast<size_t>(lead)] / p[static_cast<size_t>(lead)];
        for (long long e = lead; e <= bound; ++e) {
            if (!p[static_cast<size_t>(e)].is_zero())
                row[static_cast<size_t>(e)] -= f * p[static_cast<size_t>(e)];
        }
        start = lead + 1;
    }
}

std::vector<long long> EchelonTable::pivots() const {
    std::vector<long long> p = row_pivot;
    std::sort(p.begin(), p.end());
    return p;
}

namespace {

std::vector<Rat> to_dense(const Series& s, long long bound) {
    std::vector<Rat> row(static_cast<size_t>(bound) + 1, Rat(0));
    for (const auto& [e, c] : s.terms)
        if (e <= bound) row[static_cast<size_t>(e)] = c;
    return row;
}

std::vector<long long> pivot_set(const Branch& b, long long bound, long long xcap,
                                 long long ycap) {
    SeriesPuller puller(b, bound);
    EchelonTable tab(bound);
    long long beta1 = b.char_exponents[0];
    for (long long a = 0; a <= xcap; ++a) {
        for (long long yb = 0; yb <= ycap; ++yb) {
            if (a * b.n + yb * beta1 + b.n > bound) continue;
            XYPoly mono = XYPoly::monomial(Rat(1), a, yb);
            tab.absorb(to_dense(puller.pull_form(OneForm(mono, XYPoly())), bound));
            tab.absorb(to_dense(puller.pull_form(OneForm(XYPoly(), mono)), bound));
        }
    }
    std::vector<long long> p = tab.pivots();
    p.erase(std::remove_if(p.begin(), p.end(), [](long long e) { return e < 1; }), p.end());
    return p;
}

} // namespace

OracleResult oracle_lambda(const Branch& b, long long bound) {
    OracleResult out;
    out.bound = bound;
    if (bound < b.n) return out;
    long long beta1 = b.char_exponents[0];
    long long xcap = bound / b.n + 1;
    long long ycap = bound / beta1 + 1;
    // enlarge the monomial caps until the pivot set repeats twice
    std::vector<long long> prev = pivot_set(b, bound, xcap, ycap);
    for (;;) {
        xcap += 2;
        ycap += 2;
        std::vector<long long> cur = pivot_set(b, bound, xcap, ycap);
        if (cur == prev) break;
        prev = std::move(cur);
    }
    out.values = std::move(prev);
    return out;
}

OracleComparison oracle_compare(const Branch& b) {
    CxBasis basis = construct_cx_basis(b);
    ValueSemimodule lam = lambda_from_basis(basis.values(), b.n);
    OracleComparison cmp;
    cmp.bound = lam.max_class_min() + 2 * b.n;
    cmp.engine_values = lam.elements_up_to(cmp.bound);
    OracleResult oracle = oracle_lambda(b, cmp.bound);
    cmp.oracle_values = oracle.values;
    if (cmp.engine_values != cmp.oracle_values) {
        cmp.equal = false;
        size_t m = std::min(cmp.engine_values.size(), cmp.oracle_values.size());
        cmp.first_discrepancy = -1;
        for (size_t i = 0; i < m; ++i) {
            if (cmp.engine_values[i] != cmp.oracle_values[i]) {
                cmp.first_discrepancy = std::min(cmp.engine_values[i], cmp.oracle_values[i]);
                break;
            }
        }
        if (cmp.first_discrepancy < 0) {
            if (cmp.engine_values.size() > m)
                cmp.first_discrepancy = cmp.engine_values[m];
            else if (cmp.oracle_values.size() > m)
                cmp.first_discrepancy = cmp.oracle_values[m];
        }
    }
    return cmp;
}

} // namespace kdv
