#include "kdv/approots.hpp"

#include <vector>

#include "kdv/errors.hpp"
#include "kdv/pullback.hpp"

namespace kdv {

namespace {

// dense univariate polynomials over Q, for the matrix work
using QPoly = std::vector<Rat>;

void qtrim(QPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

QPoly qadd(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rat(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    qtrim(r);
    return r;
}

QPoly qmul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    qtrim(r);
    return r;
}

QPoly qscale(QPoly a, const Rat& c) {
    for (auto& x : a) x *= c;
    qtrim(a);
    return a;
}

using QMatrix = std::vector<std::vector<QPoly>>;

QMatrix mat_mul(const QMatrix& a, const QMatrix& b) {
    size_t m = a.size();
    QMatrix r(m, std::vector<QPoly>(m));
    for (size_t i = 0; i < m; ++i)
        for (size_t k = 0; k < m; ++k) {
            if (a[i][k].empty()) continue;
            for (size_t j = 0; j < m; ++j) {
                if (b[k][j].empty()) continue;
                r[i][j] = qadd(r[i][j], qmul(a[i][k], b[k][j]));
            }
        }
    return r;
}

} // namespace

ApproxRoot approximate_root(const Branch& b, int j) {
    if (j < 1 || j > b.genus())
        throw InputError("approximate_root: index out of range");

    long long beta_j = b.char_exponents[static_cast<size_t>(j - 1)];
    long long e_prev = b.e_seq[static_cast<size_t>(j - 1)];
    long long m = b.nu_seq[static_cast<size_t>(j - 1)]; // = n / e_prev

    // primitive reparametrization (s^m, p(s)) of the truncation below beta_j
    QPoly p;
    for (const auto& [e, a] : b.terms) {
        if (e >= beta_j) break;
        long long d = e / e_prev;
        if (static_cast<long long>(p.size()) <= d) p.resize(static_cast<size_t>(d) + 1, Rat(0));
        p[static_cast<size_t>(d)] = a;
    }
    qtrim(p);

    ApproxRoot out;
    out.index = j;

    // multiplication-by-p matrix on the basis 1, s, ..., s^{m-1} of
    // Q[x][s]/(s^m - x): s^k reduces to x^(k div m) s^(k mod m)
    size_t mm = static_cast<size_t>(m);
    QMatrix M(mm, std::vector<QPoly>(mm));
    for (size_t col = 0; col < mm; ++col) {
        for (size_t k = 0; k < p.size(); ++k) {
            if (p[k].is_zero()) continue;
            size_t tot = k + col;
            size_t row = tot % mm;
            size_t xp = tot / mm;
            QPoly& slot = M[row][col];
            if (slot.size() <= xp) slot.resize(xp + 1, Rat(0));
            slot[xp] += p[k];
            qtrim(slot);
        }
    }

    // Faddeev-LeVerrier: char(y) = y^m + c_1 y^{m-1} + ... + c_m over Q[x]
    std::vector<QPoly> cs(mm + 1);
    cs[0] = QPoly{Rat(1)};
    QMatrix N(mm, std::vector<QPoly>(mm));
    for (size_t i = 0; i < mm; ++i) N[i][i] = QPoly{Rat(1)};
    for (size_t k = 1; k <= mm; ++k) {
        QMatrix A = mat_mul(M, N);
        QPoly tr;
        for (size_t i = 0; i < mm; ++i) tr = qadd(tr, A[i][i]);
        cs[k] = qscale(tr, Rat(-1, static_cast<long long>(k)));
        N = A;
        for (size_t i = 0; i < mm; ++i) N[i][i] = qadd(N[i][i], cs[k]);
    }

    for (size_t k = 0; k <= mm; ++k)
        for (size_t d = 0; d < cs[k].size(); ++d)
            out.poly.add_term(static_cast<long long>(d), m - static_cast<long long>(k),
                              cs[k][d]);

    out.value_on_branch = order_on_function(out.poly, b);
    return out;
}

} // namespace kdv
