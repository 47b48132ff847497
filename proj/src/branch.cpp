#include "kdv/branch.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "kdv/errors.hpp"

namespace kdv {

ParamCurve Branch::as_curve() const {
    ParamCurve c;
    c.n = n;
    for (const auto& [e, a] : terms) c.terms.emplace(e, ParamScalar(a));
    c.primitivity = 1;
    return c;
}

ParamCurve Branch::member_with_symbol(long long beta_star) const {
    ParamCurve c = as_curve();
    c.terms.erase(beta_star);
    c.terms.emplace(beta_star, ParamScalar::symbol());
    c.primitivity = 1; // generic member is primitive: the characteristic coefficients are fixed
    return c;
}

ParamCurve Branch::perturbed(long long beta, const Rat& value) const {
    ParamCurve c = as_curve();
    c.terms.erase(beta);
    if (!value.is_zero()) c.terms.emplace(beta, ParamScalar(value));
    long long g = c.n;
    for (const auto& [e, a] : c.terms) g = std::gcd(g, e);
    c.primitivity = g;
    return c;
}

Branch parse_branch(long long n, const std::vector<std::pair<long long, Rat>>& in) {
    if (n < 2) throw NotSingularNormalFormError("multiplicity must be >= 2, got " + std::to_string(n));
    if (in.empty()) throw InputError("parametrization needs at least one y-term");

    Branch b;
    b.n = n;
    for (const auto& [e, c] : in) {
        if (c.is_zero())
            throw ZeroCoefficientError("zero coefficient at exponent " + std::to_string(e));
        if (e <= 0) throw InputError("exponents must be positive");
        if (!b.terms.emplace(e, c).second)
            throw InputError("duplicate exponent " + std::to_string(e));
    }

    long long g = n;
    for (const auto& [e, c] : b.terms) g = std::gcd(g, e);
    if (g != 1)
        throw NonPrimitiveError("parametrization is not primitive: gcd = " + std::to_string(g));

    long long beta1 = b.terms.begin()->first;
    if (beta1 <= n)
        throw NotSingularNormalFormError("first exponent " + std::to_string(beta1) +
                                         " must exceed the multiplicity " + std::to_string(n));
    if (beta1 % n == 0)
        throw NotSingularNormalFormError("first exponent " + std::to_string(beta1) +
                                         " is a multiple of the multiplicity; not in normal form");

    // gcd ladder: characteristic exponents are where the gcd drops
    b.e_seq.push_back(n);
    for (const auto& [e, c] : b.terms) {
        long long cur = b.e_seq.back();
        if (e % cur != 0) {
            b.char_exponents.push_back(e);
            b.e_seq.push_back(std::gcd(cur, e));
        }
    }
    // primitivity guarantees e_g = 1
    if (b.e_seq.back() != 1) throw InternalError("gcd ladder did not reach 1");

    // every support exponent must lie on the grid of its characteristic segment
    for (const auto& [e, c] : b.terms) {
        size_t j = 0;
        while (j + 1 < b.char_exponents.size() && b.char_exponents[j + 1] <= e) ++j;
        long long bj = b.char_exponents[j];
        long long ej = b.e_seq[j + 1];
        if (e < bj || (e - bj) % ej != 0)
            throw NotSingularNormalFormError("exponent " + std::to_string(e) +
                                             " is not in the exponent set of the branch");
    }

    b.nu_seq.push_back(1);
    for (size_t j = 1; j < b.e_seq.size(); ++j) {
        long long nj = b.e_seq[j - 1] / b.e_seq[j];
        if (nj < 2) throw InternalError("n_j must be >= 2");
        b.n_seq.push_back(nj);
        b.nu_seq.push_back(b.nu_seq.back() * nj);
    }

    b.sg_gens.push_back(n);
    for (size_t j = 0; j < b.char_exponents.size(); ++j) {
        if (j == 0) {
            b.sg_gens.push_back(b.char_exponents[0]);
        } else {
            long long bb = b.n_seq[j - 1] * b.sg_gens.back() - b.char_exponents[j - 1] +
                           b.char_exponents[j];
            b.sg_gens.push_back(bb);
        }
    }
    return b;
}

std::vector<long long> semigroup_generators(const Branch& b) { return b.sg_gens; }

std::vector<long long> exponent_set(const Branch& b, long long cap, bool include_n) {
    std::set<long long> s;
    if (include_n && b.n <= cap) s.insert(b.n);
    for (size_t j = 0; j < b.char_exponents.size(); ++j) {
        long long ej = b.e_seq[j + 1];
        for (long long e = b.char_exponents[j]; e <= cap; e += ej) s.insert(e);
    }
    return std::vector<long long>(s.begin(), s.end());
}

bool in_exponent_set(const Branch& b, long long beta) {
    for (size_t j = 0; j < b.char_exponents.size(); ++j) {
        long long bj = b.char_exponents[j];
        if (beta >= bj && (beta - bj) % b.e_seq[j + 1] == 0) return true;
    }
    return false;
}

long long next_exponent(const Branch& b, long long beta) {
    if (beta == b.n) return b.char_exponents[0];
    long long best = -1;
    for (size_t j = 0; j < b.char_exponents.size(); ++j) {
        long long bj = b.char_exponents[j];
        long long ej = b.e_seq[j + 1];
        long long cand;
        if (beta < bj) {
            cand = bj;
        } else {
            cand = bj + ((beta - bj) / ej + 1) * ej;
        }
        if (best == -1 || cand < best) best = cand;
    }
    return best;
}

long long prev_exponent(const Branch& b, long long beta) {
    long long best = -1;
    for (size_t j = 0; j < b.char_exponents.size(); ++j) {
        long long bj = b.char_exponents[j];
        long long ej = b.e_seq[j + 1];
        if (beta <= bj) continue;
        long long k = (beta - bj - 1) / ej;
        long long cand = bj + k * ej;
        if (cand > best) best = cand;
    }
    if (best == -1)
        throw InputError("prev_exponent: no exponent below " + std::to_string(beta));
    return best;
}

ParamCurve truncation(const Branch& b, long long beta) {
    ParamCurve c;
    c.n = b.n;
    long long g = b.n;
    for (const auto& [e, a] : b.terms) {
        if (e >= beta) break;
        c.terms.emplace(e, ParamScalar(a));
        g = std::gcd(g, e);
    }
    c.primitivity = g;
    return c;
}

long long Semigroup::max_apery() const {
    return *std::max_element(apery.begin(), apery.end());
}

Semigroup make_semigroup(const std::vector<long long>& gens) {
    if (gens.empty()) throw InputError("semigroup needs generators");
    long long g = 0;
    for (long long x : gens) {
        if (x <= 0) throw InputError("semigroup generators must be positive");
        g = std::gcd(g, x);
    }
    if (g != 1) throw InputError("semigroup generators must have gcd 1");

    Semigroup s;
    s.gens = gens;
    s.modulus = *std::min_element(gens.begin(), gens.end());
    long long m = s.modulus;

    // Dijkstra on residues mod m: minimal representable element per class.
    const long long INF = -1;
    s.apery.assign(static_cast<size_t>(m), INF);
    s.apery[0] = 0;
    std::set<std::pair<long long, long long>> pq; // (value, class)
    pq.insert({0, 0});
    while (!pq.empty()) {
        auto [v, c] = *pq.begin();
        pq.erase(pq.begin());
        if (s.apery[static_cast<size_t>(c)] != v) continue;
        for (long long gn : gens) {
            long long nv = v + gn;
            long long nc = nv % m;
            long long& slot = s.apery[static_cast<size_t>(nc)];
            if (slot == INF || nv < slot) {
                if (slot != INF) pq.erase({slot, nc});
                slot = nv;
                pq.insert({nv, nc});
            }
        }
    }
    long long mx = s.max_apery();
    s.conductor = mx - m + 1;
    if (s.conductor < 0) s.conductor = 0;
    return s;
}

} // namespace kdv
