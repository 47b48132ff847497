#pragma once

#include <vector>

#include "kdv/branch.hpp"

namespace kdv {

// Brute-force computation of the set of orders of 1-forms on [1, bound],
// built on nothing but monomial pullbacks and exact row reduction.  The
// pivot exponents of the echelon form of the monomial rows are exactly the
// realizable orders, since cancellations in a linear combination only ever
// land on pivot positions.
struct EchelonTable {
    long long bound = 0;
    // reduced rows indexed by pivot exponent; dense over [0, bound]
    std::vector<std::vector<Rat>> rows;
    std::vector<long long> row_pivot;
    std::vector<long long> pivot_row; // exponent -> row index, -1 if none

    explicit EchelonTable(long long bound_)
        : bound(bound_), pivot_row(static_cast<size_t>(bound_) + 1, -1) {}

    // Reduces a dense row in place and absorbs it; returns its pivot
    // exponent, or -1 if it vanished on [1, bound].
    long long absorb(std::vector<Rat> row);
    std::vector<long long> pivots() const;
};

struct OracleResult {
    long long bound = 0;
    std::vector<long long> values; // realizable orders within [1, bound]
};

OracleResult oracle_lambda(const Branch& b, long long bound);

struct OracleComparison {
    bool equal = true;
    long long bound = 0;
    long long first_discrepancy = -1;
    std::vector<long long> engine_values;
    std::vector<long long> oracle_values;
};

// Runs the construction and the brute force side by side up to
// max basis value + 2n and reports the first discrepancy if any.
OracleComparison oracle_compare(const Branch& b);

} // namespace kdv
