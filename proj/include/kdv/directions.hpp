#pragma once

#include <map>
#include <vector>

#include "kdv/branch.hpp"
#include "kdv/engine.hpp"
#include "kdv/rational.hpp"

namespace kdv {

// Singular directions at one exponent: the coefficient values at which some
// order in the construction jumps above its generic value and the jump cannot
// be absorbed by a transformation.
struct DirectionReport {
    long long exponent = 0;
    bool characteristic = false;
    std::vector<int> qset;              // contributing Upp indices (0-based)
    std::map<int, Rat> per_index_root;
    std::vector<Rat> directions;        // union of the roots, sorted, deduplicated
};

// Indices of the stage record that admit no Low partner at or below their
// generic order (the jump at such indices cannot be erased).
std::vector<int> q_set(const StageRecord& stage);

// One report per exponent examined by the construction; characteristic
// exponents always report the empty set.  Verifies that every contributing
// lead is degree 1 in the free coefficient (NonLinearLead otherwise).
std::vector<DirectionReport> singular_directions(const Branch& b, const StageTrace& trace);
std::vector<DirectionReport> singular_directions(const Branch& b);

} // namespace kdv
