#pragma once

#include <optional>
#include <vector>

#include "kdv/branch.hpp"
#include "kdv/pullback.hpp"
#include "kdv/value.hpp"
#include "kdv/xypoly.hpp"

namespace kdv {

// One reduction of the transformation: target <- target - c x^|d| * source.
// `tested` is the index whose containment order sat at the current exponent;
// d = (value of tested - value of partner)/n, and a negative d swaps which
// of the two forms is rewritten.
struct ReductionRecord {
    int tested;  // k
    int partner; // j
    long long d; // signed; negative swaps the roles
    Rat c;
    int target;  // the index that actually changed
};

enum class FormSet { Init, Low, Upp };

struct StageFormMeta {
    int index = 0; // 0-based position in the family
    Value value;
    long long cls = -1; // value mod n, -1 for infinite values
    FormSet set = FormSet::Init;
    bool beg_at_current = false;
    // data of the leading coefficient along the one-parameter family at the
    // stage exponent (Upp forms at stages with a non-characteristic exponent)
    std::optional<Value> generic_order;
    Rat lead_const; // C(a) = lead_const + lead_lin * (a - a_Gamma)
    Rat lead_lin;
};

struct StageRecord {
    int level = 0;       // l+1
    long long stage = 0; // s
    long long exponent = 0; // n^s(beta_{l+1}); beta_{l+1} at stage 0
    bool terminal = false;
    std::vector<StageFormMeta> forms;
    std::vector<ReductionRecord> reductions;
    std::vector<int> qset; // Upp indices with no matching Low class below
    std::vector<OneForm> qset_forms; // copies, for direction verification
};

struct LevelInfo {
    int level = 0; // l+1
    std::vector<int> hat_upp;
    std::vector<int> tilde_upp;
    long long stages = 0;
};

struct StageTrace {
    std::vector<StageRecord> stages;
    std::vector<LevelInfo> levels;
    // per final-family index: stage count of reductions that changed it
    std::vector<long long> times_reduced;
};

struct CxBasisEntry {
    OneForm form;
    Value value;
    long long cls = 0;
    int final_index = 0; // 0-based index in the terminal family of level g
};

struct CxBasis {
    long long n = 0;
    std::vector<CxBasisEntry> entries; // sorted by increasing value
    std::vector<long long> values() const {
        std::vector<long long> v;
        v.reserve(entries.size());
        for (const auto& e : entries) v.push_back(e.value.get());
        return v;
    }
};

struct EngineOptions {
    bool validate = true;        // run the per-stage structural checks
    long long stage_cap_factor = 4;
    bool keep_qset_forms = true;
};

CxBasis construct_cx_basis(const Branch& b, StageTrace* trace = nullptr,
                           const EngineOptions& opts = {});

enum class FormType { Trivial, Dicritical, InducedCharacteristic, RootMultiple };

// Dicritical = fans the branch past its birth characteristic exponent (type 1),
// InducedCharacteristic = created at the slot that keeps the next
// characteristic value (type 2), RootMultiple = an untouched power of the
// approximate root times an earlier form (type 3).
struct FormReport {
    FormType type = FormType::Trivial;
    int birth_level = 0;
    int kappa = 0; // max k with betabar_k < value (0 when value <= betabar_1)
    Value beg;
    std::optional<ParamCurve> companion;
};

FormReport classify_form(const CxBasis& basis, size_t entry, const StageTrace& trace,
                         const Branch& b, bool with_companion = true, long long T = -1);

// Default order bound used for companions and decompositions.
long long default_order_bound(const CxBasis& basis);

} // namespace kdv
