#include "kdv/directions.hpp"

#include <algorithm>

#include "kdv/errors.hpp"
#include "kdv/pullback.hpp"

namespace kdv {

std::vector<int> q_set(const StageRecord& stage) {
    return stage.qset;
}

std::vector<DirectionReport> singular_directions(const Branch& b, const StageTrace& trace) {
    std::vector<DirectionReport> out;
    for (long long beta : b.char_exponents) {
        DirectionReport r;
        r.exponent = beta;
        r.characteristic = true;
        out.push_back(std::move(r));
    }
    for (const StageRecord& sr : trace.stages) {
        if (sr.stage == 0 || sr.terminal) continue;
        DirectionReport r;
        r.exponent = sr.exponent;
        for (size_t qi = 0; qi < sr.qset.size(); ++qi) {
            int k = sr.qset[qi];
            const StageFormMeta& meta = sr.forms.at(static_cast<size_t>(k));
            if (!meta.generic_order || meta.generic_order->is_infinite())
                throw InternalError("q-set entry without a finite generic order");
            if (meta.lead_lin.is_zero())
                throw NonLinearLeadError("lead coefficient constant in the free coefficient");
            // exact degree check of the lead against a direct symbolic pullback
            if (qi < sr.qset_forms.size()) {
                GenericOrderReport g = generic_order(sr.qset_forms[qi], b, sr.exponent);
                if (g.generic_order != *meta.generic_order)
                    throw InternalError("direction verification: generic order mismatch");
                if (g.lead.degree() != 1)
                    throw NonLinearLeadError("lead coefficient has degree " +
                                             std::to_string(g.lead.degree()) +
                                             " in the free coefficient");
            }
            Rat root = b.coeff(sr.exponent) - meta.lead_const / meta.lead_lin;
            r.per_index_root.emplace(k, root);
        }
        for (const auto& [k, root] : r.per_index_root) r.directions.push_back(root);
        std::sort(r.directions.begin(), r.directions.end());
        r.directions.erase(std::unique(r.directions.begin(), r.directions.end()),
                           r.directions.end());
        r.qset = sr.qset;
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [](const DirectionReport& a, const DirectionReport& bb) {
        return a.exponent < bb.exponent;
    });
    return out;
}

std::vector<DirectionReport> singular_directions(const Branch& b) {
    StageTrace trace;
    construct_cx_basis(b, &trace);
    return singular_directions(b, trace);
}

} // namespace kdv
