#include "kdv/json_io.hpp"

#include <fstream>

#include "kdv/errors.hpp"

namespace kdv {

Json branch_to_json(const Branch& b) {
    Json j;
    j["n"] = b.n;
    Json terms = Json::array();
    for (const auto& [e, c] : b.terms) terms.push_back(Json::array({e, c.str()}));
    j["terms"] = std::move(terms);
    return j;
}

Branch branch_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("terms"))
        throw InputError("curve file must be an object with \"n\" and \"terms\"");
    if (!j["n"].is_number_integer()) throw InputError("\"n\" must be an integer");
    long long n = j["n"].get<long long>();
    std::vector<std::pair<long long, Rat>> terms;
    for (const auto& t : j["terms"]) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer())
            throw InputError("each term must be [exponent, \"p/q\"]");
        Rat c = t[1].is_string() ? Rat::parse(t[1].get<std::string>())
                                 : Rat(t[1].get<long long>());
        terms.emplace_back(t[0].get<long long>(), c);
    }
    return parse_branch(n, terms);
}

Branch load_branch_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("malformed JSON in " + path + ": " + e.what());
    }
    return branch_from_json(j);
}

Json curve_to_json(const ParamCurve& c) {
    Json j;
    j["n"] = c.n;
    Json terms = Json::array();
    for (const auto& [e, a] : c.terms) {
        if (!a.is_constant()) throw InputError("cannot serialize a symbolic curve");
        if (!a.constant_term().is_zero())
            terms.push_back(Json::array({e, a.constant_term().str()}));
    }
    j["terms"] = std::move(terms);
    j["primitivity"] = c.primitivity;
    return j;
}

Json value_to_json(const Value& v) {
    if (v.is_infinite()) return Json("infinity");
    return Json(v.get());
}

namespace {

const char* set_name(FormSet s) {
    switch (s) {
    case FormSet::Init: return "init";
    case FormSet::Low: return "low";
    default: return "upp";
    }
}

const char* type_name(FormType t) {
    switch (t) {
    case FormType::Trivial: return "trivial";
    case FormType::Dicritical: return "1";
    case FormType::InducedCharacteristic: return "2";
    default: return "3";
    }
}

} // namespace

Json trace_to_json(const StageTrace& trace) {
    Json stages = Json::array();
    for (const StageRecord& sr : trace.stages) {
        Json s;
        s["level"] = sr.level;
        s["stage"] = sr.stage;
        s["exponent"] = sr.exponent;
        s["terminal"] = sr.terminal;
        Json forms = Json::array();
        for (const StageFormMeta& m : sr.forms) {
            Json f;
            f["index"] = m.index + 1; // 1-based, matching the construction's numbering
            f["value"] = value_to_json(m.value);
            f["class"] = m.cls < 0 ? Json(nullptr) : Json(m.cls);
            f["set"] = set_name(m.set);
            f["beg_at_current"] = m.beg_at_current;
            if (m.generic_order) f["generic_order"] = value_to_json(*m.generic_order);
            forms.push_back(std::move(f));
        }
        s["forms"] = std::move(forms);
        Json reds = Json::array();
        for (const ReductionRecord& r : sr.reductions) {
            Json rr;
            rr["k"] = r.tested + 1;
            rr["j"] = r.partner + 1;
            rr["d"] = r.d;
            rr["c"] = r.c.str();
            reds.push_back(std::move(rr));
        }
        s["reductions"] = std::move(reds);
        if (!sr.qset.empty()) {
            Json q = Json::array();
            for (int k : sr.qset) q.push_back(k + 1);
            s["q_set"] = std::move(q);
        }
        stages.push_back(std::move(s));
    }
    Json levels = Json::array();
    for (const LevelInfo& li : trace.levels) {
        Json l;
        l["level"] = li.level;
        Json h = Json::array(), t = Json::array();
        for (int i : li.hat_upp) h.push_back(i + 1);
        for (int i : li.tilde_upp) t.push_back(i + 1);
        l["hat_upp"] = std::move(h);
        l["tilde_upp"] = std::move(t);
        l["stages"] = li.stages;
        levels.push_back(std::move(l));
    }
    Json j;
    j["stages"] = std::move(stages);
    j["levels"] = std::move(levels);
    return j;
}

Json basis_report_json(const Branch& b, const CxBasis& basis,
                       const std::vector<FormReport>* reports) {
    SgContext ctx = make_sg_context(b.sg_gens);
    ValueSemimodule lam = lambda_from_basis(basis.values(), b.n);
    Json j;
    j["n"] = b.n;
    j["cx_basis"] = basis.values();
    j["s_basis"] = minimal_generators(lam, CollectionKind::S, ctx);
    j["cw_basis"] = minimal_generators(lam, CollectionKind::CW, ctx);
    j["c_basis"] = minimal_generators(lam, CollectionKind::C, ctx);
    j["semigroup"] = b.sg_gens;
    Json forms = Json::array();
    for (size_t i = 0; i < basis.entries.size(); ++i) {
        Json f;
        f["value"] = basis.entries[i].value.get();
        f["form"] = basis.entries[i].form.str();
        if (reports) f["type"] = type_name(reports->at(i).type);
        forms.push_back(std::move(f));
    }
    j["cx_forms"] = std::move(forms);
    return j;
}

Json directions_to_json(const std::vector<DirectionReport>& reports) {
    Json arr = Json::array();
    for (const DirectionReport& r : reports) {
        Json j;
        j["exponent"] = r.exponent;
        Json dirs = Json::array();
        for (const Rat& d : r.directions) dirs.push_back(d.str());
        j["directions"] = std::move(dirs);
        Json per = Json::object();
        for (const auto& [k, root] : r.per_index_root)
            per[std::to_string(k + 1)] = root.str();
        j["per_form"] = std::move(per);
        if (r.characteristic) j["characteristic"] = true;
        arr.push_back(std::move(j));
    }
    return arr;
}

Json classification_to_json(const CxBasis& basis, const std::vector<FormReport>& reports) {
    Json arr = Json::array();
    for (size_t i = 0; i < basis.entries.size(); ++i) {
        const FormReport& rep = reports[i];
        Json j;
        j["value"] = basis.entries[i].value.get();
        j["form"] = basis.entries[i].form.str();
        j["type"] = type_name(rep.type);
        j["birth_level"] = rep.birth_level;
        j["kappa"] = rep.kappa;
        j["beg"] = value_to_json(rep.beg);
        if (rep.companion) j["companion"] = curve_to_json(*rep.companion);
        arr.push_back(std::move(j));
    }
    return arr;
}

Json oracle_comparison_json(const OracleComparison& cmp) {
    Json j;
    j["status"] = cmp.equal ? "ok" : "mismatch";
    j["bound"] = cmp.bound;
    j["lambda"] = cmp.engine_values;
    if (!cmp.equal) {
        j["oracle_lambda"] = cmp.oracle_values;
        j["first_discrepancy"] = cmp.first_discrepancy;
    }
    return j;
}

} // namespace kdv
