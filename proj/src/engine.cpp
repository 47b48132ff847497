#include "kdv/engine.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "kdv/approots.hpp"
#include "kdv/errors.hpp"

namespace kdv {

namespace {

struct CapExceeded {};

struct EForm {
    OneForm form;
    Series S; // t * Gamma^*(form)
    Series U; // t * Gamma^*(d form / dy)
    Series V; // (form.ady) o Gamma
    bool low = false;
    mutable std::optional<Value> resolved;

    void invalidate() { resolved.reset(); }
};

struct Runner {
    const Branch& b;
    EngineOptions opts;
    StageTrace* trace;
    long long cap;
    SeriesPuller puller;
    std::vector<EForm> forms;
    std::vector<long long> reduced_counts;
    int level = 0; // l+1 while running a level

    Runner(const Branch& br, StageTrace* tr, const EngineOptions& o, long long cap_)
        : b(br), opts(o), trace(tr), cap(cap_), puller(br, cap_) {}

    Value value_of(const EForm& f) const {
        if (f.resolved) return *f.resolved;
        OrderInfo o = f.S.order(cap);
        Value v;
        if (o.kind == OrderInfo::Finite) {
            v = Value::finite(o.e);
        } else if (o.kind == OrderInfo::Infinite) {
            v = Value::infinity();
        } else {
            // resolve the truncated order with one untruncated pullback
            v = order_on_branch(f.form, b.as_curve());
        }
        f.resolved = v;
        return v;
    }

    long long cls_of(const EForm& f) const {
        Value v = value_of(f);
        return v.is_infinite() ? -1 : v.get() % b.n;
    }

    // ---- structural checks ------------------------------------------------

    void check_free_basis(long long nu_next) const {
        size_t m = 2 * static_cast<size_t>(nu_next);
        std::vector<std::vector<Rat>> mat(m, std::vector<Rat>(m, Rat(0)));
        for (size_t jf = 0; jf < m; ++jf) {
            for (long long i = 0; i < nu_next; ++i) {
                mat[jf][static_cast<size_t>(i)] = forms[jf].form.adx.coeff(0, i);
                mat[jf][static_cast<size_t>(nu_next + i)] = forms[jf].form.ady.coeff(0, i);
            }
        }
        // row echelon over Q
        size_t rank = 0;
        for (size_t col = 0; col < m && rank < m; ++col) {
            size_t piv = rank;
            while (piv < m && mat[piv][col].is_zero()) ++piv;
            if (piv == m) continue;
            std::swap(mat[piv], mat[rank]);
            for (size_t r = rank + 1; r < m; ++r) {
                if (mat[r][col].is_zero()) continue;
                Rat f = mat[r][col] / mat[rank][col];
                for (size_t c2 = col; c2 < m; ++c2) mat[r][c2] -= f * mat[rank][c2];
            }
            ++rank;
        }
        if (rank != m)
            throw InternalError("stage family is not a free basis (singular frame matrix)");
    }

    void check_low_classes(long long nu_next) const {
        long long e_next = b.e_seq[static_cast<size_t>(level)];
        std::vector<long long> expect;
        for (long long i = 0; i < nu_next; ++i) expect.push_back((i * e_next) % b.n);
        std::sort(expect.begin(), expect.end());
        std::vector<long long> got;
        for (const auto& f : forms)
            if (f.low) got.push_back(cls_of(f));
        std::sort(got.begin(), got.end());
        if (got != expect)
            throw InternalError("Low values do not realize the congruence classes of (e_{l+1})");
    }

    // ---- stage metadata ----------------------------------------------------

    struct UppData {
        OrderInfo generic;
        bool beg_at_current = false;
        Rat c0, c1;
    };

    UppData upp_data(const EForm& f, long long exponent) const {
        UppData d;
        OrderInfo o1 = f.S.order(cap);
        OrderInfo oD = sum_order(f.U, f.V, Rat(exponent), cap - exponent);
        if (oD.kind == OrderInfo::Finite) oD.e += exponent;
        // generic order = min of the two branches of the one-symbol expansion
        if (o1.kind == OrderInfo::Finite &&
            (oD.kind != OrderInfo::Finite || o1.e <= oD.e)) {
            d.generic = o1;
        } else if (oD.kind == OrderInfo::Finite) {
            d.generic = oD;
        } else if (o1.kind == OrderInfo::Beyond || oD.kind == OrderInfo::Beyond) {
            d.generic = OrderInfo::beyond(cap);
        } else {
            d.generic = OrderInfo::infinite();
        }
        if (d.generic.kind == OrderInfo::Finite) {
            long long m = d.generic.e;
            d.c0 = f.S.coeff(m);
            d.c1 = sum_coeff(f.U, f.V, Rat(exponent), m - exponent);
            d.beg_at_current = !d.c0.is_zero();
        } else if (d.generic.kind == OrderInfo::Beyond) {
            OrderInfo o = f.S.order(cap);
            if (o.kind == OrderInfo::Beyond) throw CapExceeded{};
            d.beg_at_current = false;
        }
        return d;
    }

    // ---- reductions ---------------------------------------------------------

    void apply_reduction(int target, int source, long long xshift, const Rat& c) {
        EForm& t = forms[static_cast<size_t>(target)];
        const EForm& s = forms[static_cast<size_t>(source)];
        t.form.sub_scaled(s.form, c, xshift);
        long long sh = xshift * b.n;
        t.S.add_scaled_shifted(s.S, -c, sh, cap);
        t.U.add_scaled_shifted(s.U, -c, sh, cap);
        t.V.add_scaled_shifted(s.V, -c, sh, cap);
        t.invalidate();
        reduced_counts[static_cast<size_t>(target)] += 1;
    }

    Rat reduction_constant(int target, int source, long long xshift) const {
        const EForm& t = forms[static_cast<size_t>(target)];
        const EForm& s = forms[static_cast<size_t>(source)];
        Value vt = value_of(t);
        Rat lt = t.S.coeff(vt.get());
        Rat ls = s.S.coeff(vt.get() - xshift * b.n);
        if (ls.is_zero() || lt.is_zero())
            throw InternalError("reduction: leading coefficients unavailable");
        return lt / ls;
    }

    // ---- trace ---------------------------------------------------------------

    StageRecord make_record(long long stage, long long exponent, bool with_meta) {
        StageRecord rec;
        rec.level = level;
        rec.stage = stage;
        rec.exponent = exponent;
        for (size_t i = 0; i < forms.size(); ++i) {
            StageFormMeta m;
            m.index = static_cast<int>(i);
            m.value = value_of(forms[i]);
            m.cls = cls_of(forms[i]);
            m.set = stage == 0 ? FormSet::Init : (forms[i].low ? FormSet::Low : FormSet::Upp);
            rec.forms.push_back(std::move(m));
        }
        (void)with_meta;
        return rec;
    }

    void push_record(StageRecord&& rec) {
        if (trace) trace->stages.push_back(std::move(rec));
    }

    // ---- level driver ---------------------------------------------------------

    void run_level() {
        int l = level - 1;
        long long nu_l = b.nu_seq[static_cast<size_t>(l)];
        long long nu_next = b.nu_seq[static_cast<size_t>(level)];
        long long n_next = b.n_seq[static_cast<size_t>(l)];
        long long e_l = b.e_seq[static_cast<size_t>(l)];
        long long beta_l1 = b.char_exponents[static_cast<size_t>(l)];
        bool last_level = level == b.genus();
        long long beta_l2 = last_level ? -1 : b.char_exponents[static_cast<size_t>(level)];

        // ---- initial family
        ApproxRoot root = approximate_root(b, level);
        if (root.value_on_branch != b.sg_gens[static_cast<size_t>(level)])
            throw InternalError("approximate root value mismatch");
        Series F = puller.pull_function(root.poly);
        Series Fy = puller.pull_function(root.poly.dy());

        std::vector<XYPoly> fpow{XYPoly::one()};
        std::vector<Series> Fpow{Series{}};
        Fpow[0].add_term(0, Rat(1), cap);
        for (long long a = 1; a < n_next; ++a) {
            fpow.push_back(fpow.back() * root.poly);
            Fpow.push_back(Series::mul(Fpow.back(), F, cap));
        }

        std::vector<EForm> next_forms(2 * static_cast<size_t>(nu_next));
        for (long long a = 0; a < n_next; ++a) {
            // P_a = a * F^{a-1} * Fy, the derivative factor of f^a
            Series Pa;
            if (a >= 1) {
                Pa = Series::mul(Fpow[static_cast<size_t>(a - 1)], Fy, cap);
                Pa.scale(Rat(a));
            }
            for (long long bi = 0; bi < 2 * nu_l; ++bi) {
                size_t idx = static_cast<size_t>(2 * a * nu_l + bi);
                const EForm& base = forms[static_cast<size_t>(bi)];
                if (a == 0) {
                    next_forms[idx] = base;
                    next_forms[idx].low = false;
                    continue;
                }
                EForm nf;
                nf.form = fpow[static_cast<size_t>(a)] * base.form;
                nf.S = Series::mul(Fpow[static_cast<size_t>(a)], base.S, cap);
                nf.U = Series::mul(Pa, base.S, cap);
                nf.U.add_scaled_shifted(Series::mul(Fpow[static_cast<size_t>(a)], base.U, cap),
                                        Rat(1), 0, cap);
                nf.V = Series::mul(Fpow[static_cast<size_t>(a)], base.V, cap);
                next_forms[idx] = std::move(nf);
            }
        }
        forms = std::move(next_forms);
        reduced_counts.resize(forms.size(), 0); // prefix history carries over

        LevelInfo info;
        info.level = level;
        for (long long bi = 0; bi < 2 * nu_l; ++bi) {
            int idx = static_cast<int>(2 * (n_next - 1) * nu_l + bi);
            info.hat_upp.push_back(idx);
            Value v = value_of(forms[static_cast<size_t>(bi)]);
            if (v.is_finite() && ((v.get() - beta_l1) % e_l + e_l) % e_l == 0)
                info.tilde_upp.push_back(idx);
        }

        // ---- stage 0 -> 1: pair up the value classes mod n
        StageRecord rec0 = make_record(0, beta_l1, false);
        std::map<long long, std::vector<int>> by_class;
        for (size_t i = 0; i < forms.size(); ++i) {
            Value v = value_of(forms[i]);
            if (v.is_infinite())
                throw InternalError("initial family contains an invariant form");
            by_class[v.get() % b.n].push_back(static_cast<int>(i));
        }
        for (const auto& [cls, idxs] : by_class) {
            if (idxs.size() != 2)
                throw PairingViolationError("class " + std::to_string(cls) + " has " +
                                            std::to_string(idxs.size()) + " members");
            int j = idxs[0], k = idxs[1];
            long long vj = value_of(forms[static_cast<size_t>(j)]).get();
            long long vk = value_of(forms[static_cast<size_t>(k)]).get();
            if (vj >= vk)
                throw PairingViolationError("pair values out of order in class " +
                                            std::to_string(cls));
            long long d = (vk - vj) / b.n;
            if (d < 1 || (vk - vj) % b.n != 0)
                throw PairingViolationError("pair gap is not a positive multiple of n");
            Rat c = reduction_constant(k, j, d);
            apply_reduction(k, j, d, c);
            if (!(value_of(forms[static_cast<size_t>(k)]) > Value::finite(vk)))
                throw InternalError("stage-1 reduction did not raise the value");
            rec0.reductions.push_back(ReductionRecord{k, j, d, c, k});
        }
        push_record(std::move(rec0));

        // Low/Upp assignment by congruence of the underlying terminal form
        for (long long bi = 0; bi < 2 * nu_l; ++bi) {
            Value v = value_of(forms[static_cast<size_t>(bi)]);
            long long r = v.get() % e_l;
            if (r == 0) {
                forms[static_cast<size_t>(bi)].low = true;
                for (long long s = 1; s < n_next; ++s)
                    forms[static_cast<size_t>(bi + 2 * s * nu_l)].low = false;
            } else if (r == beta_l1 % e_l) {
                for (long long s = 0; s + 1 < n_next; ++s)
                    forms[static_cast<size_t>(bi + 2 * s * nu_l)].low = true;
                forms[static_cast<size_t>(bi + 2 * (n_next - 1) * nu_l)].low = false;
            } else {
                throw InternalError("terminal value outside the two congruence classes");
            }
        }

        // ---- stage loop
        long long stage = 1;
        long long exponent = next_exponent(b, beta_l1);
        long long stage_cap =
            opts.stage_cap_factor * (b.sg_gens.back() + b.n * b.genus()) + 16;
        for (;;) {
            if (opts.validate) {
                check_free_basis(nu_next);
                check_low_classes(nu_next);
                long long nlow = 0;
                for (const auto& f : forms) nlow += f.low ? 1 : 0;
                if (nlow != nu_next) throw InternalError("Low/Upp sizes unbalanced");
                for (long long bi = 0; bi < 2 * nu_l; ++bi)
                    if (!forms[static_cast<size_t>(bi)].low)
                        throw InternalError("previous terminal family left Low");
                for (int idx : info.hat_upp)
                    if (forms[static_cast<size_t>(idx)].low)
                        throw InternalError("hat-Upp index entered Low");
            }

            bool terminal = false;
            if (!last_level) {
                terminal = exponent == beta_l2;
            } else {
                long long max_low = -1;
                bool upp_above = true;
                for (const auto& f : forms) {
                    if (f.low) {
                        Value v = value_of(f);
                        if (v.is_infinite()) throw InternalError("infinite Low value");
                        max_low = std::max(max_low, v.get());
                    }
                }
                for (const auto& f : forms) {
                    if (!f.low) {
                        OrderInfo o = f.S.order(cap);
                        if (o.kind == OrderInfo::Finite && o.e <= max_low) upp_above = false;
                    }
                }
                terminal = upp_above;
            }

            if (terminal) {
                StageRecord rec = make_record(stage, exponent, false);
                rec.terminal = true;
                push_record(std::move(rec));
                break;
            }
            if (last_level && stage > stage_cap)
                throw StageCapError("level-" + std::to_string(level) +
                                    " iteration exceeded the stage cap");

            // metadata snapshot at this stage
            StageRecord rec = make_record(stage, exponent, true);
            struct Planned {
                int k;
                int j;
                long long d;
            };
            std::vector<Planned> plan;
            for (size_t i = 0; i < forms.size(); ++i) {
                if (forms[i].low) continue;
                UppData d = upp_data(forms[i], exponent);
                StageFormMeta& meta = rec.forms[i];
                if (d.generic.kind == OrderInfo::Finite) {
                    meta.generic_order = Value::finite(d.generic.e);
                    meta.lead_const = d.c0;
                    meta.lead_lin = d.c1;
                    if (opts.validate && d.c1.is_zero())
                        throw InternalError(
                            "Upp form lead does not depend on the current coefficient");
                } else if (d.generic.kind == OrderInfo::Infinite) {
                    meta.generic_order = Value::infinity();
                }
                meta.beg_at_current = d.beg_at_current;

                // q-set: no Low partner at or below the generic order
                if (d.generic.kind == OrderInfo::Finite &&
                    value_of(forms[i]).is_finite()) {
                    bool matched = false;
                    for (size_t jj = 0; jj < forms.size(); ++jj) {
                        if (!forms[jj].low) continue;
                        long long vj = value_of(forms[jj]).get();
                        long long diff = d.generic.e - vj;
                        if (diff >= 0 && diff % b.n == 0) matched = true;
                    }
                    if (!matched) {
                        rec.qset.push_back(static_cast<int>(i));
                        if (opts.keep_qset_forms) rec.qset_forms.push_back(forms[i].form);
                    }
                }

                if (d.beg_at_current) {
                    long long vk = value_of(forms[i]).get();
                    int partner = -1;
                    for (size_t jj = 0; jj < forms.size(); ++jj) {
                        if (!forms[jj].low) continue;
                        long long vj = value_of(forms[jj]).get();
                        if ((vk - vj) % b.n == 0) {
                            if (partner != -1)
                                throw NoPartnerError("two Low partners in one class");
                            partner = static_cast<int>(jj);
                        }
                    }
                    if (partner == -1)
                        throw NoPartnerError("no Low partner for class of value " +
                                             std::to_string(vk));
                    long long vj = value_of(forms[static_cast<size_t>(partner)]).get();
                    plan.push_back(Planned{static_cast<int>(i), partner, (vk - vj) / b.n});
                }
            }

            for (const Planned& p : plan) {
                int target = p.d >= 0 ? p.k : p.j;
                int source = p.d >= 0 ? p.j : p.k;
                long long shift = p.d >= 0 ? p.d : -p.d;
                Value before = value_of(forms[static_cast<size_t>(target)]);
                Rat c = reduction_constant(target, source, shift);
                apply_reduction(target, source, shift, c);
                if (!(value_of(forms[static_cast<size_t>(target)]) > before))
                    throw InternalError("transformation did not raise the value");
                if (p.d < 0) {
                    forms[static_cast<size_t>(p.k)].low = true;
                    forms[static_cast<size_t>(p.j)].low = false;
                }
                rec.reductions.push_back(ReductionRecord{p.k, p.j, p.d, c, target});
            }
            push_record(std::move(rec));

            exponent = next_exponent(b, exponent);
            ++stage;
        }

        info.stages = stage;
        if (trace) trace->levels.push_back(std::move(info));

        if (opts.validate && !last_level) {
            // terminal family of level l+1 < g: 2 nu_{l+1} distinct classes and
            // the last slot carries the next semigroup generator
            std::vector<long long> cls;
            for (const auto& f : forms) {
                Value v = value_of(f);
                if (v.is_infinite())
                    throw InternalError("infinite value in a sub-top terminal family");
                cls.push_back(v.get() % b.n);
            }
            std::sort(cls.begin(), cls.end());
            if (std::adjacent_find(cls.begin(), cls.end()) != cls.end())
                throw InternalError("terminal family classes are not distinct");
            Value last = value_of(forms.back());
            if (last != Value::finite(b.sg_gens[static_cast<size_t>(level + 1)]))
                throw InternalError("terminal family does not end at the next generator");
        }
    }

    CxBasis run() {
        // level-0 terminal family (dx, dy)
        forms.clear();
        {
            EForm fx;
            fx.form = OneForm::d_x();
            fx.S = puller.pull_form(fx.form);
            fx.U = Series{};
            fx.V = Series{};
            fx.low = true;
            EForm fy;
            fy.form = OneForm::d_y();
            fy.S = puller.pull_form(fy.form);
            fy.U = Series{};
            fy.V.add_term(0, Rat(1), cap);
            fy.low = true;
            forms.push_back(std::move(fx));
            forms.push_back(std::move(fy));
        }
        reduced_counts.assign(2, 0);

        for (level = 1; level <= b.genus(); ++level) run_level();

        CxBasis basis;
        basis.n = b.n;
        for (size_t i = 0; i < forms.size(); ++i) {
            if (!forms[i].low) continue;
            CxBasisEntry e;
            e.form = forms[i].form;
            e.value = value_of(forms[i]);
            if (e.value.is_infinite()) throw InternalError("infinite basis value");
            e.cls = e.value.get() % b.n;
            e.final_index = static_cast<int>(i);
            basis.entries.push_back(std::move(e));
        }
        std::sort(basis.entries.begin(), basis.entries.end(),
                  [](const CxBasisEntry& a, const CxBasisEntry& bb) {
                      return a.value.get() < bb.value.get();
                  });
        if (static_cast<long long>(basis.entries.size()) != b.n)
            throw InternalError("basis does not have n entries");
        if (trace) trace->times_reduced = reduced_counts;
        return basis;
    }
};

} // namespace

CxBasis construct_cx_basis(const Branch& b, StageTrace* trace, const EngineOptions& opts) {
    Semigroup sg = make_semigroup(b.sg_gens);
    long long base_cap = sg.max_apery() + 2 * b.sg_gens.back() + b.max_support_exponent() +
                         4 * b.n + 64;
    for (int attempt = 0;; ++attempt) {
        if (trace) *trace = StageTrace{};
        try {
            Runner r(b, trace, opts, base_cap);
            return r.run();
        } catch (const CapExceeded&) {
            if (attempt >= 3) throw InternalError("construction cap kept overflowing");
            base_cap *= 2;
        }
    }
}

long long default_order_bound(const CxBasis& basis) {
    long long mx = 0;
    for (const auto& e : basis.entries) mx = std::max(mx, e.value.get());
    return 4 * (mx + basis.n);
}

FormReport classify_form(const CxBasis& basis, size_t entry, const StageTrace& trace,
                         const Branch& b, bool with_companion, long long T) {
    const CxBasisEntry& e = basis.entries.at(entry);
    FormReport rep;

    long long v = e.value.get();
    for (int k = 1; k <= b.genus(); ++k)
        if (b.sg_gens[static_cast<size_t>(k)] < v) rep.kappa = k;

    int fi = e.final_index;
    int birth = 0;
    while (fi >= 2 * b.nu_seq[static_cast<size_t>(birth)]) ++birth;
    rep.birth_level = birth;

    if (birth == 0) {
        rep.type = FormType::Trivial;
        rep.beg = fi == 0 ? Value::finite(b.n) : Value::finite(b.char_exponents[0]);
        return rep;
    }

    bool reduced = false;
    if (static_cast<size_t>(fi) < trace.times_reduced.size())
        reduced = trace.times_reduced[static_cast<size_t>(fi)] > 0;
    const LevelInfo& li = trace.levels.at(static_cast<size_t>(birth - 1));
    bool tilde = std::find(li.tilde_upp.begin(), li.tilde_upp.end(), fi) != li.tilde_upp.end();

    long long beta_birth = b.char_exponents[static_cast<size_t>(birth - 1)];
    if (!reduced) {
        rep.type = FormType::RootMultiple;
        rep.beg = Value::finite(beta_birth);
        return rep;
    }
    rep.type = tilde ? FormType::InducedCharacteristic : FormType::Dicritical;

    // containment order: first exponent past beta_birth whose generic order
    // matches the actual value
    long long limit = birth < b.genus() ? b.char_exponents[static_cast<size_t>(birth)] : v;
    rep.beg = Value::infinity();
    for (long long beta = next_exponent(b, beta_birth); beta <= limit;
         beta = next_exponent(b, beta)) {
        GenericOrderReport g = generic_order(e.form, b, beta);
        if (g.generic_order == e.value) {
            rep.beg = Value::finite(beta);
            break;
        }
    }
    if (rep.beg.is_infinite())
        throw InternalError("classify_form: containment order not located");

    if (rep.type == FormType::InducedCharacteristic) {
        if (birth >= b.genus())
            throw InternalError("characteristic-slot form born at the top level");
        if (rep.beg != Value::finite(b.char_exponents[static_cast<size_t>(birth)]))
            throw InternalError("characteristic-slot form with unexpected containment order");
        // value relation against the underlying terminal form
        long long nu_l = b.nu_seq[static_cast<size_t>(birth - 1)];
        long long n_next = b.n_seq[static_cast<size_t>(birth - 1)];
        int under = fi - static_cast<int>(2 * (n_next - 1) * nu_l);
        for (const StageRecord& sr : trace.stages) {
            if (sr.level == birth && sr.stage == 0) {
                long long vu = sr.forms.at(static_cast<size_t>(under)).value.get();
                long long expect = vu + b.sg_gens[static_cast<size_t>(birth + 1)] -
                                   b.sg_gens[static_cast<size_t>(birth)];
                if (v != expect)
                    throw InternalError("characteristic-slot value relation failed");
                break;
            }
        }
    }

    if (with_companion &&
        (rep.type == FormType::Dicritical || rep.type == FormType::InducedCharacteristic)) {
        long long bound = T > 0 ? T : default_order_bound(basis);
        rep.companion = companion_curve(e.form, b, rep.beg.get(), bound);
    }
    return rep;
}

} // namespace kdv
