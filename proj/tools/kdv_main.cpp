#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kdv/directions.hpp"
#include "kdv/engine.hpp"
#include "kdv/errors.hpp"
#include "kdv/json_io.hpp"
#include "kdv/oracle.hpp"
#include "kdv/pullback.hpp"
#include "kdv/randgen.hpp"
#include "kdv/semimodule.hpp"

namespace fs = std::filesystem;
using namespace kdv;

namespace {

struct OutputOptions {
    bool pretty = false;
    std::string out_path;
};

void emit(const Json& j, const OutputOptions& opt) {
    std::string text = j.dump(opt.pretty ? 2 : -1);
    text.push_back('\n');
    if (opt.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opt.out_path);
        if (!out) throw InputError("cannot write " + opt.out_path);
        out << text;
    }
}

Json info_json(const Branch& b) {
    Semigroup sg = make_semigroup(b.sg_gens);
    Json j;
    j["n"] = b.n;
    j["genus"] = b.genus();
    j["char_exponents"] = b.char_exponents;
    j["e_seq"] = b.e_seq;
    j["n_seq"] = b.n_seq;
    j["nu_seq"] = b.nu_seq;
    j["semigroup"] = b.sg_gens;
    j["conductor"] = sg.conductor;
    long long cap = b.max_support_exponent() + 2 * b.n;
    j["exponents_prefix"] = exponent_set(b, cap);
    return j;
}

Json lambda_json(const Branch& b, long long bound) {
    CxBasis basis = construct_cx_basis(b);
    ValueSemimodule lam = lambda_from_basis(basis.values(), b.n);
    if (bound <= 0) bound = lam.max_class_min() + 2 * b.n;
    Json j;
    j["n"] = b.n;
    j["class_min"] = lam.class_min;
    j["conductor"] = lam.conductor();
    j["bound"] = bound;
    j["elements"] = lam.elements_up_to(bound);
    return j;
}

std::vector<FormReport> classify_all(const Branch& b, const CxBasis& basis,
                                     const StageTrace& trace, bool with_companion) {
    std::vector<FormReport> reports;
    for (size_t i = 0; i < basis.entries.size(); ++i)
        reports.push_back(classify_form(basis, i, trace, b, with_companion));
    return reports;
}

Json run_single(const Branch& b, const std::string& kind, bool with_trace) {
    StageTrace trace;
    CxBasis basis = construct_cx_basis(b, &trace);
    Json j;
    if (kind == "all") {
        j = basis_report_json(b, basis, nullptr);
    } else {
        SgContext ctx = make_sg_context(b.sg_gens);
        ValueSemimodule lam = lambda_from_basis(basis.values(), b.n);
        CollectionKind ck = kind == "cx"  ? CollectionKind::CX
                            : kind == "s" ? CollectionKind::S
                            : kind == "cw" ? CollectionKind::CW
                                           : CollectionKind::C;
        j["n"] = b.n;
        j[kind + "_basis"] =
            ck == CollectionKind::CX ? basis.values() : minimal_generators(lam, ck, ctx);
    }
    if (with_trace) j["trace"] = trace_to_json(trace);
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"exact contact orders of 1-forms on plane branch singularities"};
    app.require_subcommand(1);
    app.fallthrough(); // global output flags may follow the subcommand

    OutputOptions out;
    app.add_flag("--pretty", out.pretty, "indent JSON output");
    bool json_flag = false;
    app.add_flag("--json", json_flag, "force JSON output (default)");
    app.add_option("--out", out.out_path, "write output to a file");

    std::string file, kind = "all", form_text, dir_path;
    long long bound = 0;
    bool with_trace = false;
    std::uint64_t seed = 1;
    int genus = 0;

    auto* info = app.add_subcommand("info", "numerical invariants of a curve file");
    info->add_option("file", file)->required();

    auto* basis = app.add_subcommand("basis", "bases of differential values");
    basis->add_option("file", file)->required();
    basis->add_option("--kind", kind, "cx|s|cw|c|all")
        ->check(CLI::IsMember({"cx", "s", "cw", "c", "all"}));
    basis->add_flag("--trace", with_trace, "include the stage-by-stage trace");

    auto* lambda = app.add_subcommand("lambda", "the semimodule of values");
    lambda->add_option("file", file)->required();
    lambda->add_option("--bound", bound, "list elements up to this bound");

    auto* dirs = app.add_subcommand("directions", "singular directions per exponent");
    dirs->add_option("file", file)->required();

    auto* classify = app.add_subcommand("classify", "classify the basis 1-forms");
    classify->add_option("file", file)->required();

    auto* oracle = app.add_subcommand("oracle-check", "compare against the brute-force oracle");
    oracle->add_option("file", file)->required();

    auto* decomp = app.add_subcommand("decompose", "decompose a 1-form over the basis");
    decomp->add_option("file", file)->required();
    decomp->add_option("--form", form_text, "e.g. \"y dy\" or \"y dx - 2/3 x dy\"")->required();
    decomp->add_option("--bound", bound, "order bound (default 4*(max basis value + n))");

    auto* batch = app.add_subcommand("batch", "process every .json curve in a directory");
    batch->add_option("dir", dir_path)->required();
    batch->add_option("--out", out.out_path, "directory for reports (default: input dir)");

    auto* random = app.add_subcommand("random", "emit a random valid curve file");
    random->add_option("--seed", seed, "generator seed")->required();
    random->add_option("--genus", genus, "genus (default random in 1..3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (info->parsed()) {
        emit(info_json(load_branch_file(file)), out);
    } else if (basis->parsed()) {
        emit(run_single(load_branch_file(file), kind, with_trace), out);
    } else if (lambda->parsed()) {
        emit(lambda_json(load_branch_file(file), bound), out);
    } else if (dirs->parsed()) {
        Branch b = load_branch_file(file);
        emit(directions_to_json(singular_directions(b)), out);
    } else if (classify->parsed()) {
        Branch b = load_branch_file(file);
        StageTrace trace;
        CxBasis cb = construct_cx_basis(b, &trace);
        emit(classification_to_json(cb, classify_all(b, cb, trace, true)), out);
    } else if (oracle->parsed()) {
        Branch b = load_branch_file(file);
        OracleComparison cmp = oracle_compare(b);
        emit(oracle_comparison_json(cmp), out);
        if (cmp.equal)
            std::cerr << "OK: lambda agrees on [1, " << cmp.bound << "]\n";
        else
            std::cerr << "MISMATCH at " << cmp.first_discrepancy << "\n";
        if (!cmp.equal) return 1;
    } else if (decomp->parsed()) {
        Branch b = load_branch_file(file);
        CxBasis cb = construct_cx_basis(b);
        OneForm w = OneForm::parse(form_text);
        long long T = bound > 0 ? bound : default_order_bound(cb);
        std::vector<std::pair<OneForm, Value>> basis_pairs;
        for (const auto& e : cb.entries) basis_pairs.emplace_back(e.form, e.value);
        Decomposition dec = decompose(w, basis_pairs, b, T);
        Json j;
        j["form"] = w.str();
        j["bound"] = T;
        Json coeffs = Json::array();
        for (size_t i = 0; i < cb.entries.size(); ++i) {
            Json c;
            c["value"] = cb.entries[i].value.get();
            c["basis_form"] = cb.entries[i].form.str();
            Json poly = Json::array();
            for (const auto& [xe, r] : dec.coefficients[i])
                poly.push_back(Json::array({xe, r.str()}));
            c["poly"] = std::move(poly);
            coeffs.push_back(std::move(c));
        }
        j["coefficients"] = std::move(coeffs);
        j["residual_order"] = value_to_json(dec.residual_order);
        emit(j, out);
    } else if (batch->parsed()) {
        fs::path dir(dir_path);
        if (!fs::is_directory(dir)) throw InputError(dir_path + " is not a directory");
        fs::path outdir = out.out_path.empty() ? dir : fs::path(out.out_path);
        fs::create_directories(outdir);
        std::vector<fs::path> files;
        for (const auto& ent : fs::directory_iterator(dir)) {
            if (ent.path().extension() == ".json" &&
                ent.path().filename().string().find(".report") == std::string::npos)
                files.push_back(ent.path());
        }
        std::sort(files.begin(), files.end());
        std::ostringstream csv;
        csv << "file,n,char_exponents,cx_basis,direction_count,status\n";
        for (const fs::path& p : files) {
            std::string status = "ok";
            try {
                Branch b = load_branch_file(p.string());
                StageTrace trace;
                CxBasis cb = construct_cx_basis(b, &trace);
                Json rep = basis_report_json(b, cb, nullptr);
                std::vector<DirectionReport> dr = singular_directions(b, trace);
                rep["directions"] = directions_to_json(dr);
                std::ofstream o(outdir / (p.stem().string() + ".report.json"));
                o << rep.dump(2) << "\n";
                size_t ndir = 0;
                for (const auto& r : dr) ndir += r.directions.size();
                auto join = [](const std::vector<long long>& v) {
                    std::string s;
                    for (size_t i = 0; i < v.size(); ++i)
                        s += (i ? " " : "") + std::to_string(v[i]);
                    return s;
                };
                csv << p.filename().string() << "," << b.n << ","
                    << join(b.char_exponents) << "," << join(cb.values()) << "," << ndir
                    << "," << status << "\n";
            } catch (const Error& e) {
                csv << p.filename().string() << ",,,,," << "error: " << e.what() << "\n";
            }
        }
        std::ofstream summary(outdir / "summary.csv");
        summary << csv.str();
        std::cout << csv.str();
    } else if (random->parsed()) {
        Rng rng(seed);
        RandomBranchOptions ro;
        ro.genus = genus;
        Branch b = random_branch(rng, ro);
        emit(branch_to_json(b), out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InternalError& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
