// ccfan: mutation walks, fan enumeration, verification and rendering for rank-3 cluster-cyclic matrices.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "ccfan/ccfan.hpp"

using namespace ccfan;

namespace {

struct Options {
    std::string file;
    std::vector<std::string> word;
    int depth = 6;
    std::optional<long double> eps_sign, eps_eq;
    std::string checks = "all";
    std::string layers = "cones,orthants";
    unsigned seed = 0;
    std::string out;
    unsigned digits = 0;
    bool json_only = false;
};

Word parse_word(const std::vector<std::string>& parts) {
    Word w;
    for (std::string p : parts) {
        for (char& c : p)
            if (c == ',' || c == '[' || c == ']') c = ' ';
        std::istringstream is(p);
        for (std::string t; is >> t;) {
            if (t.size() != 1 || t[0] < '1' || t[0] > '3') throw Error(ErrorKind::Input, "word letters must be 1, 2 or 3, got '" + t + "'");
            w.push_back(t[0] - '1');
        }
    }
    if (!is_reduced(w)) throw Error(ErrorKind::Input, "word is not reduced: " + word_string(w));
    return w;
}

std::vector<std::string> split_list(const std::string& s, const std::vector<std::string>& allowed, const char* what) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
        if (cur.empty()) continue;
        if (cur == "all") return allowed;
        if (std::find(allowed.begin(), allowed.end(), cur) == allowed.end())
            throw Error(ErrorKind::Input, std::string("unknown ") + what + " '" + cur + "'");
        out.push_back(cur);
    }
    return out;
}

/// precision and tolerances for a run to `depth`; user tolerances replace the derived ones
Precision precision_for(const ExchangeMatrix<double>& B, int depth, const Options& o) {
    Precision p = o.digits ? fixed_precision(B, depth, o.digits) : auto_precision(B, depth);
    if (o.eps_sign) p.tol.sign = *o.eps_sign;
    if (o.eps_eq) p.tol.eq = *o.eps_eq;
    return p;
}

/// tolerances for validating the input itself; these match the precision of the file, not of the run
Tol input_tol(const Options& o) {
    Tol t;
    if (o.eps_sign) t.sign = *o.eps_sign;
    if (o.eps_eq) t.eq = *o.eps_eq;
    return t;
}

ExchangeMatrix<double> load(const Options& o) {
    return to_exchange_matrix<double>(read_matrix_file(o.file), input_tol(o));
}

ExchangeMatrix<mp_real> load_mp(const Options& o) {
    return to_exchange_matrix<mp_real>(read_matrix_file(o.file), input_tol(o));
}

void check_depth(int depth, const Config& cfg) {
    if (depth < 0 || depth > cfg.depth_cap)
        throw Error(ErrorKind::DepthExceeded, "depth must lie in [0, " + std::to_string(cfg.depth_cap) + "]");
}

int cmd_mutate(const Options& o) {
    Word w = parse_word(o.word);
    ExchangeMatrix<double> Bd = load(o);
    Precision P = precision_for(Bd, static_cast<int>(w.size()), o);
    DigitsScope scope(P.digits);
    Config cfg;
    cfg.tol = P.tol;
    Seed<mp_real> s = initial_seed(load_mp(o), cfg.tol);
    auto print = [&](const Seed<mp_real>& x) {
        std::cout << "word [" << word_string(x.word, ",") << "]  " << x.st() << "  " << pos_name(x.position().kind) << "\n";
        std::cout << "B:\n" << format_matrix(x.B.b) << "C:\n" << format_matrix(x.C) << "G:\n" << format_matrix(x.G);
        std::cout << "eps: " << x.eps[0] << " " << x.eps[1] << " " << x.eps[2] << "\n";
        if (x.kst) std::cout << "kst: " << x.kst->K + 1 << " " << x.kst->S + 1 << " " << x.kst->T + 1 << "\n";
        std::cout << "\n";
    };
    print(s);
    for (int k : w) {
        s = mutate_seed(s, k, cfg.depth_cap);
        print(s);
    }
    return 0;
}

int cmd_minimize(const Options& o) {
    ExchangeMatrix<double> B = load(o);
    Descent<double> ds = decreasing_sequence(B, 64);
    std::cout << "delta: " << (ds.word.empty() ? std::string("(empty)") : word_string(ds.word)) << "\n";
    std::cout << "minimum:\n" << format_matrix(ds.minimum.b);
    std::cout << "d: " << ds.minimum.d[0] << " " << ds.minimum.d[1] << " " << ds.minimum.d[2] << "\n";
    std::cout << "markov_constant: " << markov_constant(B) << "\n";
    return 0;
}

int cmd_fan(const Options& o) {
    Config cfg;
    check_depth(o.depth, cfg);
    ExchangeMatrix<double> Bd = load(o);
    Precision P = precision_for(Bd, o.depth, o);
    DigitsScope scope(P.digits);
    cfg.tol = P.tol;
    walk_tree<mp_real>(initial_seed(load_mp(o), cfg.tol), o.depth, [&](const Seed<mp_real>& s) {
        std::cout << seed_json(s).dump() << "\n";
        return true;
    }, cfg.depth_cap);
    return 0;
}

int cmd_verify(const Options& o) {
    Config cfg;
    check_depth(o.depth, cfg);
    std::vector<std::string> names = split_list(o.checks, all_check_names(), "check");
    ExchangeMatrix<double> Bd = load(o);
    Precision P = precision_for(Bd, o.depth, o);
    DigitsScope scope(P.digits);
    cfg.tol = P.tol;
    ExchangeMatrix<mp_real> B = load_mp(o);
    require_cluster_cyclic(B, P.tol);

    std::vector<Report> reports;
    for (const std::string& n : names) {
        for (int i = 0; i < 3; ++i) {
            std::optional<Report> r;
            if (n == "global") r = check_global_bound(B, i, o.depth, cfg);
            else if (n == "local") r = check_local_bounds(B, i, o.depth, cfg, 64, o.seed);
            else if (n == "signs") r = check_sign_table(B, i, o.depth, cfg);
            else if (n == "monotone") r = check_monotonicity(B, i, o.depth, cfg);
            if (!r) break;
            r->check += "[" + std::to_string(i + 1) + "]";
            reports.push_back(*r);
        }
        if (n == "separate") reports.push_back(check_separateness(B, o.depth, cfg));
        else if (n == "nonperiodic") reports.push_back(check_nonperiodicity(B, o.depth, cfg));
        else if (n == "simplified") reports.push_back(check_simplified_bound(B, o.depth, cfg));
        else if (n == "fanstructure") reports.push_back(check_fan_structure(B, o.depth, cfg));
    }
    bool ok = true;
    nlohmann::json doc;
    doc["depth"] = o.depth;
    doc["digits"] = P.digits;
    doc["eps_sign"] = static_cast<double>(P.tol.sign);
    doc["eps_eq"] = static_cast<double>(P.tol.eq);
    doc["reports"] = nlohmann::json::array();
    for (const Report& r : reports) {
        ok = ok && r.ok;
        doc["reports"].push_back(report_json(r));
    }
    doc["ok"] = ok;
    if (!o.json_only) {
        std::cout << "depth " << o.depth << ", " << P.digits << " digits\n";
        for (const Report& r : reports) std::cout << format_report(r);
        std::cout << (ok ? "all checks passed" : "violations found") << "\n--- json ---\n";
    }
    std::cout << doc.dump(2) << "\n";
    return ok ? 0 : 1;
}

int cmd_render(const Options& o) {
    Config cfg;
    check_depth(o.depth, cfg);
    std::vector<std::string> ls = split_list(o.layers, all_layer_names(), "layer");
    ExchangeMatrix<double> Bd = load(o);
    Precision P = precision_for(Bd, o.depth, o);
    DigitsScope scope(P.digits);
    cfg.tol = P.tol;
    RenderScene sc = build_scene(load_mp(o), o.depth, std::set<std::string>(ls.begin(), ls.end()), cfg);
    std::string svg = to_svg(sc);
    if (o.out.empty() || o.out == "-") {
        std::cout << svg;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw Error(ErrorKind::Input, "cannot write " + o.out);
        f << svg;
        for (const auto& [k, v] : sc.counts) std::cerr << k << ": " << v << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mutation dynamics, G-fan bounds and verifiers for rank-3 cluster-cyclic exchange matrices"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* c) {
        c->add_option("file", o.file, "matrix file (3 rows, optional 'd:' row, or JSON with keys b, d)")->required();
        c->add_option("--eps-sign", o.eps_sign, "tolerance for sign and zero decisions");
        c->add_option("--eps-eq", o.eps_eq, "tolerance for residual assertions");
        c->add_option("--digits", o.digits, "working precision in decimal digits (default: derived from the entry growth)");
    };
    CLI::App* mutate = app.add_subcommand("mutate", "print B, C, G, tropical signs and K/S/T labels along a word");
    common(mutate);
    mutate->add_option("word", o.word, "mutation word, e.g. 1 2 1")->required();
    CLI::App* minimize = app.add_subcommand("minimize", "print the decreasing sequence and the minimum matrix");
    common(minimize);
    CLI::App* fan = app.add_subcommand("fan", "stream seed records as JSON lines");
    common(fan);
    fan->add_option("--depth", o.depth, "maximum word length");
    CLI::App* verify = app.add_subcommand("verify", "run the verifiers and print the report");
    common(verify);
    verify->add_option("--depth", o.depth, "maximum word length");
    verify->add_option("--checks", o.checks, "comma-separated subset of global,local,separate,nonperiodic,signs,monotone,simplified,fanstructure");
    verify->add_option("--seed", o.seed, "offset of the interior sampling sequence");
    verify->add_flag("--json", o.json_only, "print only the JSON document");
    CLI::App* render = app.add_subcommand("render", "write an SVG of the stereographic projection of the fan");
    common(render);
    render->add_option("--depth", o.depth, "maximum word length");
    render->add_option("--layers", o.layers, "comma-separated subset of cones,orthants,global,local,planes");
    render->add_option("-o,--output", o.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        if (*mutate) return cmd_mutate(o);
        if (*minimize) return cmd_minimize(o);
        if (*fan) return cmd_fan(o);
        if (*verify) return cmd_verify(o);
        if (*render) return cmd_render(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
