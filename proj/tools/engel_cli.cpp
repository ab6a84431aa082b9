// Command-line front end: dual enumeration, census checks, Gaussian sweeps,
// operator export, spectrum verification, and report emission.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "engel/checks.hpp"

using namespace engel;

namespace {

struct CommonOpts {
    i64 p = 5;
    int level = 1;
    double alpha = 1.0;
    double tol = 1e-9;
    unsigned long long seed = 0;
    std::string format = "json";
    std::string out;
    std::string translation = "right";
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--p", o.p, "prime (>= 5)");
    cmd->add_option("--level", o.level, "quotient level n");
    cmd->add_option("--alpha", o.alpha, "operator order alpha > 0");
    cmd->add_option("--tol", o.tol, "float tolerance");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--translation", o.translation, "translation convention")
        ->check(CLI::IsMember({"right", "left"}));
    cmd->add_option("--jobs", o.jobs, "worker threads (0 = hardware)");
}

Translation side_of(const CommonOpts& o) {
    return o.translation == "left" ? Translation::left : Translation::right;
}

Config config_of(const CommonOpts& o) {
    Config c;
    c.p = o.p; c.n = o.level; c.alpha = o.alpha;
    c.tol_float = o.tol; c.rng_seed = o.seed;
    c.validate();
    return c;
}

i64 budget_dim() {
    const char* env = std::getenv("ENGEL_BUDGET_DIM");
    if (!env) return kDefaultBudgetDim;
    return std::strtoll(env, nullptr, 10);
}

/// writes payload to --out or stdout; records a manifest next to the output
int emit(const CommonOpts& o, const std::string& command, const std::string& payload,
         const std::string& started, bool has_pass = false, bool pass = false) {
    std::vector<std::string> outputs;
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) {
            std::cerr << "cannot open output file: " << o.out << "\n";
            return 2;
        }
        f << payload;
        outputs.push_back(o.out);
    } else {
        std::cout << payload;
    }
    RunManifest m;
    m.config = config_of(o);
    m.command = command;
    m.started = started;
    m.finished = iso_timestamp();
    m.outputs = outputs;
    m.has_pass = has_pass;
    m.pass = pass;
    std::string mpath = o.out.empty() ? "engel-manifest.json" : o.out + ".manifest.json";
    append_manifest(m, mpath);
    if (has_pass) return pass ? 0 : 1;
    return 0;
}

i64 dense_dim(const CommonOpts& o) {
    i64 d = 1;
    for (int k = 0; k < 4 * o.level; ++k) d *= o.p;
    return d;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"harmonic analysis of the compact p-adic Engel group"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string vt_dirs = "1";

    auto* c_dual = app.add_subcommand("dual", "enumerate the unitary dual");
    add_common(c_dual, o);
    auto* c_pw = app.add_subcommand("peter-weyl", "census table with sum d^2 check");
    add_common(c_pw, o);
    auto* c_gauss = app.add_subcommand("gauss-check", "Gaussian integral sweep vs oracle");
    add_common(c_gauss, o);
    auto* c_ortho = app.add_subcommand("ortho-check", "character orthogonality");
    add_common(c_ortho, o);
    i64 ortho_pairs = 200;
    c_ortho->add_option("--pairs", ortho_pairs, "sampled pairs at level >= 2");
    auto* c_rep = app.add_subcommand("rep-check", "representation homomorphism/unitarity");
    add_common(c_rep, o);
    int rep_pairs = 100;
    c_rep->add_option("--pairs", rep_pairs, "random pairs per dual point");
    auto* c_vt = app.add_subcommand("vt-matrix", "sparse export of a directional operator");
    add_common(c_vt, o);
    c_vt->add_option("--dir", vt_dirs, "direction 1..4, or comma list");
    auto* c_spec = app.add_subcommand("spectrum", "closed-form spectral lines");
    add_common(c_spec, o);
    auto* c_verify = app.add_subcommand("verify-spectrum", "closed form vs oracle report");
    add_common(c_verify, o);
    auto* c_ell = app.add_subcommand("ellipticity", "symbol norms, growth fit, gap");
    add_common(c_ell, o);
    auto* c_pl = app.add_subcommand("plancherel", "Fourier round trip and Plancherel");
    add_common(c_pl, o);
    int pl_count = 20;
    c_pl->add_option("--count", pl_count, "number of random functions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;   // --help is 0; any usage error is 2
    }

    std::string started = iso_timestamp();
    try {
        if (c_dual->parsed()) {
            config_of(o);
            json arr = json::array();
            for (const DualPoint& d : enumerate_dual(o.p, o.level))
                arr.push_back(dual_point_json(d, o.p));
            return emit(o, "dual", arr.dump(2) + "\n", started);
        }
        if (c_pw->parsed()) {
            config_of(o);
            DualCensus c = census(o.p, o.level);
            std::string payload;
            if (o.format == "csv") {
                std::ostringstream os;
                os << "p,level,abelian,heisenberg,big_xi3,big_xi4,sum_dim_sq,expected,pass\n"
                   << o.p << ',' << o.level << ',' << c.n_abelian << ',' << c.n_heisenberg
                   << ',' << c.n_big_xi3 << ',' << c.n_big_xi4 << ',' << c.sum_dim_sq
                   << ',' << c.expected << ',' << (c.pass ? 1 : 0) << '\n';
                payload = os.str();
            } else {
                payload = census_json(c, o.p, o.level).dump(2) + "\n";
            }
            return emit(o, "peter-weyl", payload, started, true, c.pass);
        }
        if (c_gauss->parsed()) {
            config_of(o);
            GaussSweepResult r = gauss_sweep(o.p, true, o.jobs);
            bool pass = r.max_err <= o.tol;
            Lemma22Result l = lemma22_check(o.p, std::min(o.level, 2));
            pass = pass && l.pass;
            std::string payload = r.csv;
            if (o.format == "json") {
                payload = json{{"p", o.p}, {"cases", r.cases},
                               {"max_err", fmt_double(r.max_err)},
                               {"lemma22_pairs", l.pairs}, {"lemma22_pass", l.pass},
                               {"pass", pass}}.dump(2) + "\n";
            }
            return emit(o, "gauss-check", payload, started, true, pass);
        }
        if (c_ortho->parsed()) {
            config_of(o);
            OrthoCheckResult r = ortho_check(o.p, o.level, ortho_pairs, o.seed, o.jobs);
            bool pass = r.max_norm_dev <= o.tol && r.max_pair_dev <= o.tol;
            json j{{"p", o.p}, {"level", o.level}, {"xi_count", r.xi_count},
                   {"pairs_checked", r.pairs_checked},
                   {"max_norm_dev", fmt_double(r.max_norm_dev)},
                   {"max_pair_dev", fmt_double(r.max_pair_dev)}, {"pass", pass}};
            return emit(o, "ortho-check", j.dump(2) + "\n", started, true, pass);
        }
        if (c_rep->parsed()) {
            config_of(o);
            RepCheckResult r = rep_check(o.p, o.level, rep_pairs, o.seed, o.jobs);
            bool pass = r.max_hom_err <= o.tol && r.max_unitarity_err <= o.tol;
            json j{{"p", o.p}, {"level", o.level}, {"xi_count", r.xi_count},
                   {"pairs_per_xi", r.pairs_per_xi},
                   {"max_hom_err", fmt_double(r.max_hom_err)},
                   {"max_unitarity_err", fmt_double(r.max_unitarity_err)}, {"pass", pass}};
            return emit(o, "rep-check", j.dump(2) + "\n", started, true, pass);
        }
        if (c_vt->parsed()) {
            config_of(o);
            if (dense_dim(o) > budget_dim()) {
                std::cerr << "vt-matrix: dimension " << dense_dim(o)
                          << " exceeds ENGEL_BUDGET_DIM " << budget_dim() << "\n";
                return 2;
            }
            QuotientTable quot(o.p, o.level);
            OperatorMatrix A;
            A.p = o.p; A.n = o.level; A.alpha = o.alpha;
            A.side = side_of(o); A.dim = quot.size();
            std::stringstream ss(vt_dirs);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                int j = std::stoi(tok);
                A.dirs.push_back(j);
                detail::append_directional(A, quot, j, o.alpha, side_of(o), 0);
            }
            return emit(o, "vt-matrix", operator_json(A).dump() + "\n", started);
        }
        if (c_spec->parsed()) {
            config_of(o);
            auto dual = enumerate_dual(o.p, o.level);
            std::string payload;
            if (o.format == "csv") {
                payload = spectrum_csv(dual, o.p, o.alpha);
            } else {
                json arr = json::array();
                for (const DualPoint& xi : dual)
                    for (const SpectralLine& ln : closed_form_lines(xi, o.p, o.alpha))
                        arr.push_back({{"xi", dual_point_json(xi, o.p)},
                                       {"hprime", ln.hprime},
                                       {"tau", class_to_string(ln.tau, o.p)},
                                       {"e1", ln.e1}, {"e2", ln.e2},
                                       {"value", fmt_double(ln.value)},
                                       {"multiplicity", ln.multiplicity}});
                payload = arr.dump(2) + "\n";
            }
            return emit(o, "spectrum", payload, started);
        }
        if (c_verify->parsed()) {
            config_of(o);
            SpectrumReport rep = verify_spectrum(o.p, o.level, o.alpha, o.tol,
                                                 side_of(o), budget_dim(), o.jobs);
            return emit(o, "verify-spectrum", report_json(rep).dump(2) + "\n",
                        started, true, rep.pass);
        }
        if (c_ell->parsed()) {
            config_of(o);
            EllipticityReport r = ellipticity_report(o.p, o.level, o.alpha, o.jobs);
            std::string payload;
            if (o.format == "csv") {
                auto dual = enumerate_dual(o.p, o.level);
                std::ostringstream os;
                os << "xi1,xi2,xi3,xi4,case_tag,xi_norm,op_norm,inf_norm\n";
                for (const EllipticityRow& row : r.rows) {
                    const DualPoint& xi = dual[row.xi_index];
                    os << class_to_string(xi.xi1, o.p) << ',' << class_to_string(xi.xi2, o.p)
                       << ',' << class_to_string(xi.xi3, o.p) << ','
                       << class_to_string(xi.xi4, o.p) << ',' << case_name(xi.tag) << ','
                       << fmt_double(row.xi_norm) << ',' << fmt_double(row.op_norm) << ','
                       << fmt_double(row.inf_norm) << '\n';
                }
                payload = os.str();
            } else {
                payload = ellipticity_json(r, o.p, o.level, o.alpha).dump(2) + "\n";
            }
            bool pass = r.gap > 0 && std::abs(r.slope_principal - o.alpha) <= 0.1;
            return emit(o, "ellipticity", payload, started, true, pass);
        }
        if (c_pl->parsed()) {
            config_of(o);
            PlancherelResult r = plancherel_check(o.p, o.level, pl_count, o.seed, o.jobs);
            bool pass = r.max_roundtrip_err <= o.tol && r.max_plancherel_err <= o.tol;
            json j{{"p", o.p}, {"level", o.level}, {"functions", r.functions},
                   {"max_roundtrip_err", fmt_double(r.max_roundtrip_err)},
                   {"max_plancherel_err", fmt_double(r.max_plancherel_err)}, {"pass", pass}};
            return emit(o, "plancherel", j.dump(2) + "\n", started, true, pass);
        }
    } catch (const CapacityError& e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
