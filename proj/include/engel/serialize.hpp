#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "engel/spectral.hpp"

namespace engel {

using json = nlohmann::json;

/// 17 significant digits, enough to round-trip a double bit-for-bit
inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline json to_json(const PAdicScalar& x) {
    return json{{"num", scalar_num_string(x)}, {"den", scalar_den_string(x)}};
}

inline json to_json(const PhaseClass& c) {
    return json{{"numer", std::to_string(c.numer)}, {"expo", c.expo}};
}

inline json to_json(const EngelPoint& x) {
    return json{{"x1", to_json(x.x1)}, {"x2", to_json(x.x2)},
                {"x3", to_json(x.x3)}, {"x4", to_json(x.x4)}};
}

inline json to_json(const QuotientIndex& c) {
    return json{{"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3}, {"c4", c.c4}};
}

inline json dual_point_json(const DualPoint& d, i64 p) {
    return json{{"xi1", class_to_string(d.xi1, p)},
                {"xi2", class_to_string(d.xi2, p)},
                {"xi3", class_to_string(d.xi3, p)},
                {"xi4", class_to_string(d.xi4, p)},
                {"level", d.level},
                {"dim", d.dim},
                {"case_tag", case_name(d.tag)}};
}

inline json multiset_json(const Multiset& m) {
    json arr = json::array();
    for (auto& [v, c] : m.clusters) arr.push_back({{"value", fmt_double(v)}, {"multiplicity", c}});
    return json{{"total", m.total}, {"clusters", arr}};
}

inline json report_json(const SpectrumReport& r) {
    json j;
    j["p"] = r.p;
    j["level"] = r.n;
    j["alpha"] = fmt_double(r.alpha);
    j["tol"] = fmt_double(r.tol);
    j["translation"] = translation_name(r.side);
    j["pass"] = r.pass;
    j["max_pairing_error"] = fmt_double(r.max_pairing_error);
    j["gap"] = fmt_double(r.gap);
    j["gap_closed_form"] = fmt_double(r.gap_closed_form);
    j["closed_form"] = multiset_json(r.closed_form);
    j["oracle"] = multiset_json(r.oracle);
    j["sector_matches"] = r.sector_matches;
    j["sector_total"] = r.sector_total;
    j["max_symbol_sector_error"] = fmt_double(r.max_symbol_sector_error);
    json flg = json::array();
    for (std::size_t i = 0; i < r.flagged.size() && i < 10; ++i)
        flg.push_back({{"line", r.flagged[i].line_index},
                       {"value", fmt_double(r.flagged[i].value)},
                       {"residual", fmt_double(r.flagged[i].residual)}});
    j["flagged_line_count"] = r.flagged.size();
    j["flagged_lines"] = flg;

    const DiscrepancyLedger& L = r.ledger;
    json ori = json::array();
    for (auto& [name, err] : L.orientation.errors)
        ori.push_back({{"combination", name}, {"hom_error", fmt_double(err)}});
    j["discrepancy"] = {
        {"indicator_orientation_passing", L.orientation.passing},
        {"indicator_orientation_probe", ori},
        {"lines_total", L.lines_total},
        {"lines_literal_vs_piecewise_differ", L.lines_literal_differs},
        {"literal_vs_piecewise_samples", L.literal_samples},
        {"oracle_matches_piecewise_reading", L.oracle_matches_piecewise},
        {"oracle_matches_literal_reading", L.oracle_matches_literal},
        {"piecewise_pairing_error", fmt_double(L.piecewise_error)},
        {"literal_pairing_error", fmt_double(L.literal_error)},
        {"kernel_dim_closed_form", L.kernel_dim_closed_form},
        {"kernel_dim_oracle", L.kernel_dim_oracle},
        {"operator_left_invariance_defect", fmt_double(L.invariant_operator_invariance_defect)},
        {"mixed_assembly_matches_lines", L.mixed_assembly_matches_lines},
        {"mixed_assembly_pairing_error", fmt_double(L.mixed_assembly_error)},
        {"mixed_assembly_left_invariance_defect", fmt_double(L.mixed_assembly_invariance_defect)},
    };
    return j;
}

inline json census_json(const DualCensus& c, i64 p, int n) {
    return json{{"p", p}, {"level", n},
                {"abelian", c.n_abelian}, {"heisenberg", c.n_heisenberg},
                {"big_xi3", c.n_big_xi3}, {"big_xi4", c.n_big_xi4},
                {"sum_dim_sq", c.sum_dim_sq}, {"expected", c.expected},
                {"pass", c.pass}};
}

inline json ellipticity_json(const EllipticityReport& r, i64 p, int n, double alpha) {
    return json{{"p", p}, {"level", n}, {"alpha", fmt_double(alpha)},
                {"slope_raw", fmt_double(r.slope_raw)},
                {"slope_principal", fmt_double(r.slope_principal)},
                {"c_lower", fmt_double(r.c_lower)},
                {"c_upper", fmt_double(r.c_upper)},
                {"gap", fmt_double(r.gap)},
                {"sectors", r.rows.size()}};
}

/// spectrum CSV: one row per closed-form line
inline std::string spectrum_csv(const std::vector<DualPoint>& dual, i64 p, double alpha) {
    std::ostringstream os;
    os << "case_tag,xi1,xi2,xi3,xi4,hprime,tau,e1,e2,value,multiplicity\n";
    for (const DualPoint& xi : dual) {
        for (const SpectralLine& ln : closed_form_lines(xi, p, alpha)) {
            os << case_name(xi.tag) << ','
               << class_to_string(xi.xi1, p) << ',' << class_to_string(xi.xi2, p) << ','
               << class_to_string(xi.xi3, p) << ',' << class_to_string(xi.xi4, p) << ','
               << ln.hprime << ',' << class_to_string(ln.tau, p) << ','
               << ln.e1 << ',' << ln.e2 << ','
               << fmt_double(ln.value) << ',' << ln.multiplicity << '\n';
        }
    }
    return os.str();
}

/// gauss-check CSV row
inline std::string gauss_row(const PAdicScalar& a, const PAdicScalar& b, int gamma,
                             const GaussianResult& g, cplx oracle) {
    std::ostringstream os;
    os << scalar_num_string(a) << '/' << scalar_den_string(a) << ','
       << scalar_num_string(b) << '/' << scalar_den_string(b) << ','
       << gamma << ',' << branch_name(g.branch) << ','
       << fmt_double(g.value.real()) << ',' << fmt_double(g.value.imag()) << ','
       << fmt_double(oracle.real()) << ',' << fmt_double(oracle.imag()) << ','
       << fmt_double(std::abs(g.value - oracle)) << '\n';
    return os.str();
}

/// sparse export of an operator matrix as triplets
inline json operator_json(const OperatorMatrix& A) {
    json j;
    j["p"] = A.p; j["n"] = A.n; j["alpha"] = fmt_double(A.alpha);
    j["convention"] = translation_name(A.side);
    json dirs = json::array();
    for (int d : A.dirs) dirs.push_back(d);
    j["directions"] = dirs;
    j["dim"] = A.dim;
    json tri = json::array();
    for (i64 i = 0; i < A.dim; ++i)
        tri.push_back({i, i, fmt_double(A.diag), "0"});
    for (std::size_t k = 0; k < A.weights.size(); ++k)
        for (i64 i = 0; i < A.dim; ++i)
            tri.push_back({i, A.perms[k][i], fmt_double(A.weights[k]), "0"});
    j["triplets"] = tri;
    return j;
}

// ---------------------------------------------------------------------------
// Run manifests: one JSON array per output location, appended per run.
// ---------------------------------------------------------------------------
inline std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct RunManifest {
    Config config;
    std::string command;
    std::string started;
    std::string finished;
    std::vector<std::string> outputs;
    bool has_pass = false;
    bool pass = false;
};

inline void append_manifest(const RunManifest& m, const std::string& path) {
    json entry;
    entry["config"] = {{"p", m.config.p}, {"level", m.config.n},
                       {"alpha", fmt_double(m.config.alpha)},
                       {"tol", fmt_double(m.config.tol_float)},
                       {"seed", m.config.rng_seed}};
    entry["command"] = m.command;
    entry["started"] = m.started;
    entry["finished"] = m.finished;
    entry["outputs"] = m.outputs;
    if (m.has_pass) entry["pass"] = m.pass;

    json all = json::array();
    {
        std::ifstream in(path);
        if (in.good()) {
            try { in >> all; } catch (...) { all = json::array(); }
            if (!all.is_array()) all = json::array();
        }
    }
    all.push_back(entry);
    std::ofstream out(path);
    out << all.dump(2) << '\n';
}

} // namespace engel
