#pragma once

// Model files and report serialization. Complex numbers are encoded as
// [re, im] pairs throughout.
//
// Model schema: { "d": int, "m": int, "omega": [[..]], "kappa": [[..]],
//                 "zeta": [..], "V": [[..]], "U": [[..]] }
// with an optional "terms" array as quadrature shorthand for the Hamiltonian:
//   { "coeff": real, "factor1": {"kind": "q"|"p", "mode": 1-based},
//     "factor2": { ... } (optional) }.
// When "terms" is present, omega/kappa/zeta must be absent.

#include <fstream>

#include <json.hpp>

#include "gqms/dfa.hpp"
#include "gqms/model.hpp"
#include "gqms/weyl_flow.hpp"

namespace gqms {

using Json = nlohmann::json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FileNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace io {

inline Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw ParseError("complex entries must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Json cmat_to_json(const CMat& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

inline CMat cmat_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols,
                           const std::string& name) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
        throw ParseError(name + ": expected " + std::to_string(rows) + " rows");
    CMat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json& row = j[static_cast<size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ParseError(name + ": expected " + std::to_string(cols) + " columns");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = complex_from_json(row[static_cast<size_t>(c)]);
    }
    return m;
}

inline Json cvec_to_json(const CVec& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v(i)));
    return arr;
}

inline CVec cvec_from_json(const Json& j, Eigen::Index n, const std::string& name) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n)
        throw ParseError(name + ": expected " + std::to_string(n) + " entries");
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_from_json(j[static_cast<size_t>(i)]);
    return v;
}

inline Json rmat_to_json(const RMat& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

inline RMat rmat_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("expected a matrix (array of rows)");
    Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
    RMat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = j[static_cast<size_t>(r)][static_cast<size_t>(c)].get<double>();
    return m;
}

inline QuadraticTerm term_from_json(const Json& j) {
    QuadraticTerm t;
    t.coeff = j.at("coeff").get<double>();
    auto factor = [](const Json& f) {
        QuadFactor q;
        std::string kind = f.at("kind").get<std::string>();
        if (kind == "q")
            q.kind = QuadKind::q;
        else if (kind == "p")
            q.kind = QuadKind::p;
        else
            throw ParseError("term factor kind must be 'q' or 'p'");
        q.mode = f.at("mode").get<Eigen::Index>();
        return q;
    };
    t.factor1 = factor(j.at("factor1"));
    if (j.contains("factor2")) t.factor2 = factor(j.at("factor2"));
    return t;
}

} // namespace io

inline GaussianModel model_from_json(const Json& j) {
    GaussianModel g;
    try {
        g.d = j.at("d").get<Eigen::Index>();
        g.m = j.at("m").get<Eigen::Index>();
        if (g.d < 1 || g.m < 1) throw ParseError("d and m must be positive");
        g.V = io::cmat_from_json(j.at("V"), g.m, g.d, "V");
        g.U = io::cmat_from_json(j.at("U"), g.m, g.d, "U");
        if (j.contains("terms")) {
            if (j.contains("omega") || j.contains("kappa") || j.contains("zeta"))
                throw ParseError("'terms' excludes explicit omega/kappa/zeta");
            std::vector<QuadraticTerm> terms;
            for (const auto& tj : j.at("terms")) terms.push_back(io::term_from_json(tj));
            std::tie(g.omega, g.kappa, g.zeta) = hamiltonian_from_quadratures(terms, g.d);
        } else {
            g.omega = j.contains("omega") ? io::cmat_from_json(j.at("omega"), g.d, g.d, "omega")
                                          : CMat::Zero(g.d, g.d);
            g.kappa = j.contains("kappa") ? io::cmat_from_json(j.at("kappa"), g.d, g.d, "kappa")
                                          : CMat::Zero(g.d, g.d);
            g.zeta = j.contains("zeta") ? io::cvec_from_json(j.at("zeta"), g.d, "zeta")
                                        : CVec::Zero(g.d);
        }
    } catch (const Json::exception& e) {
        throw ParseError(std::string("model parse error: ") + e.what());
    }
    return g;
}

inline Json model_to_json(const GaussianModel& g) {
    Json j;
    j["d"] = g.d;
    j["m"] = g.m;
    j["omega"] = io::cmat_to_json(g.omega);
    j["kappa"] = io::cmat_to_json(g.kappa);
    j["zeta"] = io::cvec_to_json(g.zeta);
    j["V"] = io::cmat_to_json(g.V);
    j["U"] = io::cmat_to_json(g.U);
    return j;
}

inline GaussianModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open model file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return model_from_json(j);
}

// --- subspaces and reports ---------------------------------------------------

inline Json subspace_to_json(const RealSubspace& s) {
    Json j;
    j["n"] = s.n;
    j["dim"] = s.dim();
    j["basis"] = io::rmat_to_json(s.basis); // 2n x k, row-major rows
    return j;
}

inline RealSubspace subspace_from_json(const Json& j) {
    RealSubspace s;
    s.n = j.at("n").get<Eigen::Index>();
    s.basis = io::rmat_from_json(j.at("basis"));
    if (s.basis.size() == 0) s.basis = RMat::Zero(2 * s.n, 0);
    if (s.basis.rows() != 2 * s.n) throw ParseError("subspace basis has wrong row count");
    return s;
}

inline Json report_to_json(const StructureReport& rep) {
    Json j;
    j["d"] = rep.model.d;
    j["m"] = rep.model.m;
    j["minimal"] = rep.minimal;
    j["d_c"] = rep.dec.d_c;
    j["d_r"] = rep.dec.d_r;
    j["d_f"] = rep.dec.d_f;
    j["iterations_used"] = rep.iterations_used;
    j["algebra"] = rep.algebra;
    j["spaces"]["M"] = subspace_to_json(rep.dec.M);
    j["spaces"]["Mprime"] = subspace_to_json(rep.dec.Mprime);
    j["spaces"]["Mc"] = subspace_to_json(rep.dec.Mc);
    j["spaces"]["Mr"] = subspace_to_json(rep.dec.Mr);
    j["spaces"]["Mf"] = subspace_to_json(rep.dec.Mf);
    if (rep.bogoliubov) j["bogoliubov"] = io::rmat_to_json(*rep.bogoliubov);
    return j;
}

inline Json validation_to_json(const ValidationReport& rep) {
    Json j;
    j["pass"] = rep.pass();
    Json checks = Json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = checks;
    return j;
}

inline Json evolution_to_json(const WeylEvolution& ev) {
    Json j;
    j["t"] = ev.t;
    j["z_in"] = io::cvec_to_json(ev.z_in);
    j["z_out"] = io::cvec_to_json(ev.z_out);
    j["damping"] = ev.damping;
    j["phase"] = ev.phase;
    return j;
}

// --- configuration -----------------------------------------------------------

struct Config {
    double tol_sym = kSymTol;
    double tol_rank = 0.0; // 0: automatic
    double tol_span = kSpanTol;
    double tol_subspace_eq = kSubspaceEqTol;
    double tol_quad = 1e-10;
    double tol_ode = 1e-9;
    std::string format = "text"; // or "json"
    unsigned seed = 20240925;

    void check() const {
        if (tol_sym <= 0 || tol_span <= 0 || tol_subspace_eq <= 0 || tol_quad <= 0 ||
            tol_ode <= 0 || tol_rank < 0)
            throw std::invalid_argument("config: tolerances must be positive");
        if (format != "text" && format != "json")
            throw std::invalid_argument("config: format must be 'text' or 'json'");
    }
};

inline Config config_from_json(const Json& j) {
    Config c;
    if (j.contains("tol_sym")) c.tol_sym = j["tol_sym"].get<double>();
    if (j.contains("tol_rank")) c.tol_rank = j["tol_rank"].get<double>();
    if (j.contains("tol_span")) c.tol_span = j["tol_span"].get<double>();
    if (j.contains("tol_subspace_eq")) c.tol_subspace_eq = j["tol_subspace_eq"].get<double>();
    if (j.contains("tol_quad")) c.tol_quad = j["tol_quad"].get<double>();
    if (j.contains("tol_ode")) c.tol_ode = j["tol_ode"].get<double>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<unsigned>();
    c.check();
    return c;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open config file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return config_from_json(j);
}

} // namespace gqms
