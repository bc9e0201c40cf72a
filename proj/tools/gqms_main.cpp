// Command-line front end: loads model files, runs the structure analysis,
// the Weyl-flow crosscheck and the truncated-Fock oracle, and prints text or
// JSON reports.
//
// Exit codes: 0 success (validate pass / crosscheck true), 1 failed check,
// 2 file or parse problem, 3 unsupported operation, 4 internal error.

#include <iostream>

#include <CLI11.hpp>

#include "gqms/fock_oracle.hpp"
#include "gqms/json_io.hpp"
#include "gqms/symplectic.hpp"

using namespace gqms;

namespace {

struct CliOptions {
    std::string config_path;
    std::string format; // overrides config when set
    double tol_rank = -1.0;
    long long seed = -1;

    Config resolve() const {
        Config cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (!format.empty()) cfg.format = format;
        if (tol_rank >= 0.0) cfg.tol_rank = tol_rank;
        if (seed >= 0) cfg.seed = static_cast<unsigned>(seed);
        cfg.check();
        return cfg;
    }
};

CVec parse_z(const std::string& text, Eigen::Index d) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw ParseError(std::string("--z: ") + e.what());
    }
    return io::cvec_from_json(j, d, "--z");
}

std::vector<double> parse_times(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw ParseError(std::string("--times: ") + e.what());
    }
    if (!j.is_array() || j.empty()) throw ParseError("--times: expected a nonempty array");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(v.get<double>());
    return out;
}

std::vector<int> parse_cutoffs(const std::string& text, Eigen::Index d) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw ParseError(std::string("--cutoffs: ") + e.what());
    }
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != d)
        throw ParseError("--cutoffs: expected one entry per mode");
    std::vector<int> out;
    for (const auto& v : j) out.push_back(v.get<int>());
    return out;
}

// q(i w) written in quadrature coordinates: sum_j -Im(w_j) q_j + Re(w_j) p_j
std::string quadrature_combination(const CVec& w) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(4);
    bool first = true;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        double cq = -w(j).imag(), cp = w(j).real();
        for (auto [coeff, label] : {std::pair{cq, 'q'}, std::pair{cp, 'p'}}) {
            if (std::abs(coeff) < 1e-12) continue;
            os << (first ? (coeff < 0 ? "-" : "") : (coeff < 0 ? " - " : " + "));
            os << std::abs(coeff) << " " << label << "_" << (j + 1);
            first = false;
        }
    }
    if (first) os << "0";
    return os.str();
}

int cmd_validate(const std::string& path, const Config& cfg) {
    GaussianModel g = load_model(path);
    ValidationReport rep = validate(g, cfg.tol_sym);
    if (cfg.format == "json") {
        Json j = validation_to_json(rep);
        j["minimal"] = check_minimality(g, cfg.tol_rank);
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& c : rep.checks)
            std::cout << (c.pass ? "  ok  " : " FAIL ") << c.name
                      << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
        if (rep.pass() && !check_minimality(g, cfg.tol_rank))
            std::cout << "  note: representation is not minimal (ker V* and ker U^T overlap)\n";
        std::cout << (rep.pass() ? "valid" : "invalid") << "\n";
    }
    return rep.pass() ? 0 : 1;
}

int cmd_analyze(const std::string& path, const Config& cfg) {
    GaussianModel g = load_model(path);
    ValidationReport vrep = validate(g, cfg.tol_sym);
    if (!vrep.pass()) {
        std::cerr << "model failed validation; run `gqms validate` for details\n";
        return 1;
    }
    StructureReport rep = structure_report(g, cfg.tol_span, cfg.tol_sym, cfg.tol_rank);
    fill_bogoliubov(rep);
    if (cfg.format == "json") {
        std::cout << report_to_json(rep).dump(2) << "\n";
        return 0;
    }
    std::cout << "model: d=" << g.d << ", m=" << g.m
              << (rep.minimal ? "" : "  (non-minimal representation)") << "\n";
    std::cout << "commutator sweeps used: " << rep.iterations_used << "\n";
    std::cout << "dim M = " << rep.dec.M.dim() << ", dim M' = " << rep.dec.Mprime.dim() << "\n";
    std::cout << "d_c=" << rep.dec.d_c << ", d_r=" << rep.dec.d_r << ", d_f=" << rep.dec.d_f
              << "\n";
    std::cout << "N(T) ~= " << rep.algebra << "   (d_r = " << rep.dec.d_r
              << " noisy symplectic directions removed)\n";
    if (rep.dec.d_c > 0) {
        std::cout << "classical quadratures (basis of Mc):\n";
        for (const auto& w : rep.dec.Mc.vectors())
            std::cout << "  " << quadrature_combination(w) << "\n";
    }
    return 0;
}

int cmd_classify(const std::string& path, const Config& cfg) {
    GaussianModel g = load_model(path);
    if (!validate(g, cfg.tol_sym).pass()) {
        std::cerr << "model failed validation\n";
        return 1;
    }
    SingleKrausClass cls = classify_single_kraus(g, cfg.tol_sym);
    const char* ordinal = cls == SingleKrausClass::SelfAdjoint          ? "1st"
                          : cls == SingleKrausClass::NormalNotSelfAdjoint ? "2nd"
                                                                          : "3rd";
    if (cfg.format == "json") {
        Json j;
        j["class"] = to_string(cls);
        j["case"] = ordinal;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << to_string(cls) << " (" << ordinal << " case)\n";
    }
    return 0;
}

int cmd_evolve(const std::string& path, const std::string& z_text, const std::string& times_text,
               const Config& cfg) {
    GaussianModel g = load_model(path);
    if (!validate(g, cfg.tol_sym).pass()) {
        std::cerr << "model failed validation\n";
        return 1;
    }
    CVec z = parse_z(z_text, g.d);
    QuadOptions quad{cfg.tol_quad, 4000};
    Json arr = Json::array();
    for (double t : parse_times(times_text)) {
        WeylEvolution ev = evolve_weyl(g, z, t, quad);
        if (cfg.format == "json") {
            arr.push_back(evolution_to_json(ev));
        } else {
            std::cout << "t=" << t << "  |z_out|=" << ev.z_out.norm()
                      << "  damping=" << ev.damping << "  phase=" << ev.phase << "\n";
        }
    }
    if (cfg.format == "json") std::cout << arr.dump(2) << "\n";
    return 0;
}

int cmd_crosscheck(const std::string& path, const Config& cfg) {
    GaussianModel g = load_model(path);
    if (!validate(g, cfg.tol_sym).pass()) {
        std::cerr << "model failed validation\n";
        return 1;
    }
    bool ok = crosscheck_complement(g, cfg.tol_subspace_eq, cfg.tol_span);
    if (cfg.format == "json") {
        std::cout << Json{{"consistent", ok}}.dump(2) << "\n";
    } else {
        std::cout << (ok ? "consistent: ker-C route and commutator route agree"
                         : "MISMATCH between ker-C route and commutator route")
                  << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_oracle(const std::string& path, const std::string& z_text, double t,
               const std::string& cutoffs_text, int sector, const Config& cfg) {
    GaussianModel g = load_model(path);
    if (!validate(g, cfg.tol_sym).pass()) {
        std::cerr << "model failed validation\n";
        return 1;
    }
    CVec z = parse_z(z_text, g.d);
    std::vector<int> cutoffs = parse_cutoffs(cutoffs_text, g.d);
    if (sector < 0) {
        sector = cutoffs[0] / 3;
        for (int c : cutoffs) sector = std::min(sector, c / 3);
    }
    OdeOptions ode{cfg.tol_ode, 0.0};
    QuadOptions quad{cfg.tol_quad, 4000};
    Json j;
    j["multiplicativity_residual"] = multiplicativity_residual(g, z, t, cutoffs, sector, ode);
    j["weyl_formula_residual"] = verify_weyl_formula(g, z, t, cutoffs, ode, quad);
    j["generator_residual"] = verify_generator_on_ladder(g, cutoffs, cfg.seed);
    j["sector"] = sector;
    if (cfg.format == "json") {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "multiplicativity residual: " << j["multiplicativity_residual"] << "\n"
                  << "Weyl formula residual:     " << j["weyl_formula_residual"] << "\n"
                  << "generator identities:      " << j["generator_residual"] << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"decoherence-free structure of Gaussian quantum Markov semigroups"};
    app.require_subcommand(1);

    CliOptions opts;
    app.add_option("--config", opts.config_path, "JSON config file with tolerances");
    app.add_option("--format", opts.format, "output format: text or json");
    app.add_option("--tol-rank", opts.tol_rank, "rank tolerance override");
    app.add_option("--seed", opts.seed, "seed for randomized suites");

    std::string path, z_text = "[]", times_text = "[0.0,1.0]", cutoffs_text;
    double t = 1.0;
    int sector = -1;

    auto* validate_cmd = app.add_subcommand("validate", "check the model invariants");
    validate_cmd->add_option("model", path, "model JSON file")->required();

    auto* analyze_cmd = app.add_subcommand("analyze", "full structure report");
    analyze_cmd->add_option("model", path, "model JSON file")->required();

    auto* classify_cmd = app.add_subcommand("classify", "single-Kraus classification (m=1, H=0)");
    classify_cmd->add_option("model", path, "model JSON file")->required();

    auto* evolve_cmd = app.add_subcommand("evolve", "Weyl evolution records over a time grid");
    evolve_cmd->add_option("model", path, "model JSON file")->required();
    evolve_cmd->add_option("--z", z_text, "complex vector as [[re,im],...]")->required();
    evolve_cmd->add_option("--times", times_text, "time grid as [t1,t2,...]")->required();

    auto* crosscheck_cmd =
        app.add_subcommand("crosscheck", "compare the two characterizations of M'");
    crosscheck_cmd->add_option("model", path, "model JSON file")->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "truncated-Fock residual report");
    oracle_cmd->add_option("model", path, "model JSON file")->required();
    oracle_cmd->add_option("--z", z_text, "complex vector as [[re,im],...]")->required();
    oracle_cmd->add_option("--t", t, "evolution time")->required();
    oracle_cmd->add_option("--cutoffs", cutoffs_text, "per-mode cutoffs as [N1,...]")->required();
    oracle_cmd->add_option("--sector", sector, "total-occupation sector for the projector");

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = opts.resolve();
        if (validate_cmd->parsed()) return cmd_validate(path, cfg);
        if (analyze_cmd->parsed()) return cmd_analyze(path, cfg);
        if (classify_cmd->parsed()) return cmd_classify(path, cfg);
        if (evolve_cmd->parsed()) return cmd_evolve(path, z_text, times_text, cfg);
        if (crosscheck_cmd->parsed()) return cmd_crosscheck(path, cfg);
        if (oracle_cmd->parsed()) return cmd_oracle(path, z_text, t, cutoffs_text, sector, cfg);
    } catch (const FileNotFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Unsupported& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 4;
}
