#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "gqms/json_io.hpp"
#include "gqms/random_models.hpp"
#include "gqms/symplectic.hpp"

using namespace gqms;

namespace {

std::string fixture(const std::string& name) {
    return std::string(GQMS_FIXTURES_DIR) + "/" + name;
}

Json read_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    Json j;
    in >> j;
    return j;
}

} // namespace

TEST_CASE("model round trip") {
    std::mt19937_64 rng(61);
    for (int rep = 0; rep < 10; ++rep) {
        GaussianModel g = random_model(rng);
        GaussianModel back = model_from_json(model_to_json(g));
        CHECK(back.d == g.d);
        CHECK(back.m == g.m);
        CHECK((back.omega - g.omega).cwiseAbs().maxCoeff() == 0.0);
        CHECK((back.kappa - g.kappa).cwiseAbs().maxCoeff() == 0.0);
        CHECK((back.zeta - g.zeta).cwiseAbs().maxCoeff() == 0.0);
        CHECK((back.V - g.V).cwiseAbs().maxCoeff() == 0.0);
        CHECK((back.U - g.U).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("terms shorthand expands on load") {
    auto g = load_model(fixture("qp_classical_d2.json"));
    std::vector<QuadraticTerm> terms{{1.0, {QuadKind::q, 1}, QuadFactor{QuadKind::p, 2}}};
    auto [omega, kappa, zeta] = hamiltonian_from_quadratures(terms, 2);
    CHECK((g.omega - omega).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((g.kappa - kappa).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(g.zeta.norm() == 0.0);
    SECTION("terms together with explicit omega is rejected") {
        Json j = read_json(fixture("qp_classical_d2.json"));
        j["omega"] = io::cmat_to_json(CMat::Zero(2, 2));
        CHECK_THROWS_AS(model_from_json(j), ParseError);
    }
}

TEST_CASE("file errors") {
    CHECK_THROWS_AS(load_model(fixture("no_such_file.json")), FileNotFound);
    auto bad = std::filesystem::temp_directory_path() / "gqms_bad.json";
    {
        std::ofstream out(bad);
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_model(bad.string()), ParseError);
    {
        std::ofstream out(bad);
        out << R"({"d": 1, "m": 1, "V": [[[1, 0]]], "U": [["oops"]]})";
    }
    CHECK_THROWS_AS(load_model(bad.string()), ParseError);
}

TEST_CASE("report serialization round trips subspaces") {
    std::mt19937_64 rng(67);
    for (int rep = 0; rep < 10; ++rep) {
        GaussianModel g = random_model(rng);
        StructureReport rep_out = structure_report(g);
        fill_bogoliubov(rep_out);
        Json j = report_to_json(rep_out);
        CHECK(j["d_c"].get<int>() == rep_out.dec.d_c);
        CHECK(j["d_r"].get<int>() == rep_out.dec.d_r);
        CHECK(j["d_f"].get<int>() == rep_out.dec.d_f);
        for (const char* name : {"M", "Mprime", "Mc", "Mr", "Mf"}) {
            RealSubspace s = subspace_from_json(j["spaces"][name]);
            const RealSubspace& orig = name == std::string("M") ? rep_out.dec.M
                                       : name == std::string("Mprime") ? rep_out.dec.Mprime
                                       : name == std::string("Mc") ? rep_out.dec.Mc
                                       : name == std::string("Mr") ? rep_out.dec.Mr
                                                                   : rep_out.dec.Mf;
            CHECK(subspace_equal(s, orig, 1e-10));
        }
        RMat b = io::rmat_from_json(j["bogoliubov"]);
        CHECK((b - *rep_out.bogoliubov).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("bundled fixtures match their expected classification data") {
    namespace fs = std::filesystem;
    int checked = 0;
    for (const auto& entry : fs::directory_iterator(GQMS_FIXTURES_DIR)) {
        if (!entry.is_regular_file()) continue;
        auto expected_path = fs::path(GQMS_FIXTURES_DIR) / "expected" / entry.path().filename();
        if (!fs::exists(expected_path)) continue;
        INFO("fixture " << entry.path().filename().string());
        GaussianModel g = load_model(entry.path().string());
        REQUIRE(validate(g).pass());
        StructureReport rep = structure_report(g);
        Json want = read_json(expected_path.string());
        CHECK(rep.dec.d_c == want["d_c"].get<int>());
        CHECK(rep.dec.d_r == want["d_r"].get<int>());
        CHECK(rep.dec.d_f == want["d_f"].get<int>());
        if (want.contains("dim_M")) CHECK(rep.dec.M.dim() == want["dim_M"].get<int>());
        if (want.contains("mprime_dim"))
            CHECK(rep.dec.Mprime.dim() == want["mprime_dim"].get<int>());
        if (want.contains("iterations_used"))
            CHECK(rep.iterations_used == want["iterations_used"].get<int>());
        if (want.contains("classification")) {
            auto cls = classify_single_kraus(g);
            CHECK(to_string(cls) == want["classification"].get<std::string>());
        }
        ++checked;
    }
    CHECK(checked == 12);
}

TEST_CASE("config parsing") {
    Config c = config_from_json(Json::parse(R"({"tol_rank": 1e-10, "format": "json", "seed": 7})"));
    CHECK(c.tol_rank == 1e-10);
    CHECK(c.format == "json");
    CHECK(c.seed == 7);
    CHECK(c.tol_ode == 1e-9); // defaults survive
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"tol_quad": -1})")), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"format": "xml"})")), std::invalid_argument);
}
