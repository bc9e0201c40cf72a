#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gqms/random_models.hpp"
#include "gqms/symplectic.hpp"

using namespace gqms;

namespace {
const Complex I(0, 1);

CVec unit(Eigen::Index n, Eigen::Index j, Complex c = Complex(1, 0)) {
    CVec v = CVec::Zero(n);
    v(j) = c;
    return v;
}

void check_basis_invariants(const SymplecticBasis& b, double tol = 1e-10) {
    auto all = b.all_vectors();
    for (size_t k = 0; k < b.pairs.size(); ++k)
        CHECK(symplectic_form(b.pairs[k].first, b.pairs[k].second) ==
              Catch::Approx(1.0).margin(tol));
    // every product other than the in-pair ones vanishes
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j) {
            bool in_pair = (i % 2 == 0) && (j == i + 1) && (j < 2 * b.pairs.size());
            if (!in_pair) CHECK(std::abs(symplectic_form(all[i], all[j])) < tol);
        }
}

GaussianModel single_row_model(Eigen::Index d, const CVec& v, const CVec& u) {
    GaussianModel g = GaussianModel::zero(d, 1);
    g.V.row(0) = v.transpose();
    g.U.row(0) = u.transpose();
    return g;
}

} // namespace

TEST_CASE("symplectic_gram_schmidt") {
    SECTION("span{e1+e2, i e1} gives one pair with unit pairing") {
        auto s = real_span({unit(2, 0) + unit(2, 1), unit(2, 0, I)}, 2);
        auto b = symplectic_gram_schmidt(s, SpanKind::Symplectic);
        REQUIRE(b.pairs.size() == 1);
        CHECK(b.isotropic.empty());
        check_basis_invariants(b);
        // canonical pivot: the pair comes out as (e1+e2, i e1)
        CHECK((b.pairs[0].first - (unit(2, 0) + unit(2, 1))).norm() < 1e-12);
        CHECK((b.pairs[0].second - unit(2, 0, I)).norm() < 1e-12);
        auto back = real_span(b.all_vectors(), 2);
        CHECK(subspace_equal(back, s, 1e-10));
    }
    SECTION("canonical complex line") {
        auto s = real_span({unit(2, 0), unit(2, 0, I)}, 2);
        auto b = symplectic_gram_schmidt(s, SpanKind::Symplectic);
        REQUIRE(b.pairs.size() == 1);
        CHECK((b.pairs[0].first - unit(2, 0)).norm() < 1e-12);
        CHECK((b.pairs[0].second - unit(2, 0, I)).norm() < 1e-12);
    }
    SECTION("isotropic plane") {
        auto s = real_span({unit(2, 0), unit(2, 1)}, 2);
        auto b = symplectic_gram_schmidt(s, SpanKind::Isotropic);
        CHECK(b.pairs.empty());
        CHECK(b.isotropic.size() == 2);
        check_basis_invariants(b);
    }
    SECTION("declared kind is verified") {
        auto iso = real_span({unit(2, 1)}, 2);
        CHECK_THROWS_AS(symplectic_gram_schmidt(iso, SpanKind::Symplectic), AssumptionViolated);
        auto sympl = real_span({unit(2, 0), unit(2, 0, I)}, 2);
        CHECK_THROWS_AS(symplectic_gram_schmidt(sympl, SpanKind::Isotropic), AssumptionViolated);
    }
    SECTION("mixed splits radical and symplectic part") {
        // span{e1, i e1, e2}: radical = span{e2}, symplectic part = e1 line
        auto s = real_span({unit(3, 0), unit(3, 0, I), unit(3, 1)}, 3);
        auto b = symplectic_gram_schmidt(s, SpanKind::Mixed);
        CHECK(b.pairs.size() == 1);
        REQUIRE(b.isotropic.size() == 1);
        CHECK((b.isotropic[0].cwiseAbs() - unit(3, 1).cwiseAbs()).norm() < 1e-12);
        check_basis_invariants(b);
        CHECK(subspace_equal(real_span(b.all_vectors(), 3), s, 1e-10));
    }
    SECTION("random subspaces through Mixed satisfy the invariants") {
        std::mt19937_64 rng(31);
        for (int rep = 0; rep < 50; ++rep) {
            std::uniform_int_distribution<int> nv(0, 6);
            std::vector<CVec> vecs;
            int count = nv(rng);
            for (int k = 0; k < count; ++k) vecs.push_back(random_cvec(rng, 3));
            auto s = real_span(vecs, 3);
            auto b = symplectic_gram_schmidt(s, SpanKind::Mixed);
            CHECK(2 * b.pairs.size() + b.isotropic.size() == static_cast<size_t>(s.dim()));
            check_basis_invariants(b);
            CHECK(subspace_equal(real_span(b.all_vectors(), 3), s, 1e-9));
        }
    }
}

TEST_CASE("bogoliubov_matrix") {
    SECTION("already in normal form: identity") {
        GaussianModel g = single_row_model(2, unit(2, 0), CVec::Zero(2)); // L = a_1
        auto dec = decompose(m_space(commutator_span(g)));
        auto b = bogoliubov_matrix(dec);
        CHECK((b.mat - RMat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(b.symplectic_defect() < 1e-10);
    }
    SECTION("M = span{e1+e2, i e1} maps to the first mode") {
        auto m = real_span({unit(2, 0) + unit(2, 1), unit(2, 0, I)}, 2);
        auto dec = decompose(m);
        REQUIRE(dec.d_r == 1);
        auto b = bogoliubov_matrix(dec);
        CHECK((b(unit(2, 0) + unit(2, 1)) - unit(2, 0)).norm() < 1e-10);
        CHECK((b(unit(2, 0, I)) - unit(2, 0, I)).norm() < 1e-10);
        CHECK(b.symplectic_defect() < 1e-10);
    }
    SECTION("maps the decomposition to the canonical layout") {
        std::mt19937_64 rng(37);
        for (int rep = 0; rep < 100; ++rep) {
            GaussianModel g =
                rep % 2 ? random_structured_model(rng) : random_model(rng);
            auto dec = decompose(m_space(commutator_span(g)));
            auto b = bogoliubov_matrix(dec);
            CHECK(b.symplectic_defect() < 1e-10);
            // B preserves the symplectic form pairwise
            for (int k = 0; k < 5; ++k) {
                CVec z = random_cvec(rng, g.d), w = random_cvec(rng, g.d);
                CHECK(symplectic_form(b(z), b(w)) ==
                      Catch::Approx(symplectic_form(z, w)).margin(1e-9));
            }
            // images land on the canonical modes
            std::vector<CVec> mr_target, mc_target, mf_target;
            for (int j = 0; j < dec.d_r; ++j) {
                mr_target.push_back(unit(g.d, j));
                mr_target.push_back(unit(g.d, j, I));
            }
            for (int j = 0; j < dec.d_c; ++j)
                mc_target.push_back(unit(g.d, dec.d_r + j));
            for (int j = 0; j < dec.d_f; ++j) {
                mf_target.push_back(unit(g.d, dec.d_r + dec.d_c + j));
                mf_target.push_back(unit(g.d, dec.d_r + dec.d_c + j, I));
            }
            auto image = [&](const RealSubspace& s) {
                std::vector<CVec> out;
                for (const auto& v : s.vectors()) out.push_back(b(v));
                return real_span(out, g.d);
            };
            CHECK(subspace_equal(image(dec.Mr), real_span(mr_target, g.d), 1e-8));
            CHECK(subspace_equal(image(dec.Mc), real_span(mc_target, g.d), 1e-8));
            CHECK(subspace_equal(image(dec.Mf), real_span(mf_target, g.d), 1e-8));
        }
    }
}

TEST_CASE("reduce_kraus") {
    auto column_support = [](const GaussianModel& g, Eigen::Index first_cols) {
        double worst = 0.0;
        for (Eigen::Index l = 0; l < g.m; ++l)
            for (Eigen::Index k = first_cols; k < g.d; ++k)
                worst = std::max(worst, std::max(std::abs(g.V(l, k)), std::abs(g.U(l, k))));
        return worst;
    };

    SECTION("L = a_1 in d=3 is already reduced") {
        GaussianModel g = single_row_model(3, unit(3, 0), CVec::Zero(3));
        auto dec = decompose(m_space(commutator_span(g)));
        auto b = bogoliubov_matrix(dec);
        auto reduced = reduce_kraus(g, b);
        CHECK(dec.d_r + dec.d_c == 1);
        CHECK(column_support(reduced, 1) < 1e-9);
        CHECK((reduced.V - g.V).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((reduced.U - g.U).cwiseAbs().maxCoeff() < 1e-10);
    }
    SECTION("L = (a_1 + a_2)/sqrt(2) compresses to one mode") {
        CVec v(2);
        v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        GaussianModel g = single_row_model(2, v, CVec::Zero(2));
        auto dec = decompose(m_space(commutator_span(g)));
        REQUIRE(dec.d_r + dec.d_c == 1);
        auto reduced = reduce_kraus(g, bogoliubov_matrix(dec));
        CHECK(column_support(reduced, 1) < 1e-9);
    }
    SECTION("two-boson commuting rank-one model compresses to one mode") {
        GaussianModel g = GaussianModel::zero(2, 2);
        CVec psi(2);
        psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        g.V.row(0) = psi.transpose();
        g.U.row(1) = (0.8 * psi).transpose();
        auto dec = decompose(m_space(commutator_span(g)));
        REQUIRE(dec.d_r + dec.d_c == 1);
        auto reduced = reduce_kraus(g, bogoliubov_matrix(dec));
        CHECK(column_support(reduced, 1) < 1e-9);
    }
    SECTION("structure report is preserved under reduction") {
        std::mt19937_64 rng(43);
        int done = 0;
        for (int rep = 0; rep < 60; ++rep) {
            GaussianModel g =
                rep % 2 ? random_structured_model(rng) : random_model(rng);
            auto before = structure_report(g);
            auto b = bogoliubov_matrix(before.dec);
            GaussianModel reduced = reduce_kraus(g, b);
            REQUIRE(validate(reduced).pass());
            auto after = structure_report(reduced);
            CHECK(after.dec.d_c == before.dec.d_c);
            CHECK(after.dec.d_r == before.dec.d_r);
            CHECK(after.dec.d_f == before.dec.d_f);
            CHECK(column_support(reduced, before.dec.d_r + before.dec.d_c) < 1e-9);
            ++done;
        }
        CHECK(done == 60);
    }
}
