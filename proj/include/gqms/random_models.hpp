#pragma once

// Seeded random model generation for property suites. Plain uniform models
// almost surely saturate M = C^d, so the structured family below plants
// nontrivial (d_c, d_r, d_f) splits and hides them behind a random
// Bogoliubov rotation (squeezing included).

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "gqms/model.hpp"
#include "gqms/symplectic.hpp"

namespace gqms {

inline Complex random_complex(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double re = unif(rng), im = unif(rng);
    return {re, im};
}

inline CMat random_cmat(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    CMat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = random_complex(rng);
    return m;
}

inline CVec random_cvec(std::mt19937_64& rng, Eigen::Index n) {
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = random_complex(rng);
    return v;
}

// Entries uniform in [-1,1]^2; Omega Hermitian, kappa symmetric.
inline GaussianModel random_model(std::mt19937_64& rng, Eigen::Index d, Eigen::Index m) {
    GaussianModel g = GaussianModel::zero(d, m);
    CMat a = random_cmat(rng, d, d);
    g.omega = 0.5 * (a + a.adjoint());
    CMat b = random_cmat(rng, d, d);
    g.kappa = 0.5 * (b + b.transpose());
    g.zeta = random_cvec(rng, d);
    g.V = random_cmat(rng, m, d);
    g.U = random_cmat(rng, m, d);
    return g;
}

// Random d and m as in the randomized acceptance suites.
inline GaussianModel random_model(std::mt19937_64& rng, Eigen::Index d_max = 4) {
    std::uniform_int_distribution<Eigen::Index> dd(1, d_max);
    Eigen::Index d = dd(rng);
    std::uniform_int_distribution<Eigen::Index> dm(1, 2 * d);
    return random_model(rng, d, dm(rng));
}

// m = 1, H = 0 models hitting all three single-Kraus classes.
inline GaussianModel random_single_kraus_model(std::mt19937_64& rng, Eigen::Index d) {
    GaussianModel g = GaussianModel::zero(d, 1);
    std::uniform_int_distribution<int> pick(0, 2);
    CVec v = random_cvec(rng, d);
    switch (pick(rng)) {
        case 0: // self-adjoint: u = v
            g.V.row(0) = v.transpose();
            g.U.row(0) = v.transpose();
            break;
        case 1: { // normal, not self-adjoint: independent u rescaled to |v|
            CVec u = random_cvec(rng, d);
            u *= v.norm() / u.norm();
            g.V.row(0) = v.transpose();
            g.U.row(0) = u.transpose();
            break;
        }
        default: { // non-normal: |u| != |v|
            CVec u = random_cvec(rng, d);
            if (std::abs(u.norm() - v.norm()) < 0.1) u *= 2.0;
            g.V.row(0) = v.transpose();
            g.U.row(0) = u.transpose();
            break;
        }
    }
    return g;
}

// Random symplectomorphism e^{J S} with S symmetric; `strength` bounds the
// squeezing so conditioning stays mild.
inline BogoliubovMap random_bogoliubov(std::mt19937_64& rng, Eigen::Index d,
                                       double strength = 0.4) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    RMat sym(2 * d, 2 * d);
    for (Eigen::Index r = 0; r < 2 * d; ++r)
        for (Eigen::Index c = r; c < 2 * d; ++c) sym(r, c) = sym(c, r) = strength * unif(rng);
    RMat gen = mult_i_matrix(d) * sym;
    return BogoliubovMap{d, gen.exp()};
}

// Models with planted nontrivial decompositions, conjugated by a random
// Bogoliubov map so nothing is axis-aligned.
inline GaussianModel random_structured_model(std::mt19937_64& rng, Eigen::Index d_max = 4) {
    std::uniform_int_distribution<Eigen::Index> dd(2, d_max);
    const Eigen::Index d = dd(rng);
    std::uniform_int_distribution<int> kind(0, 2);
    GaussianModel g;
    switch (kind(rng)) {
        case 0: { // commuting self-adjoint family: d_c = #rows, d_r = 0
            std::uniform_int_distribution<Eigen::Index> mm(1, d);
            Eigen::Index m = mm(rng);
            g = GaussianModel::zero(d, m);
            std::uniform_real_distribution<double> unif(-1.0, 1.0);
            for (Eigen::Index l = 0; l < m; ++l) {
                CVec w(d);
                for (Eigen::Index k = 0; k < d; ++k) w(k) = unif(rng); // real vector
                g.V.row(l) = (w / std::sqrt(2.0)).transpose();
                g.U.row(l) = (w / std::sqrt(2.0)).transpose();
            }
            break;
        }
        case 1: { // noise confined to the leading modes: d_f >= d - d1
            std::uniform_int_distribution<Eigen::Index> d1d(1, d - 1);
            Eigen::Index d1 = d1d(rng);
            std::uniform_int_distribution<Eigen::Index> mm(1, 2 * d1);
            GaussianModel inner = random_model(rng, d1, mm(rng));
            g = GaussianModel::zero(d, inner.m);
            g.omega.topLeftCorner(d1, d1) = inner.omega;
            g.kappa.topLeftCorner(d1, d1) = inner.kappa;
            g.zeta.head(d1) = inner.zeta;
            g.V.leftCols(d1) = inner.V;
            g.U.leftCols(d1) = inner.U;
            break;
        }
        default: // single Kraus operator, H = 0
            g = random_single_kraus_model(rng, d);
            break;
    }
    return transform_model(g, random_bogoliubov(rng, d));
}


} // namespace gqms
