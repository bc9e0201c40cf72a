#pragma once

// Brute-force ground truth on a truncated Fock space.
//
// Basis ordering is lexicographic in the occupation numbers (n_1, ..., n_d)
// with mode 1 slowest, i.e. a_1 = a (x) I (x) ... for d modes. All identities
// here hold on an interior sector well below the cutoffs; the boundary rows
// carry truncation artifacts.
//
// The generator is applied matrix-free: the N^2 x N^2 superoperator is never
// materialized. Internally the (sparse, banded) operators H, L_l multiply
// dense evolving matrices.

#include <random>

#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include "gqms/model.hpp"
#include "gqms/weyl_flow.hpp"

namespace gqms {

using SpMat = Eigen::SparseMatrix<Complex>;

struct TruncatedOperator {
    std::vector<int> cutoffs; // per-mode dimensions N_j
    CMat mat;                 // dense, size prod N_j

    Eigen::Index dim() const { return mat.rows(); }
};

struct StepSizeUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OdeOptions {
    double tol = 1e-9;
    double max_step = 0.0; // 0: unlimited
};

namespace fock {

inline Eigen::Index total_dim(const std::vector<int>& cutoffs) {
    Eigen::Index n = 1;
    for (int c : cutoffs) {
        if (c < 1) throw std::invalid_argument("cutoffs must be positive");
        n *= c;
    }
    return n;
}

inline std::vector<Eigen::Index> strides(const std::vector<int>& cutoffs) {
    const size_t d = cutoffs.size();
    std::vector<Eigen::Index> s(d, 1);
    for (size_t j = d; j-- > 1;) s[j - 1] = s[j] * cutoffs[j];
    return s;
}

// Occupation numbers of a basis index.
inline std::vector<int> occupations(Eigen::Index idx, const std::vector<int>& cutoffs) {
    auto st = strides(cutoffs);
    std::vector<int> n(cutoffs.size());
    for (size_t j = 0; j < cutoffs.size(); ++j) {
        n[j] = static_cast<int>(idx / st[j]);
        idx %= st[j];
    }
    return n;
}

// Indices with n_j <= caps[j] for all j.
inline std::vector<Eigen::Index> sector_indices_caps(const std::vector<int>& cutoffs,
                                                     const std::vector<int>& caps) {
    std::vector<Eigen::Index> out;
    const Eigen::Index n = total_dim(cutoffs);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto occ = occupations(i, cutoffs);
        bool ok = true;
        for (size_t j = 0; j < occ.size(); ++j)
            if (occ[j] > caps[j]) ok = false;
        if (ok) out.push_back(i);
    }
    return out;
}

// Indices with total occupation <= s.
inline std::vector<Eigen::Index> sector_indices_total(const std::vector<int>& cutoffs, int s) {
    std::vector<Eigen::Index> out;
    const Eigen::Index n = total_dim(cutoffs);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto occ = occupations(i, cutoffs);
        int tot = 0;
        for (int o : occ) tot += o;
        if (tot <= s) out.push_back(i);
    }
    return out;
}

// Default interior: per-mode occupation <= N_j / 3.
inline std::vector<Eigen::Index> interior_indices(const std::vector<int>& cutoffs) {
    std::vector<int> caps(cutoffs.size());
    for (size_t j = 0; j < cutoffs.size(); ++j) caps[j] = cutoffs[j] / 3;
    return sector_indices_caps(cutoffs, caps);
}

inline CMat restrict_to(const CMat& x, const std::vector<Eigen::Index>& idx) {
    CMat out(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
    for (size_t r = 0; r < idx.size(); ++r)
        for (size_t c = 0; c < idx.size(); ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = x(idx[r], idx[c]);
    return out;
}

// Largest singular value of the restricted block.
inline double sector_norm(const CMat& x, const std::vector<Eigen::Index>& idx) {
    if (idx.empty()) return 0.0;
    return restrict_to(x, idx).jacobiSvd().singularValues()(0);
}

inline double sector_max_abs(const CMat& x, const std::vector<Eigen::Index>& idx) {
    double worst = 0.0;
    for (auto r : idx)
        for (auto c : idx) worst = std::max(worst, std::abs(x(r, c)));
    return worst;
}

} // namespace fock

// Annihilation operators, one per mode: a_j e(n) = sqrt(n_j) e(n - 1_j).
inline std::vector<TruncatedOperator> ladder(const std::vector<int>& cutoffs) {
    const Eigen::Index n = fock::total_dim(cutoffs);
    auto st = fock::strides(cutoffs);
    std::vector<TruncatedOperator> out;
    for (size_t j = 0; j < cutoffs.size(); ++j) {
        CMat a = CMat::Zero(n, n);
        for (Eigen::Index idx = 0; idx < n; ++idx) {
            int nj = fock::occupations(idx, cutoffs)[j];
            if (nj >= 1) a(idx - st[j], idx) = std::sqrt(static_cast<double>(nj));
        }
        out.push_back({cutoffs, std::move(a)});
    }
    return out;
}

struct AssembledOps {
    TruncatedOperator H;
    std::vector<TruncatedOperator> L;
    TruncatedOperator G; // -1/2 sum L*L - iH
};

// H and L_l from the model matrices by direct substitution.
inline AssembledOps assemble(const GaussianModel& g, const std::vector<int>& cutoffs) {
    if (static_cast<Eigen::Index>(cutoffs.size()) != g.d)
        throw std::invalid_argument("assemble: cutoffs size != d");
    auto as = ladder(cutoffs);
    const Eigen::Index n = fock::total_dim(cutoffs);

    CMat h = CMat::Zero(n, n);
    for (Eigen::Index j = 0; j < g.d; ++j)
        for (Eigen::Index k = 0; k < g.d; ++k) {
            if (g.omega(j, k) != Complex(0, 0))
                h += g.omega(j, k) * (as[j].mat.adjoint() * as[k].mat);
            if (g.kappa(j, k) != Complex(0, 0)) {
                h += 0.5 * g.kappa(j, k) * (as[j].mat.adjoint() * as[k].mat.adjoint());
                h += 0.5 * std::conj(g.kappa(j, k)) * (as[j].mat * as[k].mat);
            }
        }
    for (Eigen::Index j = 0; j < g.d; ++j)
        if (g.zeta(j) != Complex(0, 0)) {
            h += 0.5 * g.zeta(j) * as[j].mat.adjoint();
            h += 0.5 * std::conj(g.zeta(j)) * as[j].mat;
        }

    AssembledOps ops;
    ops.H = {cutoffs, std::move(h)};
    CMat sum_ldl = CMat::Zero(n, n);
    for (Eigen::Index l = 0; l < g.m; ++l) {
        CMat lm = CMat::Zero(n, n);
        for (Eigen::Index k = 0; k < g.d; ++k) {
            if (g.V(l, k) != Complex(0, 0)) lm += std::conj(g.V(l, k)) * as[k].mat;
            if (g.U(l, k) != Complex(0, 0)) lm += g.U(l, k) * as[k].mat.adjoint();
        }
        sum_ldl += lm.adjoint() * lm;
        ops.L.push_back({cutoffs, std::move(lm)});
    }
    ops.G = {cutoffs, CMat(-0.5 * sum_ldl - Complex(0, 1) * ops.H.mat)};
    return ops;
}

// W(z) = exp(z a^+ - conj(z) a), multimode. The truncated exponent is
// anti-Hermitian, so the truncated W is unitary.
inline TruncatedOperator weyl_matrix(const CVec& z, const std::vector<int>& cutoffs) {
    if (static_cast<Eigen::Index>(cutoffs.size()) != z.size())
        throw std::invalid_argument("weyl_matrix: cutoffs size != dim z");
    auto as = ladder(cutoffs);
    const Eigen::Index n = fock::total_dim(cutoffs);
    CMat x = CMat::Zero(n, n);
    for (Eigen::Index j = 0; j < z.size(); ++j)
        x += z(j) * as[j].mat.adjoint() - std::conj(z(j)) * as[j].mat;
    return {cutoffs, x.exp()};
}

namespace fock {

// Sparse engine for repeated generator applications.
struct LindbladEngine {
    SpMat H;
    std::vector<SpMat> L, Ldag;
    SpMat sum_LdagL;

    explicit LindbladEngine(const AssembledOps& ops) {
        auto sparsify = [](const CMat& m) {
            SpMat s = m.sparseView(1.0, 1e-300);
            s.makeCompressed();
            return s;
        };
        H = sparsify(ops.H.mat);
        CMat acc = CMat::Zero(ops.H.mat.rows(), ops.H.mat.cols());
        for (const auto& l : ops.L) {
            L.push_back(sparsify(l.mat));
            Ldag.push_back(sparsify(l.mat.adjoint()));
            acc += l.mat.adjoint() * l.mat;
        }
        sum_LdagL = sparsify(acc);
    }

    // i[H,x] - 1/2 {sum L*L, x} + sum L* x L
    CMat apply(const CMat& x) const {
        CMat out = Complex(0, 1) * (H * x - x * H);
        out.noalias() -= 0.5 * (sum_LdagL * x);
        out.noalias() -= 0.5 * (x * sum_LdagL);
        for (size_t l = 0; l < L.size(); ++l) {
            CMat xl = x * L[l];
            out.noalias() += Ldag[l] * xl;
        }
        return out;
    }
};

} // namespace fock

// One generator application (meaningful on the interior sector).
inline TruncatedOperator lindblad_apply(const GaussianModel& g, const TruncatedOperator& x) {
    AssembledOps ops = assemble(g, x.cutoffs);
    fock::LindbladEngine eng(ops);
    return {x.cutoffs, eng.apply(x.mat)};
}

namespace fock {

// Dormand–Prince 5(4) with FSAL and standard step control.
inline CMat dormand_prince(const LindbladEngine& eng, CMat x, double t_final,
                           const OdeOptions& opt) {
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    if (t_final == 0.0) return x;
    double t = 0.0;
    CMat k1 = eng.apply(x);
    double xn = x.cwiseAbs().maxCoeff();
    double h = 0.1 * (1.0 + xn) / (1.0 + k1.cwiseAbs().maxCoeff());
    h = std::min(h, t_final);
    if (opt.max_step > 0) h = std::min(h, opt.max_step);

    while (t_final - t > 1e-14 * t_final) {
        h = std::min(h, t_final - t);
        if (h < 1e-13 * std::max(1.0, t_final))
            throw StepSizeUnderflow("dormand_prince: step size underflow");

        CMat k2 = eng.apply(x + h * (a21 * k1));
        CMat k3 = eng.apply(x + h * (a31 * k1 + a32 * k2));
        CMat k4 = eng.apply(x + h * (a41 * k1 + a42 * k2 + a43 * k3));
        CMat k5 = eng.apply(x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        CMat k6 = eng.apply(x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        CMat x_new = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        CMat k7 = eng.apply(x_new);
        CMat err_mat = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double scale = opt.tol * (1.0 + std::max(x.cwiseAbs().maxCoeff(), x_new.cwiseAbs().maxCoeff()));
        double err = err_mat.cwiseAbs().maxCoeff() / scale;
        if (err <= 1.0) {
            t += h;
            x = std::move(x_new);
            k1 = std::move(k7); // FSAL
        }
        double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        factor = std::clamp(factor, 0.2, 5.0);
        h *= factor;
        if (opt.max_step > 0) h = std::min(h, opt.max_step);
    }
    return x;
}

} // namespace fock

// Heisenberg-picture evolution dx/ds = L(x), x(0) = x.
inline TruncatedOperator heisenberg_evolve(const GaussianModel& g, const TruncatedOperator& x,
                                           double t, const OdeOptions& opt = {}) {
    AssembledOps ops = assemble(g, x.cutoffs);
    fock::LindbladEngine eng(ops);
    return {x.cutoffs, fock::dormand_prince(eng, x.mat, t, opt)};
}

// || P ( T_t(W*W) - T_t(W*) T_t(W) ) P ||, P = total occupation <= sector.
// Small iff z lies in the symplectic complement M'.
inline double multiplicativity_residual(const GaussianModel& g, const CVec& z, double t,
                                        const std::vector<int>& cutoffs, int sector,
                                        const OdeOptions& opt = {}) {
    AssembledOps ops = assemble(g, cutoffs);
    fock::LindbladEngine eng(ops);
    TruncatedOperator w = weyl_matrix(z, cutoffs);
    CMat wdw = w.mat.adjoint() * w.mat;
    CMat lhs = fock::dormand_prince(eng, wdw, t, opt);
    CMat wd_t = fock::dormand_prince(eng, w.mat.adjoint(), t, opt);
    CMat w_t = fock::dormand_prince(eng, w.mat, t, opt);
    CMat diff = lhs - wd_t * w_t;
    return fock::sector_norm(diff, fock::sector_indices_total(cutoffs, sector));
}

// || P ( T_t(W(z)) - e^{-damping + i phase} W(e^{tZ} z) ) P || on the default
// interior sector.
inline double verify_weyl_formula(const GaussianModel& g, const CVec& z, double t,
                                  const std::vector<int>& cutoffs, const OdeOptions& opt = {},
                                  const QuadOptions& quad = {}) {
    TruncatedOperator w = weyl_matrix(z, cutoffs);
    TruncatedOperator numeric = heisenberg_evolve(g, w, t, opt);
    WeylEvolution ev = evolve_weyl(g, z, t, quad);
    TruncatedOperator w_out = weyl_matrix(ev.z_out, cutoffs);
    CMat predicted = std::exp(Complex(-ev.damping, ev.phase)) * w_out.mat;
    return fock::sector_norm(numeric.mat - predicted, fock::interior_indices(cutoffs));
}

// Appendix-level generator identities:
//  (1) L(a_k) = -(i zeta_k/2) 1 + (1/2) sum_j [ (U^T V - V^T U - 2 i kappa)_{kj} a_j^+
//                                             + (U^T conj(U) - V^T conj(V) - 2 i Omega)_{kj} a_j ]
//  (2) L(x y) = x L(y) + L(x) y + sum_l [L_l, x*]* [L_l, y]
// checked on the interior sector; (2) on ladder operators and seeded random
// low-sector matrices. Returns the largest deviation found.
inline double verify_generator_on_ladder(const GaussianModel& g, const std::vector<int>& cutoffs,
                                         unsigned seed = 12345, int n_random = 2) {
    AssembledOps ops = assemble(g, cutoffs);
    fock::LindbladEngine eng(ops);
    auto as = ladder(cutoffs);
    const Eigen::Index n = fock::total_dim(cutoffs);
    auto interior = fock::interior_indices(cutoffs);
    const CMat id = CMat::Identity(n, n);

    CMat alpha = 0.5 * (g.U.transpose() * g.V - g.V.transpose() * g.U -
                        Complex(0, 2) * g.kappa); // coefficient of a_j^+
    CMat beta = 0.5 * (g.U.transpose() * g.U.conjugate() - g.V.transpose() * g.V.conjugate() -
                       Complex(0, 2) * g.omega); // coefficient of a_j

    double worst = 0.0;
    for (Eigen::Index k = 0; k < g.d; ++k) {
        CMat closed = Complex(0, -0.5) * g.zeta(k) * id;
        for (Eigen::Index j = 0; j < g.d; ++j)
            closed += alpha(k, j) * as[j].mat.adjoint() + beta(k, j) * as[j].mat;
        CMat diff = eng.apply(as[k].mat) - closed;
        worst = std::max(worst, fock::sector_max_abs(diff, interior));
    }

    auto product_rule_residual = [&](const CMat& x, const CMat& y) {
        CMat rhs = x * eng.apply(y) + eng.apply(x) * y;
        for (size_t l = 0; l < eng.L.size(); ++l) {
            CMat cx = eng.L[l] * x.adjoint() - x.adjoint() * eng.L[l];
            CMat cy = eng.L[l] * y - y * eng.L[l];
            rhs += cx.adjoint() * cy;
        }
        CMat diff = eng.apply(x * y) - rhs;
        return fock::sector_max_abs(diff, interior);
    };

    for (Eigen::Index k = 0; k < g.d; ++k)
        worst = std::max(worst, product_rule_residual(as[k].mat, as[k].mat));

    // random matrices supported on the interior sector
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int r = 0; r < n_random; ++r) {
        CMat x = CMat::Zero(n, n), y = CMat::Zero(n, n);
        for (auto i : interior)
            for (auto j : interior) {
                x(i, j) = Complex(unif(rng), unif(rng));
                y(i, j) = Complex(unif(rng), unif(rng));
            }
        worst = std::max(worst, product_rule_residual(x, y));
    }
    return worst;
}

} // namespace gqms
