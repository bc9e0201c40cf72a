#pragma once

// Symplectic Gram-Schmidt, Bogoliubov normal form and Kraus mode reduction.
//
// A symplectic subspace of even real dimension 2k is decomposed into k pairs
// (z_1, z_2) with Im<z_1, z_2> = 1 and all cross products zero; an isotropic
// subspace keeps an orthonormal basis (all symplectic products vanish). The
// Bogoliubov matrix maps the pairs of Mr to (e_j, i e_j), the isotropic basis
// of Mc to e_{d_r+1}, ..., and the pairs of Mf after those, extended to a
// symplectomorphism of all of C^d. Only the subspaces are canonical; the
// basis frames inside them (in particular the Mc frame) are not.

#include "gqms/dfa.hpp"
#include "gqms/model.hpp"
#include "gqms/real_linear.hpp"

namespace gqms {

struct AssumptionViolated : std::runtime_error {
    AssumptionViolated(const std::string& what, CVec witness_)
        : std::runtime_error(what), witness(std::move(witness_)) {}
    CVec witness;
};

enum class SpanKind { Symplectic, Isotropic, Mixed };

struct SymplecticBasis {
    std::vector<std::pair<CVec, CVec>> pairs; // Im<first, second> = 1
    std::vector<CVec> isotropic;

    std::vector<CVec> all_vectors() const {
        std::vector<CVec> out;
        for (const auto& pr : pairs) {
            out.push_back(pr.first);
            out.push_back(pr.second);
        }
        for (const auto& z : isotropic) out.push_back(z);
        return out;
    }
};

namespace detail {

// Pivot: prefer the basis vector whose leading significant coordinate comes
// earliest (ties by magnitude), rescaled so its largest coordinate is +1.
// This makes canonical inputs come out in canonical form.
inline Eigen::Index pick_pivot(const std::vector<CVec>& work) {
    Eigen::Index best = 0;
    Eigen::Index best_lead = std::numeric_limits<Eigen::Index>::max();
    double best_mag = 0.0;
    for (size_t i = 0; i < work.size(); ++i) {
        RVec r = embed(work[i]);
        double maxabs = r.cwiseAbs().maxCoeff();
        if (maxabs <= 0.0) continue;
        Eigen::Index lead = 0;
        while (lead < r.size() && std::abs(r(lead)) < 0.5 * maxabs) ++lead;
        if (lead < best_lead || (lead == best_lead && maxabs > best_mag)) {
            best = static_cast<Eigen::Index>(i);
            best_lead = lead;
            best_mag = maxabs;
        }
    }
    return best;
}

inline CVec normalize_pivot(const CVec& z) {
    RVec r = embed(z);
    Eigen::Index idx = 0;
    r.cwiseAbs().maxCoeff(&idx);
    return unembed(RVec(r / r(idx)));
}

// w -> w + Im<w,z1> z2 - Im<w,z2> z1, which is symplectically orthogonal to
// the pair (z1, z2) when Im<z1,z2> = 1.
inline CVec reduce_by_pair(const CVec& w, const CVec& z1, const CVec& z2) {
    return w + symplectic_form(w, z1) * z2 - symplectic_form(w, z2) * z1;
}

// Span of unit-scale working vectors; directions below the absolute floor are
// roundoff residue, not data.
inline std::vector<CVec> orthonormal_vectors(const std::vector<CVec>& vs, Eigen::Index n,
                                             double tol) {
    RMat cols(2 * n, static_cast<Eigen::Index>(vs.size()));
    for (size_t i = 0; i < vs.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = embed(vs[i]);
    double scale = 1.0;
    for (size_t i = 0; i < vs.size(); ++i) scale = std::max(scale, cols.col(static_cast<Eigen::Index>(i)).norm());
    RMat basis = gqms::detail::orthonormal_span(cols, tol, 1e-9 * scale);
    std::vector<CVec> out;
    for (Eigen::Index c = 0; c < basis.cols(); ++c) out.push_back(unembed(basis.col(c)));
    return out;
}

// Core pair extraction on a symplectic subspace given by spanning vectors.
inline std::vector<std::pair<CVec, CVec>> extract_pairs(std::vector<CVec> work, Eigen::Index n,
                                                        double tol) {
    std::vector<std::pair<CVec, CVec>> pairs;
    std::vector<CVec> basis = orthonormal_vectors(work, n, tol);
    while (!basis.empty()) {
        if (basis.size() == 1)
            throw AssumptionViolated(
                "symplectic_gram_schmidt: remainder space has dimension 1 (form degenerate)",
                basis.front());
        CVec z1 = normalize_pivot(basis[pick_pivot(basis)]);
        double best = 0.0;
        Eigen::Index best_i = -1;
        for (size_t i = 0; i < basis.size(); ++i) {
            double f = std::abs(symplectic_form(z1, basis[i]));
            if (f > best) {
                best = f;
                best_i = static_cast<Eigen::Index>(i);
            }
        }
        if (best_i < 0 || best < tol)
            throw AssumptionViolated(
                "symplectic_gram_schmidt: no symplectic partner found (form degenerate)", z1);
        CVec z2 = basis[static_cast<size_t>(best_i)] / symplectic_form(z1, basis[static_cast<size_t>(best_i)]);
        pairs.emplace_back(z1, z2);
        std::vector<CVec> reduced;
        for (const auto& w : basis) {
            CVec w2 = reduce_by_pair(w, z1, z2);
            if (embed(w2).norm() > tol) reduced.push_back(w2);
        }
        basis = orthonormal_vectors(reduced, n, tol);
    }
    return pairs;
}

} // namespace detail

// Decompose a real subspace into symplectic pairs and/or an isotropic basis.
// The declared kind is checked; Mixed handles M cup M' style inputs by
// splitting off the radical S cap S' first.
inline SymplecticBasis symplectic_gram_schmidt(const RealSubspace& s, SpanKind kind,
                                               double tol = 1e-10) {
    SymplecticBasis out;
    if (s.dim() == 0) return out;

    if (kind == SpanKind::Isotropic) {
        auto vs = s.vectors();
        for (size_t i = 0; i < vs.size(); ++i)
            for (size_t j = i + 1; j < vs.size(); ++j) {
                double f = std::abs(symplectic_form(vs[i], vs[j]));
                if (f > tol)
                    throw AssumptionViolated("symplectic_gram_schmidt: subspace is not isotropic",
                                             vs[i]);
            }
        out.isotropic = vs;
        return out;
    }

    if (kind == SpanKind::Symplectic) {
        RealSubspace radical = intersect(s, symplectic_complement(s));
        if (radical.dim() != 0)
            throw AssumptionViolated("symplectic_gram_schmidt: subspace is not symplectic",
                                     unembed(radical.basis.col(0)));
        out.pairs = detail::extract_pairs(s.vectors(), s.n, tol);
        return out;
    }

    // Mixed: radical + symplectic part.
    RealSubspace radical = intersect(s, symplectic_complement(s));
    RealSubspace sympl = intersect(s, orth_complement(radical));
    out.isotropic = radical.vectors();
    if (sympl.dim() > 0) out.pairs = detail::extract_pairs(sympl.vectors(), s.n, tol);
    return out;
}

// An invertible real-linear map preserving Im<.,.>; B^T J B = J in embedded
// coordinates.
struct BogoliubovMap {
    Eigen::Index d = 0;
    RMat mat; // 2d x 2d

    CVec operator()(const CVec& z) const { return unembed(mat * embed(z)); }

    double symplectic_defect() const {
        RMat j = mult_i_matrix(d);
        return (mat.transpose() * j * mat - j).cwiseAbs().maxCoeff();
    }
};

// Builds B with B(Mr pairs) = (e_j, i e_j) for j = 1..d_r, B(Mc basis) =
// e_{d_r+1}..e_{d_r+d_c}, B(Mf pairs) = (e_j, i e_j) for the following d_f
// modes, completed to a symplectomorphism of C^d on the residual space.
inline BogoliubovMap bogoliubov_matrix(const Decomposition& dec, double tol = 1e-10) {
    const Eigen::Index d = dec.M.n;

    SymplecticBasis br = symplectic_gram_schmidt(dec.Mr, SpanKind::Symplectic, tol);
    SymplecticBasis bf = symplectic_gram_schmidt(dec.Mf, SpanKind::Symplectic, tol);
    std::vector<CVec> iso = dec.Mc.vectors();

    // Residual spanning set: full space reduced against the pairs found so far.
    std::vector<CVec> residual;
    for (Eigen::Index k = 0; k < 2 * d; ++k) {
        RVec e = RVec::Zero(2 * d);
        e(k) = 1.0;
        CVec w = unembed(e);
        for (const auto& pr : br.pairs) w = detail::reduce_by_pair(w, pr.first, pr.second);
        for (const auto& pr : bf.pairs) w = detail::reduce_by_pair(w, pr.first, pr.second);
        residual.push_back(w);
    }
    std::vector<CVec> res_basis = detail::orthonormal_vectors(residual, d, dec.M.tol);

    // Symplectic partners for the isotropic directions.
    std::vector<std::pair<CVec, CVec>> classical_pairs;
    for (size_t j = 0; j < iso.size(); ++j) {
        const CVec& z = iso[j];
        double best = 0.0;
        Eigen::Index best_i = -1;
        for (size_t i = 0; i < res_basis.size(); ++i) {
            double f = std::abs(symplectic_form(z, res_basis[i]));
            if (f > best) {
                best = f;
                best_i = static_cast<Eigen::Index>(i);
            }
        }
        if (best_i < 0 || best < tol)
            throw AssumptionViolated("bogoliubov_matrix: cannot complete isotropic direction", z);
        CVec w = res_basis[static_cast<size_t>(best_i)] / symplectic_form(z, res_basis[static_cast<size_t>(best_i)]);
        classical_pairs.emplace_back(z, w);
        for (size_t k = j + 1; k < iso.size(); ++k)
            iso[k] = detail::reduce_by_pair(iso[k], z, w);
        std::vector<CVec> reduced;
        for (const auto& r : res_basis) {
            CVec r2 = detail::reduce_by_pair(r, z, w);
            if (embed(r2).norm() > tol) reduced.push_back(r2);
        }
        res_basis = detail::orthonormal_vectors(reduced, d, dec.M.tol);
    }

    // Whatever is left is a symplectic space; pair it up.
    std::vector<std::pair<CVec, CVec>> rest;
    if (!res_basis.empty()) rest = detail::extract_pairs(res_basis, d, tol);

    std::vector<std::pair<CVec, CVec>> ordered;
    ordered.insert(ordered.end(), br.pairs.begin(), br.pairs.end());
    ordered.insert(ordered.end(), classical_pairs.begin(), classical_pairs.end());
    ordered.insert(ordered.end(), bf.pairs.begin(), bf.pairs.end());
    ordered.insert(ordered.end(), rest.begin(), rest.end());
    if (static_cast<Eigen::Index>(ordered.size()) != d)
        throw std::runtime_error("bogoliubov_matrix: symplectic basis is incomplete");

    // S maps the canonical symplectic basis to ours; B = S^{-1}.
    RMat s(2 * d, 2 * d);
    for (Eigen::Index k = 0; k < d; ++k) {
        s.col(k) = embed(ordered[static_cast<size_t>(k)].first);
        s.col(d + k) = embed(ordered[static_cast<size_t>(k)].second);
    }
    BogoliubovMap b{d, s.partialPivLu().inverse()};
    return b;
}

namespace detail {

// Coefficient pairs transform with B: i(v'+u') = B(i(v+u)), v'-u' = B(v-u).
inline std::pair<CVec, CVec> transform_row(const BogoliubovMap& b, const CVec& v, const CVec& u) {
    const Complex I(0, 1);
    CVec s_new = -I * b(I * (v + u));
    CVec r_new = b(v - u);
    return {0.5 * (s_new + r_new), 0.5 * (s_new - r_new)};
}

// Real 4d x 4d matrix of the induced action on [conj(v); u] vectors.
inline RMat coefficient_action(const BogoliubovMap& b) {
    const Eigen::Index d = b.d;
    RMat t(4 * d, 4 * d);
    for (Eigen::Index k = 0; k < 4 * d; ++k) {
        RVec e = RVec::Zero(4 * d);
        e(k) = 1.0;
        CVec gvec = unembed(e);
        CVec v = gvec.head(d).conjugate();
        CVec u = gvec.tail(d);
        auto [v2, u2] = transform_row(b, v, u);
        CVec g2(2 * d);
        g2 << v2.conjugate(), u2;
        t.col(k) = embed(g2);
    }
    return t;
}

} // namespace detail

// Rewrites the model under the Fock unitary implementing an arbitrary
// symplectomorphism B: Kraus rows transform via their M-generators,
// (Omega, kappa) by conjugating bbH with the coefficient-space action of B
// and re-reading the blocks, zeta by the same row transformation. The
// structure report is invariant under this rewriting.
inline GaussianModel transform_model(const GaussianModel& g, const BogoliubovMap& b) {
    GaussianModel out = g;
    for (Eigen::Index l = 0; l < g.m; ++l) {
        auto [v2, u2] = detail::transform_row(b, g.v_row(l), g.u_row(l));
        out.V.row(l) = v2.transpose();
        out.U.row(l) = u2.transpose();
    }

    const Eigen::Index d = g.d;
    RMat t = detail::coefficient_action(b);
    RMat bbH_real = real_linear_map(build_bbH(g)).mat;
    RMat conj_real = t * bbH_real * t.partialPivLu().inverse();

    // The conjugated map must still be complex-linear on C^{2d}.
    const Eigen::Index n2 = 2 * d;
    RMat tl = conj_real.topLeftCorner(n2, n2), trc = conj_real.topRightCorner(n2, n2);
    RMat bl = conj_real.bottomLeftCorner(n2, n2), brc = conj_real.bottomRightCorner(n2, n2);
    double lin_defect = std::max((tl - brc).cwiseAbs().maxCoeff(), (trc + bl).cwiseAbs().maxCoeff());
    if (lin_defect > 1e-8 * std::max(1.0, bbH_real.cwiseAbs().maxCoeff()))
        throw std::runtime_error("transform_model: conjugated bbH is not complex-linear");
    CMat bbH_new(n2, n2);
    bbH_new.real() = 0.5 * (tl + brc);
    bbH_new.imag() = 0.5 * (bl - trc);

    CMat omega_new = bbH_new.bottomRightCorner(d, d);
    CMat kappa_new = -bbH_new.bottomLeftCorner(d, d);
    double block_defect = std::max(
        {(bbH_new.topLeftCorner(d, d) + omega_new.transpose()).cwiseAbs().maxCoeff(),
         (bbH_new.topRightCorner(d, d) - kappa_new.conjugate()).cwiseAbs().maxCoeff(),
         (omega_new - omega_new.adjoint()).cwiseAbs().maxCoeff(),
         (kappa_new - kappa_new.transpose()).cwiseAbs().maxCoeff()});
    if (block_defect > 1e-8 * std::max(1.0, bbH_real.cwiseAbs().maxCoeff()))
        throw std::runtime_error("transform_model: conjugated bbH lost its block structure");
    out.omega = 0.5 * (omega_new + omega_new.adjoint()).eval();
    out.kappa = 0.5 * (kappa_new + kappa_new.transpose()).eval();

    const Complex I(0, 1);
    out.zeta = -I * b(I * g.zeta);
    return out;
}

// Normal-form rewriting: with B from bogoliubov_matrix on this model's
// decomposition, every transformed Kraus row is supported on the first
// d_r + d_c columns.
inline GaussianModel reduce_kraus(const GaussianModel& g, const BogoliubovMap& b) {
    return transform_model(g, b);
}

// Fills the Bogoliubov matrix into a structure report.
inline void fill_bogoliubov(StructureReport& rep, double tol = 1e-10) {
    rep.bogoliubov = bogoliubov_matrix(rep.dec, tol).mat;
}

} // namespace gqms
