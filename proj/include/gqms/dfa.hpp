#pragma once

// Decoherence-free structure data.
//
// Linear combinations a(v) + a^+(u) are identified with vectors
// [conj(v); u] in C^{2d}. Commutation with H acts on these vectors as the
// block matrix
//     bbH = [ -Omega^T   conj(kappa) ]
//           [ -kappa     Omega       ]
// The iterated images of the Kraus seeds span a real subspace V of C^{2d}
// (iterations capped at 2d-1, with early stop once a sweep adds no
// dimension). The subspace
//     M = Lin_R { i(v+u), v-u : [conj(v); u] in V }  subset  C^d
// and its symplectic complement M' determine the decoherence-free algebra:
// with Mc = M cap M', d_c = dim Mc, 2 d_r = dim M - d_c, 2 d_f = dim M' - d_c,
// the algebra is L^inf(R^{d_c}) tensor B(Gamma(C^{d_f})).

#include <optional>

#include "gqms/model.hpp"
#include "gqms/real_linear.hpp"

namespace gqms {

// bbH = [[-Omega^T, conj(kappa)], [-kappa, Omega]].
inline CMat build_bbH(const GaussianModel& g) {
    const Eigen::Index d = g.d;
    CMat h(2 * d, 2 * d);
    h.topLeftCorner(d, d) = -g.omega.transpose();
    h.topRightCorner(d, d) = g.kappa.conjugate();
    h.bottomLeftCorner(d, d) = -g.kappa;
    h.bottomRightCorner(d, d) = g.omega;
    return h;
}

struct CommutatorSpan {
    std::vector<CVec> generators; // bbH^n images of the seeds, n = 0..iterations_used
    RealSubspace span;            // real span in C^{2d}
    int iterations_used = 0;      // highest n that still added a dimension
};

// Seeds [conj(v_l); u_l] and [conj(u_l); v_l] for every Kraus row, iterated
// under bbH. The span is re-orthonormalized each sweep and bbH is applied to
// the newly added orthonormal directions only, which spans the same space as
// the raw iterates but keeps magnitudes bounded.
inline CommutatorSpan commutator_span(const GaussianModel& g, double tol = kSpanTol) {
    const Eigen::Index d = g.d;
    const CMat bbH = build_bbH(g);
    const int n_max = static_cast<int>(2 * d - 1);

    CommutatorSpan out;
    std::vector<CVec> seeds;
    for (Eigen::Index l = 0; l < g.m; ++l) {
        CVec v = g.v_row(l), u = g.u_row(l);
        CVec s1(2 * d), s2(2 * d);
        s1 << v.conjugate(), u;
        s2 << u.conjugate(), v;
        seeds.push_back(s1);
        seeds.push_back(s2);
    }
    out.generators = seeds;
    out.span = real_span(seeds, 2 * d, tol);
    out.iterations_used = 0;

    // Raw iterates are also recorded as generators; the span itself is grown
    // from orthonormal increments.
    const RMat bbH_real = real_linear_map(bbH).mat;
    std::vector<CVec> prev_raw = seeds;
    RMat prev_increment = out.span.basis;
    for (int n = 1; n <= n_max; ++n) {
        if (prev_increment.cols() == 0) break;
        RMat new_cols = bbH_real * prev_increment;
        RMat joined(out.span.basis.rows(), out.span.basis.cols() + new_cols.cols());
        joined << out.span.basis, new_cols;
        RealSubspace grown = real_span_cols(joined, 2 * d, tol);
        if (grown.dim() == out.span.dim()) break; // stabilized: bbH-invariant from here on
        // increment = directions of `grown` orthogonal to the previous span
        RMat residual = grown.basis - out.span.basis * (out.span.basis.transpose() * grown.basis);
        prev_increment = detail::orthonormal_span(residual, tol);
        out.span = grown;
        out.iterations_used = n;

        std::vector<CVec> raw_next;
        raw_next.reserve(prev_raw.size());
        for (const auto& gvec : prev_raw) raw_next.push_back(bbH * gvec);
        out.generators.insert(out.generators.end(), raw_next.begin(), raw_next.end());
        prev_raw = std::move(raw_next);
    }
    return out;
}

// M = Lin_R { i(v+u), v-u } over the generators of V. The map
// [conj(v); u] -> (i(v+u), v-u) is real-linear in embedded coordinates, so
// generator images span the image of the whole subspace.
inline RealSubspace m_space(const CommutatorSpan& cs, double tol = kSpanTol) {
    if (cs.span.n % 2 != 0) throw std::invalid_argument("m_space: ambient is not C^{2d}");
    const Eigen::Index d = cs.span.n / 2;
    std::vector<CVec> images;
    images.reserve(2 * cs.generators.size());
    for (const auto& gvec : cs.generators) {
        CVec v = gvec.head(d).conjugate();
        CVec u = gvec.tail(d);
        images.push_back(Complex(0, 1) * (v + u));
        images.push_back(v - u);
    }
    return real_span(images, d, tol);
}

struct ParityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Decomposition {
    RealSubspace M, Mprime, Mc, Mr, Mf;
    int d_c = 0, d_r = 0, d_f = 0;
};

// M' = symplectic complement, Mc = M cap M', Mr/Mf the real-orthogonal
// complements of Mc inside M and M'. dim M - d_c and dim M' - d_c must be
// even (Mr and Mf are symplectic subspaces).
inline Decomposition decompose(const RealSubspace& m, double tol = kSpanTol) {
    Decomposition dec;
    dec.M = m;
    dec.Mprime = symplectic_complement(m);
    dec.Mc = intersect(dec.M, dec.Mprime);
    dec.Mr = intersect(dec.M, orth_complement(dec.Mc));
    dec.Mf = intersect(dec.Mprime, orth_complement(dec.Mc));
    dec.d_c = static_cast<int>(dec.Mc.dim());
    const auto r2 = dec.M.dim() - dec.Mc.dim();
    const auto f2 = dec.Mprime.dim() - dec.Mc.dim();
    if (r2 % 2 != 0 || f2 % 2 != 0 || dec.Mr.dim() != r2 || dec.Mf.dim() != f2) {
        std::ostringstream os;
        os << "decompose: odd symplectic part (dim M = " << dec.M.dim()
           << ", dim M' = " << dec.Mprime.dim() << ", d_c = " << dec.d_c
           << "); upstream rank decision is suspect";
        throw ParityViolation(os.str());
    }
    dec.d_r = static_cast<int>(r2 / 2);
    dec.d_f = static_cast<int>(f2 / 2);
    (void)tol;
    return dec;
}

inline std::string algebra_description(int d_c, int d_f) {
    if (d_c == 0 && d_f == 0) return "C1";
    std::ostringstream os;
    if (d_c > 0) os << "L^inf(R^" << d_c << ")";
    if (d_c > 0 && d_f >= 0) os << " (x) ";
    os << "B(Gamma(C^" << d_f << "))";
    return os.str();
}

struct StructureReport {
    GaussianModel model;
    bool minimal = true;
    Decomposition dec;
    int iterations_used = 0;
    std::string algebra;
    std::optional<RMat> bogoliubov; // filled by the symplectic module
};

inline StructureReport structure_report(const GaussianModel& g, double tol = kSpanTol,
                                        double tol_sym = kSymTol, double tol_rank = 0.0) {
    require_valid(g, tol_sym);
    StructureReport rep;
    rep.model = g;
    rep.minimal = check_minimality(g, tol_rank);
    CommutatorSpan cs = commutator_span(g, tol);
    rep.iterations_used = cs.iterations_used;
    rep.dec = decompose(m_space(cs, tol), tol);
    rep.algebra = algebra_description(rep.dec.d_c, rep.dec.d_f);
    return rep;
}

enum class SingleKrausClass {
    SelfAdjoint,         // u = v: d_c = 1, d_r = 0
    NormalNotSelfAdjoint,// |v| = |u|, u != v: d_c = 2, d_r = 0
    NonNormal            // otherwise: d_c = 0, d_r = 1
};

inline const char* to_string(SingleKrausClass c) {
    switch (c) {
        case SingleKrausClass::SelfAdjoint: return "SelfAdjoint";
        case SingleKrausClass::NormalNotSelfAdjoint: return "NormalNotSelfAdjoint";
        case SingleKrausClass::NonNormal: return "NonNormal";
    }
    return "?";
}

// Classification of a single Kraus operator with H = 0, by inspection of
// (v, u): L self-adjoint iff u = v; normal iff |v| = |u| (then [L, L*] = 0).
inline SingleKrausClass classify_single_kraus(const GaussianModel& g, double tol_sym = kSymTol) {
    if (g.m != 1) throw Unsupported("classify_single_kraus: needs m = 1");
    double hscale = std::max({g.omega.cwiseAbs().maxCoeff(), g.kappa.cwiseAbs().maxCoeff(),
                              g.zeta.cwiseAbs().maxCoeff()});
    if (hscale > 0.0) throw Unsupported("classify_single_kraus: needs H = 0");
    CVec v = g.v_row(0), u = g.u_row(0);
    double scale = std::max(v.cwiseAbs().maxCoeff(), u.cwiseAbs().maxCoeff());
    if ((u - v).cwiseAbs().maxCoeff() <= tol_sym * std::max(scale, 1.0))
        return SingleKrausClass::SelfAdjoint;
    if (std::abs(v.norm() - u.norm()) <= tol_sym * std::max(scale, 1.0))
        return SingleKrausClass::NormalNotSelfAdjoint;
    return SingleKrausClass::NonNormal;
}

} // namespace gqms
