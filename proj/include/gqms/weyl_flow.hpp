#pragma once

// Explicit semigroup action on Weyl operators:
//   T_t(W(z)) = exp(-damping + i phase) W(e^{tZ} z)
// with the real-linear drift and damping operators
//   Z z = [ conj(U*U - V*V)/2 + i Omega ] z + [ (U^T V - V^T U)/2 + i kappa ] conj(z)
//   C z = [ conj(U*U + V*V) ] z + [ U^T V + V^T U ] conj(z)
//   damping = 1/2 int_0^t Re< e^{sZ} z, C e^{sZ} z > ds
//   phase   =     int_0^t Re< zeta,    e^{sZ} z > ds .
//
// Independently of the commutator construction, the Weyl generators of the
// decoherence-free algebra are the maximal Z-invariant real subspace of
// ker C; crosscheck_complement compares the two routes.

#include <unsupported/Eigen/MatrixFunctions>

#include "gqms/dfa.hpp"
#include "gqms/model.hpp"
#include "gqms/quadrature.hpp"
#include "gqms/real_linear.hpp"

namespace gqms {

inline RealLinearMap build_Z(const GaussianModel& g) {
    const Complex I(0, 1);
    CMat a = 0.5 * (g.U.adjoint() * g.U - g.V.adjoint() * g.V).conjugate() + I * g.omega;
    CMat b = 0.5 * (g.U.transpose() * g.V - g.V.transpose() * g.U) + I * g.kappa;
    return real_linear_map(a, b);
}

inline RealLinearMap build_C(const GaussianModel& g) {
    CMat a = (g.U.adjoint() * g.U + g.V.adjoint() * g.V).conjugate();
    CMat b = g.U.transpose() * g.V + g.V.transpose() * g.U;
    return real_linear_map(a, b);
}

struct WeylEvolution {
    double t = 0.0;
    CVec z_in;
    CVec z_out;      // e^{tZ} z
    double damping = 0.0;
    double phase = 0.0;
};

// Drift, damping and phase of T_t(W(z)). The two integrands are smooth, so
// adaptive Gauss-Kronrod converges quickly; the damping integrand is a
// positive semidefinite quadratic form and is checked to be nonnegative at
// every node up to roundoff.
inline WeylEvolution evolve_weyl(const GaussianModel& g, const CVec& z, double t,
                                 const QuadOptions& quad = {}) {
    if (t < 0) throw std::invalid_argument("evolve_weyl: t must be >= 0");
    if (z.size() != g.d) throw std::invalid_argument("evolve_weyl: z has wrong dimension");
    WeylEvolution ev;
    ev.t = t;
    ev.z_in = z;
    if (t == 0.0) {
        ev.z_out = z;
        return ev;
    }
    const RMat zmat = build_Z(g).mat;
    const RMat cmat = build_C(g).mat;
    const RVec r0 = embed(z);
    ev.z_out = unembed(RVec((t * zmat).exp() * r0));

    auto drift = [&](double s) -> RVec { return (s * zmat).exp() * r0; };
    auto damping_integrand = [&](double s) {
        RVec w = drift(s);
        double val = w.dot(cmat * w);
        if (val < -1e-12 * (1.0 + w.squaredNorm()))
            throw std::logic_error("evolve_weyl: damping integrand negative (C not PSD?)");
        return val;
    };
    ev.damping = 0.5 * integrate_adaptive(damping_integrand, 0.0, t, quad);

    if (g.zeta.cwiseAbs().maxCoeff() > 0.0) {
        const RVec zeta_r = embed(g.zeta);
        auto phase_integrand = [&](double s) { return zeta_r.dot(drift(s)); };
        ev.phase = integrate_adaptive(phase_integrand, 0.0, t, quad);
    }
    return ev;
}

// Maximal Z-invariant real subspace of ker C: K_0 = ker C,
// K_{i+1} = K_i cap Z^{-1} K_i, iterated to stability. Z^{-1} K is the null
// space of (I - P_K) Z, so a singular Z needs no inverse.
inline RealSubspace kerC_Z_invariant(const GaussianModel& g, double tol = kSpanTol) {
    const RMat zmat = build_Z(g).mat;
    const RMat cmat = build_C(g).mat;
    // (I - P) Z can be numerically zero when K is already Z-invariant; the
    // scale of Z itself decides which singular values are genuine.
    const double z_scale = zmat.norm();
    RealSubspace k = null_space(cmat, g.d, tol);
    for (Eigen::Index it = 0; it < 2 * g.d + 1 && k.dim() > 0; ++it) {
        RMat outside = RMat::Identity(2 * g.d, 2 * g.d) - k.projector();
        RealSubspace z_preimage = null_space(outside * zmat, g.d, tol, z_scale);
        RealSubspace next = intersect(k, z_preimage);
        if (next.dim() == k.dim()) break;
        k = next;
    }
    return k;
}

// Dual-route consistency: the Z-invariant kernel of C must equal the
// symplectic complement of M from the commutator construction.
inline bool crosscheck_complement(const GaussianModel& g, double tol = kSubspaceEqTol,
                                  double span_tol = kSpanTol) {
    RealSubspace via_kerC = kerC_Z_invariant(g, span_tol);
    RealSubspace via_comm = symplectic_complement(m_space(commutator_span(g, span_tol), span_tol));
    return subspace_equal(via_kerC, via_comm, tol);
}

} // namespace gqms
