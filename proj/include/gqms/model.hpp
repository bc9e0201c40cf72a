#pragma once

// Gaussian semigroup specification: the matrices (Omega, kappa, zeta, V, U)
// of a generator with quadratic Hamiltonian
//   H = sum_{jk} Omega_{jk} a_j^+ a_k + (kappa_{jk}/2) a_j^+ a_k^+
//       + (conj(kappa_{jk})/2) a_j a_k + sum_j (zeta_j/2) a_j^+ + h.c.
// and linear Kraus operators
//   L_l = sum_k conj(v_{lk}) a_k + u_{lk} a_k^+ .
// Builders translate quadrature expressions (products of q_j, p_j) into this
// canonical form.

#include <cmath>
#include <optional>
#include <sstream>
#include <tuple>
#include <utility>

#include "gqms/real_linear.hpp"

namespace gqms {

inline constexpr double kSymTol = 1e-12; // relative symmetry tolerance

struct GaussianModel {
    Eigen::Index d = 0; // number of modes
    Eigen::Index m = 0; // number of Kraus operators
    CMat omega;         // d x d, Hermitian
    CMat kappa;         // d x d, symmetric
    CVec zeta;          // d
    CMat V;             // m x d, row l = v_{l.}
    CMat U;             // m x d, row l = u_{l.}

    CVec v_row(Eigen::Index l) const { return V.row(l).transpose(); }
    CVec u_row(Eigen::Index l) const { return U.row(l).transpose(); }

    static GaussianModel zero(Eigen::Index d, Eigen::Index m) {
        GaussianModel g;
        g.d = d;
        g.m = m;
        g.omega = CMat::Zero(d, d);
        g.kappa = CMat::Zero(d, d);
        g.zeta = CVec::Zero(d);
        g.V = CMat::Zero(m, d);
        g.U = CMat::Zero(m, d);
        return g;
    }
};

struct ValidationCheck {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct ValidationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Unsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string max_entry_detail(const CMat& diff) {
    Eigen::Index r = 0, c = 0;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < diff.rows(); ++i)
        for (Eigen::Index j = 0; j < diff.cols(); ++j)
            if (std::abs(diff(i, j)) > worst) {
                worst = std::abs(diff(i, j));
                r = i;
                c = j;
            }
    std::ostringstream os;
    os << "worst entry (" << r << "," << c << "), |deviation| = " << worst;
    return os.str();
}

} // namespace detail

// Per-invariant validation. Failures are reported, not thrown.
inline ValidationReport validate(const GaussianModel& g, double tol_sym = kSymTol) {
    ValidationReport rep;

    auto shapes_ok = g.omega.rows() == g.d && g.omega.cols() == g.d && g.kappa.rows() == g.d &&
                     g.kappa.cols() == g.d && g.zeta.size() == g.d && g.V.rows() == g.m &&
                     g.V.cols() == g.d && g.U.rows() == g.m && g.U.cols() == g.d && g.d >= 1;
    rep.checks.push_back({"shapes", shapes_ok, shapes_ok ? "" : "matrix dimensions inconsistent with (d, m)"});
    if (!shapes_ok) return rep;

    {
        CMat diff = g.omega - g.omega.adjoint();
        double scale = g.omega.cwiseAbs().maxCoeff();
        bool ok = diff.cwiseAbs().maxCoeff() <= tol_sym * std::max(scale, 1.0);
        rep.checks.push_back({"omega_hermitian", ok, ok ? "" : detail::max_entry_detail(diff)});
    }
    {
        CMat diff = g.kappa - g.kappa.transpose();
        double scale = g.kappa.cwiseAbs().maxCoeff();
        bool ok = diff.cwiseAbs().maxCoeff() <= tol_sym * std::max(scale, 1.0);
        rep.checks.push_back({"kappa_symmetric", ok, ok ? "" : detail::max_entry_detail(diff)});
    }
    {
        bool ok = g.V.cwiseAbs().maxCoeff() > 0.0 || g.U.cwiseAbs().maxCoeff() > 0.0;
        rep.checks.push_back({"kraus_nonzero", ok, ok ? "" : "V = 0 and U = 0: pure-Hamiltonian excluded"});
    }
    {
        bool ok = g.m >= 1 && g.m <= 2 * g.d;
        std::ostringstream os;
        if (!ok) os << "m = " << g.m << " outside [1, " << 2 * g.d << "]";
        rep.checks.push_back({"m_range", ok, os.str()});
    }
    return rep;
}

inline void require_valid(const GaussianModel& g, double tol_sym = kSymTol) {
    ValidationReport rep = validate(g, tol_sym);
    if (rep.pass()) return;
    std::string msg = "model validation failed:";
    for (const auto& c : rep.checks)
        if (!c.pass) msg += " [" + c.name + "] " + c.detail;
    throw ValidationFailed(msg);
}

// Minimality of the GKLS representation: ker(V^*) cap ker(U^T) = {0},
// equivalently rank([conj(V) | U]) = m over C.
inline bool check_minimality(const GaussianModel& g, double tol_rank = 0.0) {
    if (g.m > 2 * g.d) return false;
    CMat stacked(g.m, 2 * g.d);
    stacked << g.V.conjugate(), g.U;
    Eigen::JacobiSVD<CMat> svd(stacked);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return false;
    double tol = tol_rank > 0.0
                     ? tol_rank
                     : static_cast<double>(std::max(g.m, 2 * g.d)) *
                           std::numeric_limits<double>::epsilon() * sv(0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    return rank == g.m;
}

// --- quadrature expressions -------------------------------------------------

enum class QuadKind { q, p };

struct QuadFactor {
    QuadKind kind = QuadKind::q;
    Eigen::Index mode = 1; // 1-based
};

// coeff * factor1 [* factor2]; at most quadratic.
struct QuadraticTerm {
    double coeff = 0.0;
    QuadFactor factor1;
    std::optional<QuadFactor> factor2;
};

struct SelfAdjointnessViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// q_j = (a_j + a_j^+)/sqrt(2), p_j = i (a_j^+ - a_j)/sqrt(2); returns the
// coefficients (c_a, c_c) of a_j and a_j^+.
inline std::pair<Complex, Complex> factor_coeffs(QuadKind k) {
    const double s = 1.0 / std::sqrt(2.0);
    if (k == QuadKind::q) return {Complex(s, 0), Complex(s, 0)};
    return {Complex(0, -s), Complex(0, s)};
}

} // namespace detail

// Expand a sum of quadrature terms into (Omega, kappa, zeta). Additive real
// constants are dropped; an imaginary constant means the requested operator
// is not self-adjoint (e.g. an unsymmetrized q_j p_j with equal mode).
inline std::tuple<CMat, CMat, CVec> hamiltonian_from_quadratures(
    const std::vector<QuadraticTerm>& terms, Eigen::Index d) {
    CMat omega = CMat::Zero(d, d);
    CMat creation = CMat::Zero(d, d);      // coefficient of a_i^+ a_j^+
    CMat annihilation = CMat::Zero(d, d);  // coefficient of a_i a_j
    CVec zeta = CVec::Zero(d);
    Complex constant(0, 0);

    for (const auto& term : terms) {
        auto check_mode = [&](Eigen::Index mode) {
            if (mode < 1 || mode > d)
                throw std::invalid_argument("quadratic term: mode index out of range");
        };
        check_mode(term.factor1.mode);
        const auto [xa, xc] = detail::factor_coeffs(term.factor1.kind);
        const Eigen::Index i = term.factor1.mode - 1;
        if (!term.factor2) {
            // c * X with X = xa a_i + xc a_i^+; matches zeta_i/2 a_i^+ + h.c.
            zeta(i) += 2.0 * term.coeff * xc;
            continue;
        }
        check_mode(term.factor2->mode);
        const auto [ya, yc] = detail::factor_coeffs(term.factor2->kind);
        const Eigen::Index j = term.factor2->mode - 1;
        const double c = term.coeff;
        // X Y normal-ordered: a_i a_j^+ = a_j^+ a_i + delta_ij.
        omega(i, j) += c * xc * ya;
        omega(j, i) += c * xa * yc;
        creation(i, j) += c * xc * yc;
        annihilation(i, j) += c * xa * ya;
        if (i == j) constant += c * xa * yc;
    }

    CMat kappa = creation + creation.transpose();
    CMat kappa_from_annih = (annihilation + annihilation.transpose()).conjugate();

    double scale = std::max({omega.cwiseAbs().maxCoeff(), kappa.cwiseAbs().maxCoeff(),
                             zeta.cwiseAbs().maxCoeff(), 1.0});
    if (std::abs(constant.imag()) > 1e-12 * scale)
        throw SelfAdjointnessViolated(
            "quadrature expression is not self-adjoint (imaginary constant left over; "
            "same-mode q_j p_j terms need their symmetrized partner)");
    if ((kappa - kappa_from_annih).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw SelfAdjointnessViolated(
            "quadrature expression is not self-adjoint (a a vs a^+ a^+ parts disagree)");
    if ((omega - omega.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw SelfAdjointnessViolated("quadrature expression is not self-adjoint (Omega part)");

    // Exact symmetrization; deviations at this point are pure roundoff.
    omega = 0.5 * (omega + omega.adjoint()).eval();
    kappa = 0.5 * (kappa + kappa.transpose()).eval();
    return {omega, kappa, zeta};
}

enum class KrausKind { q, p, annihilate, create };

// Coefficient rows (v, u) of L = scale * X for X in {q_j, p_j, a_j, a_j^+}.
inline std::pair<CVec, CVec> kraus_row_from_quadrature(KrausKind kind, Eigen::Index mode,
                                                       double scale, Eigen::Index d) {
    if (mode < 1 || mode > d) throw std::invalid_argument("kraus row: mode index out of range");
    CVec v = CVec::Zero(d), u = CVec::Zero(d);
    const double s = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case KrausKind::q:
            v(mode - 1) = Complex(s, 0);
            u(mode - 1) = Complex(s, 0);
            break;
        case KrausKind::p:
            v(mode - 1) = Complex(0, s);
            u(mode - 1) = Complex(0, s);
            break;
        case KrausKind::annihilate:
            v(mode - 1) = Complex(1, 0);
            break;
        case KrausKind::create:
            u(mode - 1) = Complex(1, 0);
            break;
    }
    return {v * scale, u * scale};
}

// Custom row: L = a(v) + a^+(u), scaled.
inline std::pair<CVec, CVec> kraus_row_custom(const CVec& v, const CVec& u, double scale = 1.0) {
    return {v * scale, u * scale};
}

} // namespace gqms
