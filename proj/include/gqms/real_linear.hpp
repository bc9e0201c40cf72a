#pragma once

// Real-linear algebra on C^n viewed as R^{2n}.
//
// Complex vectors are embedded with layout (Re z_1..Re z_n, Im z_1..Im z_n),
// so that multiplication by i is the constant block matrix
//     J = [ 0  -I ]
//         [ I   0 ]
// and the symplectic form Im<z,w> (inner product conjugate-linear in the
// first argument) becomes  embed(z)^T J^T embed(w).
//
// Subspaces are real-linear: spans, complements and intersections are taken
// over R, with numerical rank decided by singular values above a relative
// threshold.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gqms {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kSpanTol = 1e-9;       // relative SV cutoff for spans
inline constexpr double kSubspaceEqTol = 1e-8; // largest principal angle

inline RVec embed(const CVec& z) {
    const Eigen::Index n = z.size();
    RVec r(2 * n);
    r.head(n) = z.real();
    r.tail(n) = z.imag();
    return r;
}

inline CVec unembed(const RVec& r) {
    if (r.size() % 2 != 0) throw std::invalid_argument("unembed: odd length");
    const Eigen::Index n = r.size() / 2;
    CVec z(n);
    z.real() = r.head(n);
    z.imag() = r.tail(n);
    return z;
}

// Multiplication by i in embedded coordinates: embed(i z) = J embed(z).
inline RMat mult_i_matrix(Eigen::Index n) {
    RMat j = RMat::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = -RMat::Identity(n, n);
    j.bottomLeftCorner(n, n) = RMat::Identity(n, n);
    return j;
}

// Gram matrix of Im<.,.> in embedded coordinates (equals J^T = -J = J^{-1}).
inline RMat symplectic_gram(Eigen::Index n) {
    return mult_i_matrix(n).transpose();
}

// Im<z,w>, conjugate-linear in the first argument. Antisymmetric,
// non-degenerate; (e_j, i e_j) -> 1.
inline double symplectic_form(const CVec& z, const CVec& w) {
    if (z.size() != w.size()) throw std::invalid_argument("symplectic_form: size mismatch");
    return z.dot(w).imag();
}

// A real subspace of C^n, held as an orthonormal basis of its image in R^{2n}.
struct RealSubspace {
    Eigen::Index n = 0; // complex dimension of the ambient space
    RMat basis;         // 2n x k, orthonormal columns
    double tol = kSpanTol;

    Eigen::Index dim() const { return basis.cols(); }

    RMat projector() const { return basis * basis.transpose(); }

    // Distance of embed(z) from the subspace.
    double distance(const CVec& z) const {
        RVec r = embed(z);
        return (r - basis * (basis.transpose() * r)).norm();
    }

    bool contains(const CVec& z, double eps = 1e-10) const {
        return distance(z) <= eps * (1.0 + embed(z).norm());
    }

    // Columns as complex vectors.
    std::vector<CVec> vectors() const {
        std::vector<CVec> out;
        out.reserve(static_cast<size_t>(dim()));
        for (Eigen::Index c = 0; c < dim(); ++c) out.push_back(unembed(basis.col(c)));
        return out;
    }

    static RealSubspace zero(Eigen::Index n, double tol = kSpanTol) {
        return RealSubspace{n, RMat::Zero(2 * n, 0), tol};
    }

    static RealSubspace full(Eigen::Index n, double tol = kSpanTol) {
        return RealSubspace{n, RMat::Identity(2 * n, 2 * n), tol};
    }
};

namespace detail {

// Orthonormal basis of the column span of `cols` (2n x k, real), rank decided
// by sigma_i > max(tol * sigma_max, abs_floor). The absolute floor matters
// when the input is a residual set that may consist of roundoff noise only.
inline RMat orthonormal_span(const RMat& cols, double tol, double abs_floor = 0.0) {
    if (cols.cols() == 0) return RMat::Zero(cols.rows(), 0);
    Eigen::JacobiSVD<RMat> svd(cols, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * smax && sv(i) > abs_floor && sv(i) > 0.0) ++rank;
    return svd.matrixU().leftCols(rank);
}

// Orthonormal basis of the orthogonal complement of the span of `basis`
// (assumed to have orthonormal columns) inside R^{rows}.
inline RMat orthonormal_complement(const RMat& basis) {
    const Eigen::Index rows = basis.rows();
    if (basis.cols() == 0) return RMat::Identity(rows, rows);
    Eigen::JacobiSVD<RMat> svd(basis, Eigen::ComputeFullU);
    return svd.matrixU().rightCols(rows - basis.cols());
}

} // namespace detail

// Real span of complex vectors. Empty input yields the zero subspace.
inline RealSubspace real_span(const std::vector<CVec>& vectors, Eigen::Index n,
                              double tol = kSpanTol) {
    RMat cols(2 * n, static_cast<Eigen::Index>(vectors.size()));
    for (size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != n) throw std::invalid_argument("real_span: dimension mismatch");
        cols.col(static_cast<Eigen::Index>(i)) = embed(vectors[i]);
    }
    return RealSubspace{n, detail::orthonormal_span(cols, tol), tol};
}

// Real span from raw embedded columns (2n x k).
inline RealSubspace real_span_cols(const RMat& cols, Eigen::Index n, double tol = kSpanTol) {
    if (cols.rows() != 2 * n) throw std::invalid_argument("real_span_cols: bad row count");
    return RealSubspace{n, detail::orthonormal_span(cols, tol), tol};
}

inline RealSubspace orth_complement(const RealSubspace& s) {
    return RealSubspace{s.n, detail::orthonormal_complement(s.basis), s.tol};
}

// Union of subspaces as a span.
inline RealSubspace join(const RealSubspace& a, const RealSubspace& b) {
    if (a.n != b.n) throw std::invalid_argument("join: ambient mismatch");
    RMat cols(2 * a.n, a.dim() + b.dim());
    cols << a.basis, b.basis;
    return real_span_cols(cols, a.n, std::min(a.tol, b.tol));
}

// A cap B = (A^perp + B^perp)^perp.
inline RealSubspace intersect(const RealSubspace& a, const RealSubspace& b) {
    if (a.n != b.n) throw std::invalid_argument("intersect: ambient mismatch");
    return orth_complement(join(orth_complement(a), orth_complement(b)));
}

// Symplectic complement S' = { z : Im<z,s> = 0 for all s in S }, computed as
// the real-orthogonal complement of J S.
inline RealSubspace symplectic_complement(const RealSubspace& s) {
    RMat js = mult_i_matrix(s.n) * s.basis; // columns stay orthonormal
    return RealSubspace{s.n, detail::orthonormal_complement(js), s.tol};
}

// sin of the largest principal angle between equal-dimensional subspaces.
inline double subspace_gap(const RealSubspace& a, const RealSubspace& b) {
    if (a.dim() == 0 && b.dim() == 0) return 0.0;
    RMat res = a.basis - b.basis * (b.basis.transpose() * a.basis);
    RMat res2 = b.basis - a.basis * (a.basis.transpose() * b.basis);
    double g1 = res.cols() ? res.jacobiSvd().singularValues()(0) : 0.0;
    double g2 = res2.cols() ? res2.jacobiSvd().singularValues()(0) : 0.0;
    return std::max(g1, g2);
}

inline bool subspace_equal(const RealSubspace& a, const RealSubspace& b,
                           double tol = kSubspaceEqTol) {
    if (a.n != b.n) return false;
    if (a.dim() != b.dim()) return false;
    return subspace_gap(a, b) < tol;
}

// A real-linear (not necessarily complex-linear) map on C^n, stored as its
// 2n x 2n matrix in embedded coordinates.
struct RealLinearMap {
    Eigen::Index n = 0;
    RMat mat; // 2n x 2n

    CVec operator()(const CVec& z) const { return unembed(mat * embed(z)); }
    RVec apply_embedded(const RVec& r) const { return mat * r; }
};

// Real matrix of z -> A z + B conj(z).
inline RealLinearMap real_linear_map(const CMat& a, const CMat& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("real_linear_map: need square matrices of equal size");
    const Eigen::Index n = a.rows();
    RMat ar = a.real(), ai = a.imag(), br = b.real(), bi = b.imag();
    RMat m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = ar + br;
    m.topRightCorner(n, n) = bi - ai;
    m.bottomLeftCorner(n, n) = ai + bi;
    m.bottomRightCorner(n, n) = ar - br;
    return RealLinearMap{n, std::move(m)};
}

// Real matrix of a complex-linear map z -> A z.
inline RealLinearMap real_linear_map(const CMat& a) {
    return real_linear_map(a, CMat::Zero(a.rows(), a.cols()));
}

// Null space of a real matrix, rank decided relative to sigma_max. When the
// matrix is a projected/composed operator that may be numerically zero, pass
// the scale of the unprojected operator as `scale_hint` so noise singular
// values are not mistaken for rank.
inline RealSubspace null_space(const RMat& m, Eigen::Index n, double tol = kSpanTol,
                               double scale_hint = 0.0) {
    if (m.cols() != 2 * n) throw std::invalid_argument("null_space: bad column count");
    Eigen::JacobiSVD<RMat> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double cut = std::max(tol * smax, tol * scale_hint);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut && sv(i) > 0.0) ++rank;
    return RealSubspace{n, svd.matrixV().rightCols(2 * n - rank), tol};
}

} // namespace gqms
