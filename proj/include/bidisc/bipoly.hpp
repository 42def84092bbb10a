#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "bidisc/errors.hpp"

namespace bidisc {

// Dense bivariate polynomial with complex coefficients.  coeffs(i,j) is the
// coefficient of z1^i z2^j; the grid shape is (n+1) x (m+1) for bidegree
// (n,m).  The grid shape is kept as constructed even when leading entries
// vanish, so reflection is an exact involution; trim() tightens on demand.
template <typename Scalar = double>
class BiPolynomial {
  public:
    using Complex = std::complex<Scalar>;
    using CoeffGrid =
        Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

    BiPolynomial() : coeffs_(CoeffGrid::Zero(1, 1)) {}

    explicit BiPolynomial(CoeffGrid coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.rows() < 1 || coeffs_.cols() < 1)
            coeffs_ = CoeffGrid::Zero(1, 1);
    }

    static BiPolynomial constant(Complex c) {
        CoeffGrid g(1, 1);
        g(0, 0) = c;
        return BiPolynomial(std::move(g));
    }

    const CoeffGrid& coeffs() const { return coeffs_; }
    Eigen::Index degree1() const { return coeffs_.rows() - 1; }
    Eigen::Index degree2() const { return coeffs_.cols() - 1; }

    bool is_zero(Scalar tol = Scalar(0)) const {
        return coeffs_.cwiseAbs().maxCoeff() <= tol;
    }

    // Double Horner evaluation, exact to floating precision.
    Complex eval(Complex z1, Complex z2) const {
        const Eigen::Index n = coeffs_.rows(), m = coeffs_.cols();
        Complex acc{0, 0};
        for (Eigen::Index i = n; i-- > 0;) {
            Complex row{0, 0};
            for (Eigen::Index j = m; j-- > 0;) row = row * z2 + coeffs_(i, j);
            acc = acc * z1 + row;
        }
        return acc;
    }

    BiPolynomial partial1() const {
        if (coeffs_.rows() == 1) return BiPolynomial();
        CoeffGrid g(coeffs_.rows() - 1, coeffs_.cols());
        for (Eigen::Index i = 1; i < coeffs_.rows(); ++i)
            g.row(i - 1) = Scalar(i) * coeffs_.row(i);
        return BiPolynomial(std::move(g));
    }

    BiPolynomial partial2() const {
        if (coeffs_.cols() == 1) return BiPolynomial();
        CoeffGrid g(coeffs_.rows(), coeffs_.cols() - 1);
        for (Eigen::Index j = 1; j < coeffs_.cols(); ++j)
            g.col(j - 1) = Scalar(j) * coeffs_.col(j);
        return BiPolynomial(std::move(g));
    }

    // Drops vanishing leading rows/columns so the stored bidegree is tight.
    BiPolynomial trim(Scalar tol = Scalar(0)) const {
        Eigen::Index n = coeffs_.rows(), m = coeffs_.cols();
        while (n > 1 && coeffs_.row(n - 1).cwiseAbs().maxCoeff() <= tol) --n;
        while (m > 1 &&
               coeffs_.topRows(n).col(m - 1).cwiseAbs().maxCoeff() <= tol)
            --m;
        return BiPolynomial(coeffs_.topLeftCorner(n, m).eval());
    }

    friend BiPolynomial operator*(Complex c, const BiPolynomial& p) {
        return BiPolynomial((c * p.coeffs_).eval());
    }

    friend BiPolynomial operator-(const BiPolynomial& a,
                                  const BiPolynomial& b) {
        const Eigen::Index n =
            std::max(a.coeffs_.rows(), b.coeffs_.rows());
        const Eigen::Index m =
            std::max(a.coeffs_.cols(), b.coeffs_.cols());
        CoeffGrid g = CoeffGrid::Zero(n, m);
        g.topLeftCorner(a.coeffs_.rows(), a.coeffs_.cols()) += a.coeffs_;
        g.topLeftCorner(b.coeffs_.rows(), b.coeffs_.cols()) -= b.coeffs_;
        return BiPolynomial(std::move(g));
    }

  private:
    CoeffGrid coeffs_;
};

using BiPoly = BiPolynomial<double>;

// Reflection z1^n z2^m conj(p(1/conj(z1), 1/conj(z2))): coefficient-wise
// conjugate-reverse in both indices on the stored grid.
template <typename Scalar>
BiPolynomial<Scalar> reflect(const BiPolynomial<Scalar>& p) {
    const auto& c = p.coeffs();
    typename BiPolynomial<Scalar>::CoeffGrid g(c.rows(), c.cols());
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index j = 0; j < c.cols(); ++j)
            g(i, j) = std::conj(c(c.rows() - 1 - i, c.cols() - 1 - j));
    return BiPolynomial<Scalar>(std::move(g));
}

template <typename Scalar>
std::complex<Scalar> eval_poly(const BiPolynomial<Scalar>& p,
                               std::complex<Scalar> z1,
                               std::complex<Scalar> z2) {
    return p.eval(z1, z2);
}

// P_zeta = reflect(p) - zeta * p, the numerator of phi - zeta.
template <typename Scalar>
BiPolynomial<Scalar> build_pzeta(const BiPolynomial<Scalar>& p,
                                 std::complex<Scalar> zeta) {
    if (std::abs(std::abs(zeta) - Scalar(1)) > Scalar(1e-12))
        throw NonUnimodularTarget();
    return reflect(p) - zeta * p;
}

}  // namespace bidisc
