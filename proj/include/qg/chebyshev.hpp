#pragma once

#include <stdexcept>

#include "qg/types.hpp"

namespace qg {

// Chebyshev-Tau workhorse on the channel cross-section y in (0, pi).
// Expansions use T_j(xi) with the linear map y = pi*(xi+1)/2, so every
// y-derivative carries a factor 2/pi relative to the xi-recurrences.
// Gauss-Lobatto points are ordered xi_i = cos(pi*i/(N-1)), i.e. grid index 0
// sits at y = pi and index N-1 at y = 0.

Vec gaussLobatto(int n);                 // xi grid, length n
Vec gaussLobattoY(int n);                // mapped to y in [0, pi]

// d/dy in coefficient space (recurrence + chain rule).
Vec ddy(const Vec& a);
CVec ddy(const CVec& a);

// Antiderivative in y; result has one more coefficient, constant chosen so the
// value at y = 0 matches `valueAtY0`.
Vec antiderivativeY(const Vec& a, Real valueAtY0);

// Series value at the two walls.
Real evalAtXi1(const Vec& a);
Real evalAtXiMinus1(const Vec& a);
Complex evalAtXi1(const CVec& a);
Complex evalAtXiMinus1(const CVec& a);

// Clenshaw evaluation at arbitrary xi in [-1, 1].
Real evalAtXi(const Vec& a, Real xi);
Complex evalAtXi(const CVec& a, Real xi);

// Integral over y in (0, pi) of the truncated series (exact).
Real integrateY(const Vec& a);
Complex integrateY(const CVec& a);

// Chebyshev coefficients of common profiles, length n.
Vec coeffsOfConstant(Real c, int n);
Vec coeffsOfSinY(int n);   // sin y on (0, pi)
Vec coeffsOfCosY(int n);   // cos y

// Sample an arbitrary smooth profile f(y) on the Gauss-Lobatto grid and
// transform to coefficients.
template <typename F>
Vec coeffsOfFunction(F&& f, int n);

Vec resizeCoeffs(const Vec& a, int n);
CVec resizeCoeffs(const CVec& a, int n);

// Dense transform pair and coefficient-space operators for one resolution.
// synth maps coefficients to Gauss-Lobatto values, analysis is its exact
// inverse (DCT-I normalisation), so analysis * diag(g) * synth is the aliased
// product operator the pseudo-spectral evaluation realises.
class ChebOps {
  public:
    explicit ChebOps(int n);

    int n() const { return n_; }
    const Mat& synth() const { return synth_; }
    const Mat& analysis() const { return analysis_; }
    const Mat& dy() const { return dy_; }          // d/dy as a matrix
    const Mat& gram() const { return gram_; }      // int_0^pi T_i T_j dy

    Vec toValues(const Vec& coeffs) const { return synth_ * coeffs; }
    Vec toCoeffs(const Vec& values) const { return analysis_ * values; }
    CVec toValues(const CVec& c) const;
    CVec toCoeffs(const CVec& v) const;

    // Aliased multiplication operator for the profile with given coefficients.
    Mat productMatrix(const Vec& gCoeffs) const;
    CMat productMatrix(const CVec& gCoeffs) const;

  private:
    int n_;
    Mat synth_, analysis_, dy_, gram_;
};

// Process-wide cache; entries live forever.
const ChebOps& chebOps(int n);

// Quadrature of int_0^pi a(y) b(y) dy through the Gram matrix.
Real gramProduct(const Vec& a, const Vec& b);
Complex gramProduct(const CVec& a, const CVec& b);

template <typename F>
Vec coeffsOfFunction(F&& f, int n) {
    Vec y = gaussLobattoY(n);
    Vec values(n);
    for (int i = 0; i < n; ++i)
        values[i] = f(y[i]);
    return chebOps(n).toCoeffs(values);
}

}  // namespace qg
