#include "qg/chebyshev.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace qg {

Vec gaussLobatto(int n) {
    if (n < 2)
        throw std::invalid_argument("gaussLobatto: need n >= 2");
    Vec xi(n);
    for (int i = 0; i < n; ++i)
        xi[i] = std::cos(pi * i / (n - 1));
    return xi;
}

Vec gaussLobattoY(int n) {
    Vec xi = gaussLobatto(n);
    return (pi / 2) * (xi.array() + 1.0);
}

namespace {

template <typename V>
V ddyImpl(const V& a) {
    const int n = static_cast<int>(a.size());
    V b = V::Zero(n);
    if (n < 2)
        return b;
    b[n - 2] = 2.0 * (n - 1) * a[n - 1];
    for (int k = n - 3; k >= 1; --k)
        b[k] = b[k + 2] + 2.0 * (k + 1) * a[k + 1];
    b[0] = a[1];
    if (n > 2)
        b[0] += 0.5 * b[2];
    return b * (2.0 / pi);
}

template <typename V>
auto evalXi1Impl(const V& a) {
    typename V::Scalar s = 0;
    for (int j = 0; j < a.size(); ++j)
        s += a[j];
    return s;
}

template <typename V>
auto evalXiM1Impl(const V& a) {
    typename V::Scalar s = 0;
    for (int j = 0; j < a.size(); ++j)
        s += (j % 2 == 0) ? a[j] : -a[j];
    return s;
}

template <typename V>
auto clenshaw(const V& a, Real xi) {
    using S = typename V::Scalar;
    S bk1 = 0, bk2 = 0;
    for (int j = static_cast<int>(a.size()) - 1; j >= 1; --j) {
        S bk = a[j] + 2.0 * xi * bk1 - bk2;
        bk2 = bk1;
        bk1 = bk;
    }
    return a[0] + xi * bk1 - bk2;
}

template <typename V>
auto integrateYImpl(const V& a) {
    typename V::Scalar s = 0;
    for (int j = 0; j < a.size(); j += 2)
        s += a[j] * (2.0 / (1.0 - Real(j) * Real(j)));
    return (pi / 2) * s;
}

}  // namespace

Vec ddy(const Vec& a) { return ddyImpl(a); }
CVec ddy(const CVec& a) { return ddyImpl(a); }

Vec antiderivativeY(const Vec& a, Real valueAtY0) {
    const int n = static_cast<int>(a.size());
    Vec A = Vec::Zero(n + 1);
    auto at = [&](int k) { return (k >= 0 && k < n) ? a[k] : 0.0; };
    if (n >= 1)
        A[1] = at(0) - 0.5 * at(2);
    for (int k = 2; k <= n; ++k)
        A[k] = (at(k - 1) - at(k + 1)) / (2.0 * k);
    A *= pi / 2;  // dy = (pi/2) dxi
    A[0] = valueAtY0 - evalXiM1Impl(A);
    return A;
}

Real evalAtXi1(const Vec& a) { return evalXi1Impl(a); }
Real evalAtXiMinus1(const Vec& a) { return evalXiM1Impl(a); }
Complex evalAtXi1(const CVec& a) { return evalXi1Impl(a); }
Complex evalAtXiMinus1(const CVec& a) { return evalXiM1Impl(a); }
Real evalAtXi(const Vec& a, Real xi) { return clenshaw(a, xi); }
Complex evalAtXi(const CVec& a, Real xi) { return clenshaw(a, xi); }
Real integrateY(const Vec& a) { return integrateYImpl(a); }
Complex integrateY(const CVec& a) { return integrateYImpl(a); }

Vec coeffsOfConstant(Real c, int n) {
    Vec a = Vec::Zero(n);
    a[0] = c;
    return a;
}

Vec coeffsOfSinY(int n) {
    // sin y = sin(pi(xi+1)/2) = cos(pi xi/2)
    return coeffsOfFunction([](Real y) { return std::sin(y); }, n);
}

Vec coeffsOfCosY(int n) {
    return coeffsOfFunction([](Real y) { return std::cos(y); }, n);
}

Vec resizeCoeffs(const Vec& a, int n) {
    Vec b = Vec::Zero(n);
    b.head(std::min<int>(n, static_cast<int>(a.size()))) =
        a.head(std::min<int>(n, static_cast<int>(a.size())));
    return b;
}

CVec resizeCoeffs(const CVec& a, int n) {
    CVec b = CVec::Zero(n);
    b.head(std::min<int>(n, static_cast<int>(a.size()))) =
        a.head(std::min<int>(n, static_cast<int>(a.size())));
    return b;
}

ChebOps::ChebOps(int n) : n_(n) {
    if (n < 2)
        throw std::invalid_argument("ChebOps: need n >= 2");
    synth_.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            synth_(i, j) = std::cos(pi * i * j / (n - 1));

    // Exact DCT-I inverse: a_j = w_j * sum_i c_i cos(pi i j/(n-1)) s_i,
    // with halved first/last quadrature weights and halved end coefficients.
    analysis_.resize(n, n);
    for (int j = 0; j < n; ++j) {
        Real wj = 2.0 / (n - 1);
        if (j == 0 || j == n - 1)
            wj *= 0.5;
        for (int i = 0; i < n; ++i) {
            Real ci = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            analysis_(j, i) = wj * ci * std::cos(pi * i * j / (n - 1));
        }
    }

    dy_.resize(n, n);
    for (int j = 0; j < n; ++j)
        dy_.col(j) = ddy(Vec::Unit(n, j));

    gram_.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if ((i + j) % 2 != 0) {
                gram_(i, j) = 0.0;
                continue;
            }
            Real s = 1.0 / (1.0 - Real(i + j) * Real(i + j)) +
                     1.0 / (1.0 - Real(i - j) * Real(i - j));
            gram_(i, j) = (pi / 2) * s;
        }
}

CVec ChebOps::toValues(const CVec& c) const {
    return synth_ * c.real() + Complex(0, 1) * (synth_ * c.imag());
}

CVec ChebOps::toCoeffs(const CVec& v) const {
    return analysis_ * v.real() + Complex(0, 1) * (analysis_ * v.imag());
}

Mat ChebOps::productMatrix(const Vec& gCoeffs) const {
    Vec gv = synth_ * gCoeffs;
    return analysis_ * gv.asDiagonal() * synth_;
}

CMat ChebOps::productMatrix(const CVec& gCoeffs) const {
    return productMatrix(Vec(gCoeffs.real())).cast<Complex>() +
           Complex(0, 1) * productMatrix(Vec(gCoeffs.imag())).cast<Complex>();
}

const ChebOps& chebOps(int n) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<ChebOps>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[n];
    if (!slot)
        slot = std::make_unique<ChebOps>(n);
    return *slot;
}

Real gramProduct(const Vec& a, const Vec& b) {
    const int n = static_cast<int>(std::max(a.size(), b.size()));
    const Mat& Q = chebOps(n).gram();
    return resizeCoeffs(a, n).dot(Q * resizeCoeffs(b, n));
}

Complex gramProduct(const CVec& a, const CVec& b) {
    const int n = static_cast<int>(std::max(a.size(), b.size()));
    const Mat& Q = chebOps(n).gram();
    CVec bb = resizeCoeffs(b, n);
    CVec Qb = (Q * bb.real()).cast<Complex>() + Complex(0, 1) * (Q * bb.imag()).cast<Complex>();
    return resizeCoeffs(a, n).transpose() * Qb;
}

}  // namespace qg
