#include "qg/tau.hpp"

#include <cmath>

namespace qg {

TauSolver::TauSolver(int n, Complex a, Complex b, Parity parity)
    : n_(n), a_(a), b_(b), parity_(parity) {
    for (int j = 0; j < n; ++j) {
        if (parity == Parity::Even && j % 2 != 0)
            continue;
        if (parity == Parity::Odd && j % 2 == 0)
            continue;
        idx_.push_back(j);
    }
    const int na = activeSize();
    const Mat& dy = chebOps(n).dy();
    Mat d2 = dy * dy;

    CMat A(na, na);
    for (int r = 0; r < na; ++r)
        for (int c = 0; c < na; ++c)
            A(r, c) = a_ * d2(idx_[r], idx_[c]) + (idx_[r] == idx_[c] ? b_ : Complex(0));
    op_ = A;

    // tau rows: both walls in the unrestricted case, one in a parity class
    const int nbc = (parity == Parity::None) ? 2 : 1;
    for (int r = na - nbc; r < na; ++r)
        for (int c = 0; c < na; ++c) {
            int j = idx_[c];
            bool atTop = (r == na - nbc);  // xi = +1 first, then xi = -1
            Real tj = atTop ? 1.0 : ((j % 2 == 0) ? 1.0 : -1.0);
            A(r, c) = tj;
        }

    lu_.compute(A);
    Vec d = lu_.matrixLU().diagonal().cwiseAbs();
    if (d.minCoeff() <= 1e-13 * d.maxCoeff())
        throw SingularTauOperator("tau_solve: operator a*D^2 + b is singular on the Dirichlet subspace");
}

CVec TauSolver::solve(const CVec& rhs) const {
    const int na = activeSize();
    const int nbc = (parity_ == Parity::None) ? 2 : 1;
    CVec rActive(na);
    for (int i = 0; i < na; ++i)
        rActive[i] = rhs[idx_[i]];
    CVec rTau = rActive;
    rTau.tail(nbc).setZero();
    CVec xa = lu_.solve(rTau);

    // one pass of iterative refinement on the interior rows; the zeroed tau
    // entries keep the wall values exact
    CVec resid = op_ * xa - rActive;
    resid.tail(nbc).setZero();
    xa -= lu_.solve(resid);

    CVec x = CVec::Zero(n_);
    for (int i = 0; i < na; ++i)
        x[idx_[i]] = xa[i];
    return x;
}

Vec TauSolver::solve(const Vec& rhs) const {
    return solve(CVec(rhs.cast<Complex>())).real();
}

}  // namespace qg
