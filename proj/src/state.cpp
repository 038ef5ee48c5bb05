#include "qg/state.hpp"

#include <cmath>
#include <stdexcept>

namespace qg {

SpectralState::SpectralState(int M, int N, Symmetry sym) : M_(M), N_(N), sym_(sym) {
    if (M < 1 || N < 2)
        throw std::invalid_argument("SpectralState: need M >= 1, N >= 2");
    U0_ = Vec::Zero(N);
    V_.assign(std::max(0, M - 1), CVec::Zero(N));
}

bool SpectralState::allFinite() const {
    if (!U0_.allFinite())
        return false;
    for (const auto& v : V_)
        if (!v.allFinite())
            return false;
    return true;
}

Real SpectralState::bcResidual() const {
    Real r = 0;
    for (const auto& v : V_) {
        r = std::max(r, std::abs(evalAtXi1(v)));
        r = std::max(r, std::abs(evalAtXiMinus1(v)));
    }
    return r;
}

SpectralState SpectralState::resized(int M, int N) const {
    SpectralState out(M, N, sym_);
    out.U0_ = resizeCoeffs(U0_, N);
    for (int m = 1; m < std::min(M, M_); ++m)
        out.Vhat(m) = resizeCoeffs(Vhat(m), N);
    return out;
}

SpectralState SpectralState::zero(int M, int N, Symmetry sym) {
    return SpectralState(M, N, sym);
}

SpectralState SpectralState::basicFlow(const ChannelParams& p, Real F_ave, int M, int N,
                                       Symmetry sym) {
    SpectralState s(M, N, sym);
    s.U0hat() = p.forcingCoeffs(N) / p.k;
    s.U0hat()[0] += F_ave / p.k;
    return s;
}

Parity vParity(int m) {
    if (m % 2 != 0)
        return Parity::None;
    return (m % 4 == 2) ? Parity::Even : Parity::Odd;
}

namespace {

void zeroParity(Vec& a, Parity keep) {
    for (int j = 0; j < a.size(); ++j)
        if ((j % 2 == 0) != (keep == Parity::Even))
            a[j] = 0.0;
}

void zeroParity(CVec& a, Parity keep) {
    for (int j = 0; j < a.size(); ++j)
        if ((j % 2 == 0) != (keep == Parity::Even))
            a[j] = Complex(0, 0);
}

}  // namespace

SpectralState symmetryProject(const SpectralState& s, Symmetry target) {
    SpectralState out = s;
    out.setSymmetry(target);
    if (target == Symmetry::Full)
        return out;
    for (int m = 1; m < s.M(); m += 2)
        out.Vhat(m).setZero();
    if (target == Symmetry::Even)
        return out;
    zeroParity(out.U0hat(), Parity::Even);
    for (int m = 2; m < s.M(); m += 2)
        zeroParity(out.Vhat(m), vParity(m));
    return out;
}

Real symmetryResidual(const SpectralState& s, Symmetry target) {
    SpectralState proj = symmetryProject(s, target);
    SpectralState diff = s;
    diff.U0hat() -= proj.U0hat();
    for (int m = 1; m < s.M(); ++m)
        diff.Vhat(m) -= proj.Vhat(m);
    return std::sqrt(std::max(0.0, computeEave(diff)));
}

Real computeUave(const SpectralState& s) { return integrateY(s.U0hat()) / pi; }

Real computeEave(const SpectralState& s) {
    Real e = gramProduct(s.U0hat(), s.U0hat());
    for (int m = 1; m < s.M(); ++m) {
        const CVec& v = s.Vhat(m);
        CVec dv = ddy(v);
        e += 2.0 * (gramProduct(dv, dv.conjugate()).real() / Real(m * m) +
                    gramProduct(v, v.conjugate()).real());
    }
    return e / (2.0 * pi);
}

Real computeHVave(const SpectralState& s, const std::map<int, CVec>& hModes) {
    Real drag = 0;
    for (const auto& [m, h] : hModes) {
        if (m < 1 || m >= s.M())
            continue;
        drag += 2.0 * gramProduct(h.conjugate(), s.Vhat(m)).real();
    }
    return drag / pi;
}

Real meanFlowIntegral(const SpectralState& s) { return 2.0 * pi * integrateY(s.U0hat()); }

Real boundaryIntegral(const SpectralState& s) {
    return 2.0 * pi * (evalAtXiMinus1(s.U0hat()) - evalAtXi1(s.U0hat()));
}

namespace {

// T_j(xi_i) on an arbitrary Gauss-Lobatto grid of ny points, ncol columns.
Mat evalMatrix(int ny, int ncol) {
    Vec xi = gaussLobatto(ny);
    Mat T(ny, ncol);
    for (int i = 0; i < ny; ++i)
        for (int j = 0; j < ncol; ++j)
            T(i, j) = std::cos(j * std::acos(std::clamp(xi[i], -1.0, 1.0)));
    return T;
}

// Accumulate 2*Re(profile_m(y) e^{imx}) onto the grid.
void addMode(Mat& field, const CVec& profileValues, int m, const Vec& x) {
    const int ny = static_cast<int>(field.rows());
    const int nx = static_cast<int>(field.cols());
    for (int j = 0; j < nx; ++j) {
        Complex phase = std::polar(1.0, m * x[j]);
        for (int i = 0; i < ny; ++i)
            field(i, j) += 2.0 * (profileValues[i] * phase).real();
    }
}

PhysicalField makeField(int Nx, int Ny) {
    PhysicalField f;
    f.Nx = Nx;
    f.Ny = Ny;
    f.x.resize(Nx);
    for (int j = 0; j < Nx; ++j)
        f.x[j] = 2.0 * pi * j / Nx;
    f.y = gaussLobattoY(Ny);
    f.values = Mat::Zero(Ny, Nx);
    return f;
}

}  // namespace

PhysicalFields evalPhysical(const SpectralState& s, int Nx, int Ny) {
    if (Nx < 2 * s.M())
        throw std::invalid_argument("evalPhysical: need Nx >= 2M");
    PhysicalFields out{makeField(Nx, Ny), makeField(Nx, Ny), makeField(Nx, Ny),
                       makeField(Nx, Ny)};
    const Mat T = evalMatrix(Ny, s.N() + 1);
    auto values = [&](const Vec& c) -> Vec { return T.leftCols(c.size()) * c; };
    auto cvalues = [&](const CVec& c) -> CVec {
        return values(Vec(c.real())).cast<Complex>() +
               Complex(0, 1) * values(Vec(c.imag())).cast<Complex>();
    };

    // mean parts
    Vec psi0 = antiderivativeY(Vec(-s.U0hat()), 0.0);
    out.U.values.colwise() += values(s.U0hat());
    out.psi.values.colwise() += values(psi0);
    out.zeta.values.colwise() += values(Vec(-ddy(s.U0hat())));

    for (int m = 1; m < s.M(); ++m) {
        const CVec& v = s.Vhat(m);
        if (v.cwiseAbs().maxCoeff() == 0.0)
            continue;
        CVec u = (I / Real(m)) * ddy(v);
        CVec psim = (-I / Real(m)) * v;
        CVec d2v = ddy(ddy(v));
        CVec zetam = (-I / Real(m)) * (d2v - Real(m * m) * v);
        addMode(out.U.values, cvalues(u), m, out.U.x);
        addMode(out.V.values, cvalues(v), m, out.V.x);
        addMode(out.psi.values, cvalues(psim), m, out.psi.x);
        addMode(out.zeta.values, cvalues(zetam), m, out.zeta.x);
    }
    return out;
}

PhysicalField evalTopography(const Topography& topo, int M, int N, int Nx, int Ny) {
    PhysicalField f = makeField(Nx, Ny);
    const Mat T = evalMatrix(Ny, N);
    for (const auto& [m, h] : topographyModes(topo, M, N)) {
        CVec hv = (T * h.real()).cast<Complex>() + Complex(0, 1) * (T * h.imag()).cast<Complex>();
        if (m == 0)
            f.values.colwise() += Vec(hv.real());
        else
            addMode(f.values, hv, m, f.x);
    }
    return f;
}

SpectralState randomPerturbation(int M, int N, Symmetry sym, std::mt19937_64& rng,
                                 const PerturbationOptions& opt) {
    std::normal_distribution<Real> gauss(0.0, 1.0);
    SpectralState s(M, N, Symmetry::Full);
    for (int j = 0; j < N; ++j)
        s.U0hat()[j] = gauss(rng) * std::exp(-opt.decay * j);
    for (int m = 1; m < M; ++m) {
        CVec& v = s.Vhat(m);
        Real w = std::exp(-opt.decay * m);
        for (int j = 0; j < N; ++j)
            v[j] = Complex(gauss(rng), gauss(rng)) * std::exp(-opt.decay * j) * w;
        // zero both wall values exactly: even and odd partial sums vanish
        Complex se = 0, so = 0;
        for (int j = 0; j < N; ++j)
            ((j % 2 == 0) ? se : so) += v[j];
        int je = (N - 1) % 2 == 0 ? N - 1 : N - 2;
        int jo = (N - 1) % 2 == 1 ? N - 1 : N - 2;
        v[je] -= se;
        v[jo] -= so;
    }
    if (opt.equalWalls) {
        Real so = 0;
        for (int j = 1; j < N; j += 2)
            so += s.U0hat()[j];
        int jo = (N - 1) % 2 == 1 ? N - 1 : N - 2;
        s.U0hat()[jo] -= so;
    }
    if (opt.zeroMean)
        s.U0hat()[0] -= computeUave(s);
    s = symmetryProject(s, sym);
    Real e = std::sqrt(std::max(computeEave(s), 1e-300));
    s.U0hat() *= opt.amplitude / e;
    for (int m = 1; m < M; ++m)
        s.Vhat(m) *= opt.amplitude / e;
    return s;
}

}  // namespace qg
