#include "qg/lowdim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qg {

namespace {

const Real cA = 8.0 * std::sqrt(2.0) / (3.0 * pi);    // topographic coupling in psi_A
const Real cI = 64.0 * std::sqrt(2.0) / (15.0 * pi);  // triad interaction
const Real cH = 8.0 * std::sqrt(2.0) / (15.0 * pi);   // topographic coupling in psi_L

}  // namespace

std::array<Real, 3> lowdimRhs(const LowDimState& s, const LowDimParams& p) {
    const Real b5 = 2.0 * p.beta / 5.0;
    return {
        cA * p.h0 * s.psi_L - p.k * (s.psi_A - p.psi_A0),
        -cI * s.psi_A * s.psi_L + b5 * s.psi_L - p.k * s.psi_K,
        cI * s.psi_A * s.psi_K - cH * p.h0 * s.psi_A - b5 * s.psi_K - p.k * s.psi_L,
    };
}

std::vector<Real> cubicRealRoots(Real c3, Real c2, Real c1, Real c0) {
    if (c3 == 0.0) {
        if (c2 == 0.0) {
            if (c1 == 0.0)
                return {};
            return {-c0 / c1};
        }
        Real disc = c1 * c1 - 4 * c2 * c0;
        if (disc < 0)
            return {};
        Real sq = std::sqrt(disc);
        return {(-c1 + sq) / (2 * c2), (-c1 - sq) / (2 * c2)};
    }
    // depressed form t^3 + pt + q with x = t - c2/(3 c3)
    Real b = c2 / c3, c = c1 / c3, d = c0 / c3;
    Real pp = c - b * b / 3.0;
    Real qq = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    Real shift = -b / 3.0;
    Real disc = -4.0 * pp * pp * pp - 27.0 * qq * qq;
    std::vector<Real> roots;
    if (disc > 0) {
        // three real roots, trigonometric form
        Real r = 2.0 * std::sqrt(-pp / 3.0);
        Real arg = std::clamp(3.0 * qq / (pp * r), -1.0, 1.0);
        Real phi = std::acos(arg);
        for (int j = 0; j < 3; ++j)
            roots.push_back(r * std::cos((phi - 2.0 * pi * j) / 3.0) + shift);
    } else {
        Real halfq = qq / 2.0;
        Real s = std::sqrt(std::max(0.0, halfq * halfq + pp * pp * pp / 27.0));
        Real u = std::cbrt(-halfq + s);
        Real v = std::cbrt(-halfq - s);
        roots.push_back(u + v + shift);
        if (disc == 0 && (u + v) != 0.0)
            roots.push_back(-(u + v) / 2.0 + shift);
    }
    return roots;
}

namespace {

LowDimState reconstructFromPsiA(Real psiA, const LowDimParams& p) {
    const Real b5 = 2.0 * p.beta / 5.0;
    LowDimState s;
    s.psi_A = psiA;
    s.psi_L = p.k * (psiA - p.psi_A0) / (cA * p.h0);
    s.psi_K = s.psi_L * (b5 - cI * psiA) / p.k;
    return s;
}

bool newtonPolish(LowDimState& s, const LowDimParams& p) {
    for (int it = 0; it < 50; ++it) {
        auto r = lowdimRhs(s, p);
        Real rn = std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
        if (rn < 1e-13)
            return true;
        const Real b5 = 2.0 * p.beta / 5.0;
        Eigen::Matrix3d J;
        J << -p.k, 0.0, cA * p.h0,
            -cI * s.psi_L, -p.k, -cI * s.psi_A + b5,
            cI * s.psi_K - cH * p.h0, cI * s.psi_A - b5, -p.k;
        Eigen::Vector3d dv = J.partialPivLu().solve(Eigen::Vector3d(-r[0], -r[1], -r[2]));
        s.psi_A += dv[0];
        s.psi_K += dv[1];
        s.psi_L += dv[2];
    }
    auto r = lowdimRhs(s, p);
    return std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])}) < 1e-12;
}

}  // namespace

std::vector<LowDimState> lowdimEquilibria(const LowDimParams& p) {
    if (!(p.k > 0))
        throw std::invalid_argument("LowDimParams: k must be > 0");
    std::vector<LowDimState> out;
    if (p.h0 == 0.0) {
        out.push_back({p.psi_A0, 0.0, 0.0});
        return out;
    }
    const Real b5 = 2.0 * p.beta / 5.0;
    // Eliminating psi_L = k(psi_A - psi_A0)/(cA h0) and psi_K yields
    //   w (psi_A - psi_A0) ((cI psi_A - b5)^2 + k^2) + k cH h0 psi_A = 0
    // with w = k/(cA h0).
    const Real w = p.k / (cA * p.h0);
    Real c3 = w * cI * cI;
    Real c2 = -w * cI * (2.0 * b5 + cI * p.psi_A0);
    Real c1 = w * (b5 * b5 + p.k * p.k) + p.k * cH * p.h0 + 2.0 * w * cI * b5 * p.psi_A0;
    Real c0 = -w * p.psi_A0 * (b5 * b5 + p.k * p.k);

    for (Real root : cubicRealRoots(c3, c2, c1, c0)) {
        LowDimState s = reconstructFromPsiA(root, p);
        if (!newtonPolish(s, p))
            continue;
        bool dup = false;
        for (const auto& q : out)
            dup |= std::abs(q.psi_A - s.psi_A) < 1e-9;
        if (!dup)
            out.push_back(s);
    }
    std::sort(out.begin(), out.end(),
              [](const LowDimState& a, const LowDimState& b) { return a.psi_A > b.psi_A; });
    return out;
}

std::vector<LowDimSample> lowdimIntegrate(const LowDimState& s0, const LowDimParams& p, Real T,
                                          Real dt) {
    if (!(dt > 0))
        throw std::invalid_argument("lowdimIntegrate: dt must be > 0");
    auto add = [](const LowDimState& s, const std::array<Real, 3>& d, Real h) {
        return LowDimState{s.psi_A + h * d[0], s.psi_K + h * d[1], s.psi_L + h * d[2]};
    };
    std::vector<LowDimSample> traj;
    LowDimState s = s0;
    long steps = std::lround(T / dt);
    traj.push_back({0.0, s});
    for (long i = 0; i < steps; ++i) {
        auto k1 = lowdimRhs(s, p);
        auto k2 = lowdimRhs(add(s, k1, dt / 2), p);
        auto k3 = lowdimRhs(add(s, k2, dt / 2), p);
        auto k4 = lowdimRhs(add(s, k3, dt), p);
        for (int c = 0; c < 3; ++c) {
            Real incr = dt / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
            (c == 0 ? s.psi_A : c == 1 ? s.psi_K : s.psi_L) += incr;
        }
        if (!std::isfinite(s.psi_A) || !std::isfinite(s.psi_K) || !std::isfinite(s.psi_L))
            throw std::runtime_error("lowdimIntegrate: non-finite state at step " +
                                     std::to_string(i + 1));
        traj.push_back({(i + 1) * dt, s});
    }
    return traj;
}

LowDimDiagnostics lowdimDiagnostics(const LowDimState& s, const LowDimParams& p) {
    LowDimDiagnostics d;
    d.U_ave = 2.0 * std::sqrt(2.0) / pi * s.psi_A;
    d.F_ave = (32.0 / (3.0 * pi * pi) - 1.0) * p.h0 * s.psi_L +
              2.0 * std::sqrt(2.0) / pi * p.k * p.psi_A0;
    Real line = (1.0 - 3.0 * pi * pi / 32.0) * p.k * d.U_ave +
                3.0 * pi / (8.0 * std::sqrt(2.0)) * p.k * p.psi_A0;
    d.closure_residual = d.F_ave - line;
    return d;
}

}  // namespace qg
