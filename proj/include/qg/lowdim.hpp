#pragma once

#include <array>
#include <vector>

#include "qg/types.hpp"

namespace qg {

// Severely truncated three-mode model of the channel flow,
//   psi = sqrt(2) psi_A cos y + 2 psi_K cos 2x sin y + 2 psi_L sin 2x sin y,
// with the classic quadratic amplitude equations.
struct LowDimState {
    Real psi_A = 0, psi_K = 0, psi_L = 0;
};

struct LowDimParams {
    Real k = 0.01;
    Real beta = 0.25;
    Real h0 = 0.2;
    Real psi_A0 = 0.2;
};

std::array<Real, 3> lowdimRhs(const LowDimState& s, const LowDimParams& p);

// All real equilibria, found by eliminating psi_K and psi_L to a cubic in
// psi_A (closed form) and polishing each root with Newton iterations on the
// full system. Sorted by descending psi_A.
std::vector<LowDimState> lowdimEquilibria(const LowDimParams& p);

struct LowDimSample {
    Real t;
    LowDimState s;
};

std::vector<LowDimSample> lowdimIntegrate(const LowDimState& s0, const LowDimParams& p, Real T,
                                          Real dt);

struct LowDimDiagnostics {
    Real U_ave = 0;
    Real F_ave = 0;
    // F_ave minus the affine relation the truncation enforces at equilibria,
    // F_ave = (1 - 3 pi^2/32) k U_ave + (3 pi/(8 sqrt 2)) k psi_A0.
    Real closure_residual = 0;
};

LowDimDiagnostics lowdimDiagnostics(const LowDimState& s, const LowDimParams& p);

// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 = 0 (closed form).
std::vector<Real> cubicRealRoots(Real c3, Real c2, Real c1, Real c0);

}  // namespace qg
