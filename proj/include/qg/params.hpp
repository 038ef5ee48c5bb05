#pragma once

#include <map>
#include <variant>

#include "qg/chebyshev.hpp"
#include "qg/types.hpp"

namespace qg {

// h = C*eta*cos y. eta > -1 is required by the stability theorems but not for
// plain simulation, so it is validated where the theorems are invoked.
struct ZonalTopo {
    Real C = 0.0;
    Real eta = 0.0;
};

// h = h0 * cos 2x * sin y.
struct RidgeTopo {
    Real h0 = 0.0;
};

// General per-mode Chebyshev table; key is the Fourier index m >= 0 and the
// negative modes follow by conjugate symmetry. Mode 0 must be real.
struct SpectralTopo {
    std::map<int, CVec> modes;
};

using Topography = std::variant<ZonalTopo, RidgeTopo, SpectralTopo>;

struct ConstantFave {
    Real F_ave = 0.0;
};
struct ConstantUave {
    Real U_ave = 0.0;
};
// a*F_ave + b*U_ave + c = 0 with a != 0; the F_ave entering the mean-flow
// equation is -(b/a)*U_ave - c/a.
struct AffineClosure {
    Real a = 1.0, b = 0.0, c = 0.0;
};

using Closure = std::variant<ConstantFave, ConstantUave, AffineClosure>;

struct ChannelParams {
    Real k = 0.01;
    Real beta = 0.25;
    Real psi_A0 = 0.2;  // F' = sqrt(2)*k*psi_A0*(sin y - 2/pi)
    Topography topography = RidgeTopo{0.0};
    Closure closure = ConstantFave{0.0};

    void validate() const;

    // Amplitude C of the fluctuating force written as F' = k*C*(sin y - 2/pi).
    Real forcingC() const { return std::sqrt(2.0) * psi_A0; }

    // Chebyshev coefficients of F'(y), length n.
    Vec forcingCoeffs(int n) const;
};

// Per-mode Chebyshev coefficients of the topography, resolved to (M, N).
// Entry m of the result is h_hat_m; absent modes are zero.
std::map<int, CVec> topographyModes(const Topography& topo, int M, int N);

// Mean of h over the channel, for the zero-mean invariant.
Real topographyMean(const Topography& topo, int N);

void validateTopography(const Topography& topo, int N);

}  // namespace qg
