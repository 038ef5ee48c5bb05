#pragma once

#include <random>
#include <vector>

#include "qg/params.hpp"

namespace qg {

enum class Symmetry { Full, Even, Sym };

// Divergence-free velocity field on the channel. The mean zonal flow U0hat is
// a real Chebyshev coefficient vector; each perturbation mode stores the
// meridional velocity V_hat_m, and the zonal part follows from continuity as
// U_hat_m = (i/m) D V_hat_m, so the field is divergence-free by construction.
// Negative Fourier modes are implied by conjugate symmetry.
class SpectralState {
  public:
    SpectralState() = default;
    SpectralState(int M, int N, Symmetry sym = Symmetry::Full);

    int M() const { return M_; }
    int N() const { return N_; }
    Symmetry symmetry() const { return sym_; }
    void setSymmetry(Symmetry s) { sym_ = s; }

    Vec& U0hat() { return U0_; }
    const Vec& U0hat() const { return U0_; }
    CVec& Vhat(int m) { return V_[m - 1]; }
    const CVec& Vhat(int m) const { return V_[m - 1]; }

    CVec Uhat(int m) const { return (I / Real(m)) * ddy(V_[m - 1]); }

    bool allFinite() const;
    // max |V_hat_m| at the two walls, to verify the Dirichlet invariant.
    Real bcResidual() const;

    SpectralState resized(int M, int N) const;

    static SpectralState zero(int M, int N, Symmetry sym = Symmetry::Full);
    // Parallel flow U0(y) = (F_ave + F'(y))/k over y-only topography.
    static SpectralState basicFlow(const ChannelParams& p, Real F_ave, int M, int N,
                                   Symmetry sym = Symmetry::Full);

  private:
    int M_ = 0, N_ = 0;
    Symmetry sym_ = Symmetry::Full;
    Vec U0_;
    std::vector<CVec> V_;  // V_[m-1] holds mode m, 1 <= m <= M-1
};

// Chebyshev-coefficient parity class of mode m inside S_sym: the shift-reflect
// symmetry makes V_hat_m even about mid-channel for m = 2 (mod 4) and odd for
// m = 0 (mod 4); U0hat is even.
enum class Parity { Even, Odd, None };
Parity vParity(int m);  // parity of V_hat_m in S_sym (m even)

SpectralState symmetryProject(const SpectralState& s, Symmetry target);

// Energy-orthogonal distance to the target symmetry class.
Real symmetryResidual(const SpectralState& s, Symmetry target);

// ---- quadrature diagnostics (exact for the truncated series) ----

Real computeUave(const SpectralState& s);
Real computeEave(const SpectralState& s);
// Average topographic drag (hV)_ave = (1/(2 pi^2)) iint h V dx dy.
Real computeHVave(const SpectralState& s, const std::map<int, CVec>& hModes);

// iint u dx dy and the wall integral int (u(x,0) - u(x,pi)) dx of the mean.
Real meanFlowIntegral(const SpectralState& s);      // = 2 pi^2 U_ave
Real boundaryIntegral(const SpectralState& s);      // = 2 pi (U0(0) - U0(pi))

// ---- physical-space evaluation ----

struct PhysicalField {
    int Nx = 0, Ny = 0;
    Vec x, y;        // grid lines
    Mat values;      // Ny x Nx, row iy is constant y
};

struct PhysicalFields {
    PhysicalField U, V, psi, zeta;
};

// Pointwise U, V, stream function (psi(x,0) = 0) and vorticity on an
// Nx x Ny tensor grid; requires Nx >= 2M.
PhysicalFields evalPhysical(const SpectralState& s, int Nx, int Ny);

PhysicalField evalTopography(const Topography& topo, int M, int N, int Nx, int Ny);

// Random smooth divergence-free perturbation with exact wall conditions,
// spectrally decaying coefficients, projected into `sym`. Mean-free and
// equal-wall options control the Lemma-1 side conditions.
struct PerturbationOptions {
    bool zeroMean = true;
    bool equalWalls = true;
    Real amplitude = 1.0;
    Real decay = 0.35;
};
SpectralState randomPerturbation(int M, int N, Symmetry sym, std::mt19937_64& rng,
                                 const PerturbationOptions& opt = {});

}  // namespace qg
