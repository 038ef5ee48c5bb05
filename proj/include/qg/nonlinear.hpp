#pragma once

#include <memory>
#include <vector>

#include "qg/state.hpp"

namespace qg {

// Advective and topographic convolution terms of the spectral equations,
// evaluated pseudo-spectrally: zero-padded FFTs in x (grid of at least
// 3*m_max+1 points, so quadratic products are alias-free in the retained
// modes) and pointwise Gauss-Lobatto products in y. States restricted to even
// Fourier modes are evaluated on the half-period grid.
//
//   A0   = F(U U_x + V U_y)_0 - F(h V)_0
//   A[m] = i m F(U lap V - V lap U)_m + i m F(U h_x + V h_y)_m
//
// The mean-flow and mode equations then read
//   d/dt U0hat            = -A0 - k U0hat + F_ave + F'_0hat
//   d/dt (D^2 - m^2) Vhat = -A[m] - i m beta Vhat - k (D^2 - m^2) Vhat
class NonlinearEvaluator {
  public:
    NonlinearEvaluator(int M, int N, const ChannelParams& params, Symmetry sym);
    ~NonlinearEvaluator();

    NonlinearEvaluator(const NonlinearEvaluator&) = delete;
    NonlinearEvaluator& operator=(const NonlinearEvaluator&) = delete;

    struct Tendency {
        Vec A0;
        std::vector<CVec> Am;  // Am[m-1], 1 <= m <= M-1
    };

    Tendency makeTendency() const;
    // Not thread-safe per instance (internal scratch); use one instance per run.
    void eval(const SpectralState& s, Tendency& out);

    int M() const { return M_; }
    int N() const { return N_; }
    int Nx() const { return Nx_; }
    int modeStride() const { return stride_; }

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int M_, N_, Nx_, stride_;
};

}  // namespace qg
