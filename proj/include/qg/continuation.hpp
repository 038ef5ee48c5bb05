#pragma once

#include <Eigen/LU>

#include "qg/nonlinear.hpp"

namespace qg {

// Real unknown vector of the steady problem:
//   f = (U0hat, Re Vhat_1, Im Vhat_1, ..., Re Vhat_{M-1}, Im Vhat_{M-1})
// restricted to the symmetry class: even modes only in S_even/S_sym and one
// Chebyshev parity class per block in S_sym.
class Packing {
  public:
    Packing(int M, int N, Symmetry sym);

    int size() const { return n_; }
    int M() const { return M_; }
    int N() const { return N_; }
    Symmetry symmetry() const { return sym_; }

    Vec pack(const SpectralState& s) const;
    SpectralState unpack(const Vec& f) const;

    const std::vector<int>& meanIdx() const { return meanIdx_; }
    struct ModeBlock {
        int m;
        int offRe, offIm;
        std::vector<int> idx;
        int nbc;  // tau rows replaced by wall conditions
    };
    const std::vector<ModeBlock>& modes() const { return modes_; }

    // SPD weight with f^T W f = E_ave of the unpacked state.
    const Mat& W() const { return W_; }

  private:
    int M_, N_, n_;
    Symmetry sym_;
    std::vector<int> meanIdx_;
    std::vector<ModeBlock> modes_;
    Mat W_;
};

struct ContinuationConfig {
    int M = 16;   // stored Fourier modes (mean + M-1), full representation
    int N = 128;  // Chebyshev polynomials per mode, full representation
    Symmetry symmetry = Symmetry::Sym;
    Real newton_tol = 1e-10;
    Real arc_tol = 1e-10;
    int max_corrector_iters = 25;
    int max_newton_iters = 50;
    Real ds0 = 0.002;
    Real ds_min = 1e-6;
    Real ds_max = 0.01;  // the paper's maximum continuation step
    int max_points = 5000;
    Real F_min = 1e-4;
    Real F_max = 3.2e-3;
    int direction = -1;  // sign of Delta F on the first predictor step
    Real F_start = 3e-3;
    Real seedAmplitude = 0.2;  // Vhat_2 seed = 0.2 i h0 sin y

    void validate() const;
};

// Steady spectral system G(f, F_ave) = 0: the mean-flow balance stacked with
// the mode equations, tau rows replaced by the wall conditions. The nonlinear
// terms are evaluated by the same pseudo-spectral path the DNS uses, and the
// Jacobian is assembled from aliased Chebyshev product operators so it is the
// exact derivative of the discrete residual.
class SteadyProblem {
  public:
    SteadyProblem(const ChannelParams& params, int M, int N, Symmetry sym);

    const Packing& packing() const { return pack_; }
    const ChannelParams& params() const { return params_; }

    Vec residual(const Vec& f, Real F);
    Mat jacobianF(const Vec& f);      // dG/df (independent of F)
    const Vec& jacobianParam() const { return gF_; }  // dG/dF

    Real normSq(const Vec& df, Real dF) const;
    Real norm(const Vec& df, Real dF) const { return std::sqrt(normSq(df, dF)); }

  private:
    ChannelParams params_;
    Packing pack_;
    NonlinearEvaluator eval_;
    NonlinearEvaluator::Tendency tend_;
    std::map<int, CVec> hModes_;
    Vec forcing0_;
    Vec gF_;
    Mat dy_, dy2_, dy3_;
};

enum class TerminationReason { MinStepReached, MaxPoints, ParameterBound, FirstSolutionOnly };

struct BranchPoint {
    SpectralState state;
    Real F = 0;
    Real U_ave = 0, E_ave = 0;
    Real ds_used = 0;
    int tangent_sign = 0;
    Real residual_inf = 0;
};

struct Branch {
    std::vector<BranchPoint> points;
    TerminationReason reason = TerminationReason::MaxPoints;
};

struct NewtonFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Plain Newton at fixed F from the paper's bootstrap seed
// (U0 = (F + F')/k, Vhat_2 = 0.2 i h0 sin y).
BranchPoint firstSolution(SteadyProblem& prob, const ContinuationConfig& cfg);
// Plain Newton at fixed F from a caller-supplied state.
BranchPoint solveAtFixedF(SteadyProblem& prob, const SpectralState& seed, Real F,
                          Real newton_tol, int max_iters);

struct Predictor {
    Vec f;
    Real F;
    Vec tangentF;  // unit tangent, f part
    Real tangentP; // unit tangent, F part
    int sign;
};

Predictor tangentPredictor(SteadyProblem& prob, const BranchPoint& prev,
                           const BranchPoint* prev2, Real ds, int firstSign);

struct CorrectorResult {
    bool converged = false;
    Vec f;
    Real F = 0;
    int iterations = 0;
    Real residual_inf = 0;
};

CorrectorResult correctorStep(SteadyProblem& prob, const Predictor& pred,
                              const BranchPoint& prev, Real ds, const ContinuationConfig& cfg);

Branch traceBranch(const ChannelParams& params, const ContinuationConfig& cfg);

// Local extrema of F along the branch (fold points), parabolically refined.
std::vector<Real> foldExtrema(const Branch& branch);

// U_ave of every crossing of the vertical line F = Ftarget, linearly
// interpolated between adjacent branch points.
std::vector<Real> branchCrossings(const Branch& branch, Real Ftarget);

// Newton-refined equilibria exactly at F = Ftarget, one per crossing.
std::vector<BranchPoint> equilibriaAtF(SteadyProblem& prob, const Branch& branch, Real Ftarget,
                                       Real newton_tol = 1e-10);

}  // namespace qg
