#pragma once

#include <functional>
#include <optional>

#include "qg/nonlinear.hpp"
#include "qg/tau.hpp"

namespace qg {

struct DnsConfig {
    Real dt = 0.02;
    Real T = 100.0;
    int sample_every = 10;
    int M = 32;             // stored Fourier modes (mean + M-1 perturbation modes)
    int N = 64;             // Chebyshev polynomials per mode
    Symmetry symmetry = Symmetry::Full;
    int checkpoint_every = 0;  // in samples; 0 disables

    void validate() const;
};

struct TimeSeriesRecord {
    Real t = 0;
    Real U_ave = 0;
    Real E_ave = 0;
    Real hV_ave = 0;
    Real F_ave = 0;
    Real mean_residual = 0;  // d U_ave/dt - (hV)_ave + k U_ave - F_ave
};

struct TimeSeries {
    std::vector<TimeSeriesRecord> records;
    std::vector<std::pair<Real, SpectralState>> checkpoints;

    std::vector<Real> times() const;
    std::vector<Real> Uave() const;
};

// Instantaneous average zonal force demanded by the active closure.
Real closureForce(const SpectralState& s, const ChannelParams& p,
                  const std::map<int, CVec>& hModes);

// One semi-implicit step: four-stage third-order low-storage Runge-Kutta for
// the advective and topographic terms, per-stage Crank-Nicolson for friction
// and the beta term. Coefficients follow the scheme the solver is documented
// against (see README):
//   a = {8/17, 17/60, 5/12, 3/4},  b = {0, -15/68, -17/60, -5/12}.
class DnsStepper {
  public:
    DnsStepper(const ChannelParams& params, const DnsConfig& cfg);

    void step(SpectralState& s);
    const ChannelParams& params() const { return params_; }
    const std::map<int, CVec>& hModes() const { return hModes_; }
    long stepsTaken() const { return steps_; }

  private:
    ChannelParams params_;
    DnsConfig cfg_;
    std::map<int, CVec> hModes_;
    Vec forcing0_;  // Chebyshev coefficients of F'(y)
    NonlinearEvaluator eval_;
    NonlinearEvaluator::Tendency tend_, tendPrev_;
    std::vector<std::vector<TauSolver>> solvers_;  // [stage][active mode]
    std::vector<int> activeModes_;
    Parity u0Parity_;
    long steps_ = 0;
};

struct DnsResult {
    TimeSeries series;
    SpectralState finalState;
};

using SampleCallback = std::function<void(Real t, const SpectralState&)>;

DnsResult runDns(const SpectralState& state0, const ChannelParams& params, const DnsConfig& cfg,
                 const SampleCallback& onSample = {});

// ---- limit-cycle classification ----

enum class CycleType { Steady, Cycle, Undetermined };

struct CycleReport {
    CycleType type = CycleType::Undetermined;
    Real period = 0;
    Real u_min = 0;
    Real u_max = 0;
    std::string note;
};

struct CycleOptions {
    Real transientFraction = 0.5;
    Real steadyTol = 1e-6;
    Real periodScatterTol = 0.05;
    int minPeriods = 5;
};

CycleReport detectLimitCycle(const std::vector<Real>& t, const std::vector<Real>& u,
                             const CycleOptions& opt = {});
CycleReport detectLimitCycle(const TimeSeries& series, const CycleOptions& opt = {});

}  // namespace qg
