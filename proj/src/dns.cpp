#include "qg/dns.hpp"

#include <cmath>
#include <stdexcept>

namespace qg {

namespace {

constexpr Real rkA[4] = {8.0 / 17.0, 17.0 / 60.0, 5.0 / 12.0, 3.0 / 4.0};
constexpr Real rkB[4] = {0.0, -15.0 / 68.0, -17.0 / 60.0, -5.0 / 12.0};

CVec laplacianM(const CVec& v, int m) { return ddy(ddy(v)) - Real(m) * Real(m) * v; }

}  // namespace

void DnsConfig::validate() const {
    if (!(dt > 0))
        throw std::invalid_argument("DnsConfig: dt must be > 0");
    if (sample_every < 1)
        throw std::invalid_argument("DnsConfig: sample_every must be >= 1");
    if (M < 1 || N < 4)
        throw std::invalid_argument("DnsConfig: resolution too small");
}

std::vector<Real> TimeSeries::times() const {
    std::vector<Real> t;
    t.reserve(records.size());
    for (const auto& r : records)
        t.push_back(r.t);
    return t;
}

std::vector<Real> TimeSeries::Uave() const {
    std::vector<Real> u;
    u.reserve(records.size());
    for (const auto& r : records)
        u.push_back(r.U_ave);
    return u;
}

Real closureForce(const SpectralState& s, const ChannelParams& p,
                  const std::map<int, CVec>& hModes) {
    if (const auto* cf = std::get_if<ConstantFave>(&p.closure))
        return cf->F_ave;
    if (const auto* cu = std::get_if<ConstantUave>(&p.closure))
        return p.k * cu->U_ave - computeHVave(s, hModes);
    const auto& aff = std::get<AffineClosure>(p.closure);
    if (aff.a == 0.0)
        throw std::invalid_argument("AffineClosure with a = 0 cannot prescribe F_ave");
    return -(aff.b / aff.a) * computeUave(s) - aff.c / aff.a;
}

DnsStepper::DnsStepper(const ChannelParams& params, const DnsConfig& cfg)
    : params_(params),
      cfg_(cfg),
      hModes_(topographyModes(params.topography, cfg.M, cfg.N)),
      forcing0_(params.forcingCoeffs(cfg.N)),
      eval_(cfg.M, cfg.N, params, cfg.symmetry) {
    cfg_.validate();
    params_.validate();

    const int stride = (cfg.symmetry == Symmetry::Full) ? 1 : 2;
    for (int m = 1; m < cfg.M; ++m)
        if (m % stride == 0)
            activeModes_.push_back(m);
    u0Parity_ = (cfg.symmetry == Symmetry::Sym) ? Parity::Even : Parity::None;

    solvers_.resize(4);
    for (int j = 0; j < 4; ++j) {
        Real lam = cfg.dt * (rkA[j] + rkB[j]) / 2.0;
        for (int m : activeModes_) {
            Parity par = (cfg.symmetry == Symmetry::Sym) ? vParity(m) : Parity::None;
            Complex a(1.0 + lam * params.k, 0.0);
            Complex b = -Real(m) * Real(m) * a + I * (lam * m * params.beta);
            solvers_[j].emplace_back(cfg.N, a, b, par);
        }
    }
    tend_ = eval_.makeTendency();
    tendPrev_ = eval_.makeTendency();
}

void DnsStepper::step(SpectralState& s) {
    const Real dt = cfg_.dt;
    const Real k = params_.k;

    for (int j = 0; j < 4; ++j) {
        eval_.eval(s, tend_);
        const Real lam = dt * (rkA[j] + rkB[j]) / 2.0;

        // mean flow
        Vec e0 = -tend_.A0 + forcing0_;
        e0[0] += closureForce(s, params_, hModes_);
        Vec rhs0 = (1.0 - lam * k) * s.U0hat() + dt * rkA[j] * e0;
        if (j > 0)
            rhs0 += dt * rkB[j] * tendPrev_.A0;  // holds -A0 + force of stage j-2
        Vec u0 = rhs0 / (1.0 + lam * k);
        if (u0Parity_ == Parity::Even)
            for (int q = 1; q < u0.size(); q += 2)
                u0[q] = 0.0;
        tendPrev_.A0 = e0;

        // perturbation modes
        for (size_t idx = 0; idx < activeModes_.size(); ++idx) {
            int m = activeModes_[idx];
            CVec em = -tend_.Am[m - 1];
            CVec phi = laplacianM(s.Vhat(m), m);
            CVec rhs = (1.0 - lam * k) * phi - I * (lam * m * params_.beta) * s.Vhat(m) +
                       dt * rkA[j] * em;
            if (j > 0)
                rhs += dt * rkB[j] * tendPrev_.Am[m - 1];
            tendPrev_.Am[m - 1] = em;
            s.Vhat(m) = solvers_[j][idx].solve(rhs);
        }
        s.U0hat() = u0;
    }
    ++steps_;
    if (!s.allFinite())
        throw std::runtime_error("dns: non-finite state after step " + std::to_string(steps_));
}

DnsResult runDns(const SpectralState& state0, const ChannelParams& params, const DnsConfig& cfg,
                 const SampleCallback& onSample) {
    DnsStepper stepper(params, cfg);
    SpectralState s = state0;
    if (s.M() != cfg.M || s.N() != cfg.N)
        s = s.resized(cfg.M, cfg.N);
    s.setSymmetry(cfg.symmetry);

    TimeSeries series;
    auto sample = [&](Real t) {
        TimeSeriesRecord r;
        r.t = t;
        r.U_ave = computeUave(s);
        r.E_ave = computeEave(s);
        r.hV_ave = computeHVave(s, stepper.hModes());
        r.F_ave = closureForce(s, params, stepper.hModes());
        series.records.push_back(r);
        if (cfg.checkpoint_every > 0 &&
            (series.records.size() - 1) % cfg.checkpoint_every == 0)
            series.checkpoints.emplace_back(t, s);
        if (onSample)
            onSample(t, s);
    };

    sample(0.0);
    const long steps = std::lround(cfg.T / cfg.dt);
    for (long i = 0; i < steps; ++i) {
        stepper.step(s);
        if ((i + 1) % cfg.sample_every == 0)
            sample((i + 1) * cfg.dt);
    }

    // consistency channel: central-difference residual of the mean-flow ODE
    auto& rec = series.records;
    for (size_t i = 0; i < rec.size(); ++i) {
        Real dudt;
        if (rec.size() < 2)
            dudt = 0.0;
        else if (i == 0)
            dudt = (rec[1].U_ave - rec[0].U_ave) / (rec[1].t - rec[0].t);
        else if (i + 1 == rec.size())
            dudt = (rec[i].U_ave - rec[i - 1].U_ave) / (rec[i].t - rec[i - 1].t);
        else
            dudt = (rec[i + 1].U_ave - rec[i - 1].U_ave) / (rec[i + 1].t - rec[i - 1].t);
        rec[i].mean_residual = dudt - rec[i].hV_ave + params.k * rec[i].U_ave - rec[i].F_ave;
    }

    return DnsResult{std::move(series), std::move(s)};
}

CycleReport detectLimitCycle(const std::vector<Real>& t, const std::vector<Real>& u,
                             const CycleOptions& opt) {
    CycleReport rep;
    if (t.size() != u.size() || t.size() < 8) {
        rep.note = "series too short";
        return rep;
    }
    size_t begin = static_cast<size_t>(opt.transientFraction * t.size());
    if (t.size() - begin < 8) {
        rep.note = "analysis window too short";
        return rep;
    }

    Real umin = u[begin], umax = u[begin];
    for (size_t i = begin; i < u.size(); ++i) {
        umin = std::min(umin, u[i]);
        umax = std::max(umax, u[i]);
    }
    rep.u_min = umin;
    rep.u_max = umax;
    if (umax - umin < opt.steadyTol) {
        rep.type = CycleType::Steady;
        return rep;
    }

    // successive maxima with a prominence filter, refined parabolically
    const Real prominence = 0.1 * (umax - umin);
    std::vector<Real> peaks;
    Real runningMin = u[begin];
    bool armed = true;
    for (size_t i = begin + 1; i + 1 < u.size(); ++i) {
        runningMin = std::min(runningMin, u[i]);
        if (!armed && u[i] < umax - prominence)
            armed = true;
        if (armed && u[i] > u[i - 1] && u[i] >= u[i + 1] && u[i] - runningMin >= prominence) {
            Real denom = u[i - 1] - 2 * u[i] + u[i + 1];
            Real shift = (denom != 0.0) ? 0.5 * (u[i - 1] - u[i + 1]) / denom : 0.0;
            peaks.push_back(t[i] + shift * (t[i + 1] - t[i]));
            runningMin = u[i];
            armed = false;
        }
    }
    if (static_cast<int>(peaks.size()) < opt.minPeriods + 1) {
        rep.note = "fewer than " + std::to_string(opt.minPeriods) + " full periods in window";
        return rep;
    }

    std::vector<Real> periods;
    for (size_t i = 1; i < peaks.size(); ++i)
        periods.push_back(peaks[i] - peaks[i - 1]);
    Real mean = 0;
    for (Real p : periods)
        mean += p;
    mean /= periods.size();
    for (Real p : periods)
        if (std::abs(p - mean) > opt.periodScatterTol * mean) {
            rep.note = "period estimates scatter beyond tolerance";
            return rep;
        }

    rep.type = CycleType::Cycle;
    rep.period = mean;
    return rep;
}

CycleReport detectLimitCycle(const TimeSeries& series, const CycleOptions& opt) {
    return detectLimitCycle(series.times(), series.Uave(), opt);
}

}  // namespace qg
