#include "qg/continuation.hpp"

#include <cmath>
#include <stdexcept>

namespace qg {

// ---------------------------------------------------------------------------
// Packing
// ---------------------------------------------------------------------------

Packing::Packing(int M, int N, Symmetry sym) : M_(M), N_(N), sym_(sym) {
    auto indicesFor = [N](Parity p) {
        std::vector<int> idx;
        for (int j = 0; j < N; ++j) {
            if (p == Parity::Even && j % 2 != 0)
                continue;
            if (p == Parity::Odd && j % 2 == 0)
                continue;
            idx.push_back(j);
        }
        return idx;
    };

    meanIdx_ = indicesFor(sym == Symmetry::Sym ? Parity::Even : Parity::None);
    int off = static_cast<int>(meanIdx_.size());
    const int stride = (sym == Symmetry::Full) ? 1 : 2;
    for (int m = 1; m < M; ++m) {
        if (m % stride != 0)
            continue;
        ModeBlock blk;
        blk.m = m;
        blk.idx = indicesFor(sym == Symmetry::Sym ? vParity(m) : Parity::None);
        blk.nbc = (sym == Symmetry::Sym) ? 1 : 2;
        blk.offRe = off;
        off += static_cast<int>(blk.idx.size());
        blk.offIm = off;
        off += static_cast<int>(blk.idx.size());
        modes_.push_back(std::move(blk));
    }
    n_ = off;

    const ChebOps& ops = chebOps(N);
    const Mat& Q = ops.gram();
    Mat DQD = ops.dy().transpose() * Q * ops.dy();
    W_ = Mat::Zero(n_, n_);
    for (size_t a = 0; a < meanIdx_.size(); ++a)
        for (size_t b = 0; b < meanIdx_.size(); ++b)
            W_(a, b) = Q(meanIdx_[a], meanIdx_[b]) / (2.0 * pi);
    for (const auto& blk : modes_) {
        const Real m2 = Real(blk.m) * Real(blk.m);
        for (size_t a = 0; a < blk.idx.size(); ++a)
            for (size_t b = 0; b < blk.idx.size(); ++b) {
                Real w = (DQD(blk.idx[a], blk.idx[b]) / m2 + Q(blk.idx[a], blk.idx[b])) / pi;
                W_(blk.offRe + a, blk.offRe + b) = w;
                W_(blk.offIm + a, blk.offIm + b) = w;
            }
    }
}

Vec Packing::pack(const SpectralState& s) const {
    Vec f = Vec::Zero(n_);
    for (size_t a = 0; a < meanIdx_.size(); ++a)
        f[a] = s.U0hat()[meanIdx_[a]];
    for (const auto& blk : modes_) {
        const CVec& v = s.Vhat(blk.m);
        for (size_t a = 0; a < blk.idx.size(); ++a) {
            f[blk.offRe + a] = v[blk.idx[a]].real();
            f[blk.offIm + a] = v[blk.idx[a]].imag();
        }
    }
    return f;
}

SpectralState Packing::unpack(const Vec& f) const {
    SpectralState s(M_, N_, sym_);
    for (size_t a = 0; a < meanIdx_.size(); ++a)
        s.U0hat()[meanIdx_[a]] = f[a];
    for (const auto& blk : modes_) {
        CVec& v = s.Vhat(blk.m);
        for (size_t a = 0; a < blk.idx.size(); ++a)
            v[blk.idx[a]] = Complex(f[blk.offRe + a], f[blk.offIm + a]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// SteadyProblem
// ---------------------------------------------------------------------------

void ContinuationConfig::validate() const {
    if (M < 1 || N < 8)
        throw std::invalid_argument("ContinuationConfig: resolution too small");
    if (!(ds_min > 0) || !(ds_max >= ds_min) || !(ds0 > 0))
        throw std::invalid_argument("ContinuationConfig: bad step sizes");
    if (direction != 1 && direction != -1)
        throw std::invalid_argument("ContinuationConfig: direction must be +1 or -1");
}

SteadyProblem::SteadyProblem(const ChannelParams& params, int M, int N, Symmetry sym)
    : params_(params),
      pack_(M, N, sym),
      eval_(M, N, params, sym),
      hModes_(topographyModes(params.topography, M, N)),
      forcing0_(params.forcingCoeffs(N)) {
    tend_ = eval_.makeTendency();
    const ChebOps& ops = chebOps(N);
    dy_ = ops.dy();
    dy2_ = dy_ * dy_;
    dy3_ = dy2_ * dy_;
    gF_ = Vec::Zero(pack_.size());
    gF_[0] = 1.0;  // F enters the T_0 row of the mean block
}

Vec SteadyProblem::residual(const Vec& f, Real F) {
    SpectralState s = pack_.unpack(f);
    eval_.eval(s, tend_);

    Vec G = Vec::Zero(pack_.size());
    Vec g0 = -tend_.A0 - params_.k * s.U0hat() + forcing0_;
    g0[0] += F;
    const auto& meanIdx = pack_.meanIdx();
    for (size_t a = 0; a < meanIdx.size(); ++a)
        G[a] = g0[meanIdx[a]];

    for (const auto& blk : pack_.modes()) {
        const int m = blk.m;
        const CVec& v = s.Vhat(m);
        CVec phi = ddy(ddy(v)) - Real(m) * Real(m) * v;
        CVec gm = tend_.Am[m - 1] + I * (Real(m) * params_.beta) * v + params_.k * phi;
        const size_t na = blk.idx.size();
        for (size_t a = 0; a < na; ++a) {
            G[blk.offRe + a] = gm[blk.idx[a]].real();
            G[blk.offIm + a] = gm[blk.idx[a]].imag();
        }
        // tau rows -> wall conditions
        Complex bcTop = evalAtXi1(v);
        G[blk.offRe + na - 1] = bcTop.real();
        G[blk.offIm + na - 1] = bcTop.imag();
        if (blk.nbc == 2) {
            Complex bcBot = evalAtXiMinus1(v);
            G[blk.offRe + na - 2] = bcBot.real();
            G[blk.offIm + na - 2] = bcBot.imag();
        }
    }
    return G;
}

namespace {

// per-mode profile multiplication operators, composed with y-derivatives
struct ModeOps {
    CMat MU, MUD, MUD2;
    CMat MV, MVD, MVD2, MVD3;
    CMat MLapV, MLapVD;
    CMat MLapU, MDU;
};

struct RowAccum {
    CMat C;                 // d/dU0hat
    std::map<int, CMat> S;  // d/dVhat_n
    std::map<int, CMat> T;  // d/dconj(Vhat_n)
    int n = 0;

    explicit RowAccum(int nn) : n(nn) {}
    CMat& s(int q) {
        auto [it, fresh] = S.try_emplace(q, CMat::Zero(n, n));
        return it->second;
    }
    CMat& t(int q) {
        auto [it, fresh] = T.try_emplace(q, CMat::Zero(n, n));
        return it->second;
    }
    CMat& c() {
        if (C.size() == 0)
            C = CMat::Zero(n, n);
        return C;
    }
};

}  // namespace

Mat SteadyProblem::jacobianF(const Vec& f) {
    const int N = pack_.N();
    const int Mmax = pack_.M() - 1;
    SpectralState s = pack_.unpack(f);

    const ChebOps& ops = chebOps(N);

    // profiles and multiplication operators for the active positive modes
    std::map<int, ModeOps> mo;
    for (const auto& blk : pack_.modes()) {
        const int m = blk.m;
        const CVec& v = s.Vhat(m);
        CVec dv = ddy(v);
        CVec u = (I / Real(m)) * dv;
        CVec lapv = ddy(dv) - Real(m) * Real(m) * v;
        CVec lapu = ddy(ddy(u)) - Real(m) * Real(m) * u;
        ModeOps o;
        o.MV = ops.productMatrix(v);
        o.MVD = o.MV * dy_;
        o.MVD2 = o.MVD * dy_;
        o.MVD3 = o.MVD2 * dy_;
        o.MU = ops.productMatrix(u);
        o.MUD = o.MU * dy_;
        o.MUD2 = o.MUD * dy_;
        o.MLapV = ops.productMatrix(lapv);
        o.MLapVD = o.MLapV * dy_;
        o.MLapU = ops.productMatrix(lapu);
        o.MDU = ops.productMatrix(CVec(ddy(u)));
        mo.emplace(m, std::move(o));
    }
    Mat MU0 = ops.productMatrix(s.U0hat());
    Mat MU0D2 = MU0 * dy2_;
    Mat MLapU0 = ops.productMatrix(Vec(ddy(ddy(s.U0hat()))));

    std::map<int, CMat> Mh, MhD, MDh;
    for (const auto& [q, h] : hModes_) {
        Mh[q] = ops.productMatrix(h);
        MhD[q] = Mh[q] * dy_;
        MDh[q] = ops.productMatrix(CVec(ddy(h)));
    }

    auto active = [&](int q) { return mo.count(std::abs(q)) > 0 && q != 0; };
    auto hMode = [&](int q) { return Mh.count(std::abs(q)) > 0; };
    // conjugate-extended access (D is real, so conjugation passes through)
    auto get = [&](int q, CMat ModeOps::*field) -> CMat {
        const CMat& base = mo.at(std::abs(q)).*field;
        return q >= 0 ? base : base.conjugate();
    };
    auto getH = [&](std::map<int, CMat>& table, int q) -> CMat {
        const CMat& base = table.at(std::abs(q));
        return q >= 0 ? base : base.conjugate();
    };

    // accumulate complex blocks per equation row
    std::map<int, RowAccum> rows;
    rows.emplace(0, RowAccum(N));
    for (const auto& blk : pack_.modes())
        rows.emplace(blk.m, RowAccum(N));

    auto addU = [&](RowAccum& row, int q, const CMat& X, const CMat* P) {
        // X = pre * D for q != 0; P = pre for the mean slot
        if (q == 0) {
            if (P)
                row.c() += *P;
            return;
        }
        Complex fac = I / Real(q);
        if (q > 0)
            row.s(q) += fac * X;
        else
            row.t(-q) += fac * X;
    };
    auto addV = [&](RowAccum& row, int q, const CMat& P) {
        if (q == 0)
            return;
        if (q > 0)
            row.s(q) += P;
        else
            row.t(-q) += P;
    };

    // ---- mode rows ----
    for (const auto& blk : pack_.modes()) {
        const int m = blk.m;
        RowAccum& row = rows.at(m);
        for (int m1 = -Mmax; m1 <= Mmax; ++m1) {
            int m2 = m - m1;
            if (std::abs(m2) > Mmax)
                continue;
            const Real m2sq = Real(m2) * Real(m2);

            // T1 = U_{m1} * (D^2 - m2^2) V_{m2}
            if (active(m2) && (m1 == 0 || active(m1))) {
                CMat pre = get(m2, &ModeOps::MLapV);
                CMat preD = get(m2, &ModeOps::MLapVD);
                addU(row, m1, preD, &pre);
                if (m1 == 0)
                    addV(row, m2, CMat((MU0D2 - m2sq * MU0).cast<Complex>()));
                else
                    addV(row, m2, CMat(get(m1, &ModeOps::MUD2) - m2sq * get(m1, &ModeOps::MU)));
            }
            // T2 = -V_{m1} * (D^2 - m2^2) U_{m2}
            if (active(m1) && (m2 == 0 || active(m2))) {
                if (m2 == 0)
                    addV(row, m1, CMat(-MLapU0.cast<Complex>()));
                else
                    addV(row, m1, CMat(-get(m2, &ModeOps::MLapU)));
                if (m2 == 0) {
                    CMat P = -get(m1, &ModeOps::MVD2);
                    addU(row, m2, P, &P);
                } else {
                    CMat X = -(get(m1, &ModeOps::MVD3) - m2sq * get(m1, &ModeOps::MVD));
                    addU(row, m2, X, nullptr);
                }
            }
            // T3 = i m2 U_{m1} h_{m2} + V_{m1} D h_{m2}
            if (hMode(m2) && (m1 == 0 || active(m1))) {
                if (m2 != 0) {
                    CMat P = Complex(0, m2) * getH(Mh, m2);
                    CMat X = Complex(0, m2) * getH(MhD, m2);
                    addU(row, m1, X, &P);
                }
                if (m1 != 0)
                    addV(row, m1, getH(MDh, m2));
            }
        }
        // overall factor i*m on the advective/topographic part
        Complex im(0, m);
        if (row.C.size())
            row.C *= im;
        for (auto& [q, blkS] : row.S)
            blkS *= im;
        for (auto& [q, blkT] : row.T)
            blkT *= im;
        // linear part: k (D^2 - m^2) + i m beta
        CMat lin = params_.k * (dy2_ - Real(m) * Real(m) * Mat::Identity(N, N)).cast<Complex>();
        lin += (I * Real(m) * params_.beta) * CMat::Identity(N, N);
        row.s(m) += lin;
    }

    // ---- mean row ----
    {
        RowAccum& row = rows.at(0);
        for (int m2 = -Mmax; m2 <= Mmax; ++m2) {
            if (m2 == 0)
                continue;
            if (active(m2)) {
                // U_{-m2} * (i m2 U_{m2})
                CMat X1 = Complex(0, m2) * get(m2, &ModeOps::MUD);
                addU(row, -m2, X1, nullptr);
                CMat X2 = Complex(0, m2) * get(-m2, &ModeOps::MUD);
                addU(row, m2, X2, nullptr);
                // V_{-m2} * D U_{m2}
                addV(row, -m2, get(m2, &ModeOps::MDU));
                CMat X3 = get(-m2, &ModeOps::MVD2);
                addU(row, m2, X3, nullptr);
            }
            // -h_{-m2} * V_{m2}
            if (hMode(-m2) && active(m2))
                addV(row, m2, CMat(-getH(Mh, -m2)));
        }
        // G_0 = -(advective part) - k U0
        if (row.C.size())
            row.C *= Complex(-1, 0);
        for (auto& [q, blkS] : row.S)
            blkS *= Complex(-1, 0);
        for (auto& [q, blkT] : row.T)
            blkT *= Complex(-1, 0);
        row.c() += Complex(-params_.k, 0) * CMat::Identity(N, N);
    }

    // ---- reduce the complex blocks to the packed real matrix ----
    Mat J = Mat::Zero(pack_.size(), pack_.size());
    const auto& meanIdx = pack_.meanIdx();

    auto colBlockOf = [&](int q) -> const Packing::ModeBlock* {
        for (const auto& blk : pack_.modes())
            if (blk.m == q)
                return &blk;
        return nullptr;
    };

    auto scatter = [&](const std::vector<int>& rowIdx, int rowOffRe, int rowOffIm,
                       RowAccum& row) {
        const bool complexRow = rowOffIm >= 0;
        if (row.C.size()) {
            for (size_t a = 0; a < rowIdx.size(); ++a)
                for (size_t b = 0; b < meanIdx.size(); ++b) {
                    Complex c = row.C(rowIdx[a], meanIdx[b]);
                    J(rowOffRe + a, b) += c.real();
                    if (complexRow)
                        J(rowOffIm + a, b) += c.imag();
                }
        }
        for (const auto& blk : pack_.modes()) {
            auto itS = row.S.find(blk.m);
            auto itT = row.T.find(blk.m);
            if (itS == row.S.end() && itT == row.T.end())
                continue;
            static const CMat empty;
            const CMat& S = itS != row.S.end() ? itS->second : empty;
            const CMat& T = itT != row.T.end() ? itT->second : empty;
            for (size_t a = 0; a < rowIdx.size(); ++a)
                for (size_t b = 0; b < blk.idx.size(); ++b) {
                    Complex sv = S.size() ? S(rowIdx[a], blk.idx[b]) : Complex(0);
                    Complex tv = T.size() ? T(rowIdx[a], blk.idx[b]) : Complex(0);
                    // dG = S dV + T dconj(V)
                    J(rowOffRe + a, blk.offRe + b) += sv.real() + tv.real();
                    J(rowOffRe + a, blk.offIm + b) += -sv.imag() + tv.imag();
                    if (complexRow) {
                        J(rowOffIm + a, blk.offRe + b) += sv.imag() + tv.imag();
                        J(rowOffIm + a, blk.offIm + b) += sv.real() - tv.real();
                    }
                }
        }
        (void)colBlockOf;
    };

    scatter(meanIdx, 0, -1, rows.at(0));
    for (const auto& blk : pack_.modes())
        scatter(blk.idx, blk.offRe, blk.offIm, rows.at(blk.m));

    // ---- tau rows ----
    for (const auto& blk : pack_.modes()) {
        const size_t na = blk.idx.size();
        for (int bc = 0; bc < blk.nbc; ++bc) {
            size_t a = na - 1 - bc;  // last row: xi=+1, second-to-last: xi=-1
            bool top = (bc == 0);
            for (int which = 0; which < 2; ++which) {
                int rowOff = which == 0 ? blk.offRe : blk.offIm;
                int colOff = which == 0 ? blk.offRe : blk.offIm;
                J.row(rowOff + a).setZero();
                for (size_t b = 0; b < na; ++b) {
                    int j = blk.idx[b];
                    Real tj = top ? 1.0 : ((j % 2 == 0) ? 1.0 : -1.0);
                    J(rowOff + a, colOff + b) = tj;
                }
            }
        }
    }
    return J;
}

Real SteadyProblem::normSq(const Vec& df, Real dF) const {
    return df.dot(pack_.W() * df) + dF * dF / (2.0 * params_.k * params_.k);
}

// ---------------------------------------------------------------------------
// predictor / corrector / branch tracing
// ---------------------------------------------------------------------------

namespace {

BranchPoint makePoint(SteadyProblem& prob, const Vec& f, Real F, Real ds, int sign,
                      Real residInf) {
    BranchPoint p;
    p.state = prob.packing().unpack(f);
    p.F = F;
    p.U_ave = computeUave(p.state);
    p.E_ave = computeEave(p.state);
    p.ds_used = ds;
    p.tangent_sign = sign;
    p.residual_inf = residInf;
    return p;
}

Vec newtonAtFixedF(SteadyProblem& prob, Vec f, Real F, Real tol, int maxIters, Real* residOut) {
    Real rn = 0;
    for (int it = 0; it <= maxIters; ++it) {
        Vec G = prob.residual(f, F);
        rn = G.cwiseAbs().maxCoeff();
        if (!std::isfinite(rn))
            throw NewtonFailure("Newton: residual is not finite");
        if (rn < tol) {
            if (residOut)
                *residOut = rn;
            return f;
        }
        if (it == maxIters)
            break;
        Mat J = prob.jacobianF(f);
        f += J.partialPivLu().solve(Vec(-G));
    }
    throw NewtonFailure("Newton did not converge (residual " + std::to_string(rn) +
                        "); try a larger starting F_ave");
}

}  // namespace

BranchPoint firstSolution(SteadyProblem& prob, const ContinuationConfig& cfg) {
    const Packing& pk = prob.packing();
    SpectralState seed(pk.M(), pk.N(), pk.symmetry());
    seed.U0hat() = prob.params().forcingCoeffs(pk.N()) / prob.params().k;
    seed.U0hat()[0] += cfg.F_start / prob.params().k;
    if (const auto* ridge = std::get_if<RidgeTopo>(&prob.params().topography)) {
        if (ridge->h0 != 0.0 && pk.M() > 2)
            seed.Vhat(2) = I * (cfg.seedAmplitude * ridge->h0) * coeffsOfSinY(pk.N()).cast<Complex>();
    }
    seed = symmetryProject(seed, pk.symmetry());

    Real resid = 0;
    Vec f = newtonAtFixedF(prob, pk.pack(seed), cfg.F_start, cfg.newton_tol,
                           cfg.max_newton_iters, &resid);
    return makePoint(prob, f, cfg.F_start, 0.0, 0, resid);
}

BranchPoint solveAtFixedF(SteadyProblem& prob, const SpectralState& seed, Real F,
                          Real newton_tol, int max_iters) {
    Real resid = 0;
    Vec f = newtonAtFixedF(prob, prob.packing().pack(seed), F, newton_tol, max_iters, &resid);
    return makePoint(prob, f, F, 0.0, 0, resid);
}

Predictor tangentPredictor(SteadyProblem& prob, const BranchPoint& prev,
                           const BranchPoint* prev2, Real ds, int firstSign) {
    Vec fprev = prob.packing().pack(prev.state);
    Mat J = prob.jacobianF(fprev);
    Eigen::PartialPivLU<Mat> lu(J);
    Vec d = lu.matrixLU().diagonal().cwiseAbs();
    if (d.minCoeff() <= 1e-14 * d.maxCoeff()) {
        // exactly at a fold the Jacobian is singular; nudge and retry once
        J.diagonal().array() += 1e-12;
        lu.compute(J);
        d = lu.matrixLU().diagonal().cwiseAbs();
        if (d.minCoeff() <= 1e-14 * d.maxCoeff())
            throw NewtonFailure("tangent predictor: Jacobian singular at fold point");
    }
    Vec dft = lu.solve(Vec(-prob.jacobianParam()));
    Real nrm = prob.norm(dft, 1.0);

    int sign;
    if (prev2 == nullptr) {
        sign = firstSign;  // choose the half-branch by the sign of Delta F
    } else {
        Vec hist = fprev - prob.packing().pack(prev2->state);
        Real histF = prev.F - prev2->F;
        Real ip = dft.dot(prob.packing().W() * hist) +
                  histF / (2.0 * prob.params().k * prob.params().k);
        sign = (ip >= 0) ? 1 : -1;
    }

    Predictor p;
    p.tangentF = dft / nrm;
    p.tangentP = 1.0 / nrm;
    p.sign = sign;
    p.f = fprev + Real(sign) * ds * p.tangentF;
    p.F = prev.F + Real(sign) * ds * p.tangentP;
    return p;
}

CorrectorResult correctorStep(SteadyProblem& prob, const Predictor& pred,
                              const BranchPoint& prev, Real ds, const ContinuationConfig& cfg) {
    const Packing& pk = prob.packing();
    const int n = pk.size();
    Vec fprev = pk.pack(prev.state);

    CorrectorResult res;
    res.f = pred.f;
    res.F = pred.F;

    for (int it = 0; it <= cfg.max_corrector_iters; ++it) {
        Vec G = prob.residual(res.f, res.F);
        Real gInf = G.cwiseAbs().maxCoeff();
        Real A = prob.normSq(res.f - fprev, res.F - prev.F) - ds * ds;
        res.iterations = it;
        res.residual_inf = gInf;
        if (!std::isfinite(gInf) || gInf > 1e6)
            return res;  // diverged
        if (gInf < cfg.newton_tol && std::abs(A) < cfg.arc_tol) {
            res.converged = true;
            return res;
        }
        if (it == cfg.max_corrector_iters)
            return res;

        Mat B = Mat::Zero(n + 1, n + 1);
        B.topLeftCorner(n, n) = prob.jacobianF(res.f);
        B.topRightCorner(n, 1) = prob.jacobianParam();
        B.bottomLeftCorner(1, n) = 2.0 * (res.f - fprev).transpose() * pk.W();
        B(n, n) = (res.F - prev.F) / (prob.params().k * prob.params().k);
        Vec rhs(n + 1);
        rhs.head(n) = -G;
        rhs[n] = -A;
        Vec delta = B.partialPivLu().solve(rhs);
        if (!delta.allFinite())
            return res;
        res.f += delta.head(n);
        res.F += delta[n];
    }
    return res;
}

Branch traceBranch(const ChannelParams& params, const ContinuationConfig& cfg) {
    cfg.validate();
    SteadyProblem prob(params, cfg.M, cfg.N, cfg.symmetry);
    Branch branch;
    branch.points.push_back(firstSolution(prob, cfg));

    Real ds = cfg.ds0;
    int successes = 0;
    while (static_cast<int>(branch.points.size()) < cfg.max_points) {
        const BranchPoint& prev = branch.points.back();
        const BranchPoint* prev2 =
            branch.points.size() >= 2 ? &branch.points[branch.points.size() - 2] : nullptr;

        Predictor pred = tangentPredictor(prob, prev, prev2, ds, cfg.direction);
        CorrectorResult res = correctorStep(prob, pred, prev, ds, cfg);
        if (!res.converged) {
            successes = 0;
            ds *= 0.5;
            if (ds < cfg.ds_min) {
                branch.reason = TerminationReason::MinStepReached;
                return branch;
            }
            continue;
        }

        branch.points.push_back(makePoint(prob, res.f, res.F, ds, pred.sign, res.residual_inf));
        if (res.F < cfg.F_min || res.F > cfg.F_max) {
            branch.reason = TerminationReason::ParameterBound;
            return branch;
        }
        if (++successes >= 3) {
            successes = 0;
            ds = std::min(2.0 * ds, cfg.ds_max);
        }
    }
    branch.reason = TerminationReason::MaxPoints;
    return branch;
}

std::vector<Real> foldExtrema(const Branch& branch) {
    std::vector<Real> folds;
    const auto& pts = branch.points;
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        Real d1 = pts[i].F - pts[i - 1].F;
        Real d2 = pts[i + 1].F - pts[i].F;
        if (d1 == 0.0 || d2 == 0.0 || (d1 > 0) == (d2 > 0))
            continue;
        // parabola through (s, F) with arclength spacing
        Real s0 = 0, s1 = pts[i].ds_used, s2 = s1 + pts[i + 1].ds_used;
        Mat A(3, 3);
        A << s0 * s0, s0, 1, s1 * s1, s1, 1, s2 * s2, s2, 1;
        Vec rhs(3);
        rhs << pts[i - 1].F, pts[i].F, pts[i + 1].F;
        Vec c = A.partialPivLu().solve(rhs);
        Real sv = (c[0] != 0.0) ? -c[1] / (2 * c[0]) : s1;
        sv = std::clamp(sv, s0, s2);
        folds.push_back(c[0] * sv * sv + c[1] * sv + c[2]);
    }
    return folds;
}

std::vector<Real> branchCrossings(const Branch& branch, Real Ftarget) {
    std::vector<Real> crossings;
    const auto& pts = branch.points;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        Real a = pts[i].F - Ftarget, b = pts[i + 1].F - Ftarget;
        if (a == 0.0) {
            crossings.push_back(pts[i].U_ave);
            continue;
        }
        if (a * b < 0) {
            Real w = a / (a - b);
            crossings.push_back(pts[i].U_ave + w * (pts[i + 1].U_ave - pts[i].U_ave));
        }
    }
    return crossings;
}

std::vector<BranchPoint> equilibriaAtF(SteadyProblem& prob, const Branch& branch, Real Ftarget,
                                       Real newton_tol) {
    std::vector<BranchPoint> out;
    const auto& pts = branch.points;
    const Packing& pk = prob.packing();
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        Real a = pts[i].F - Ftarget, b = pts[i + 1].F - Ftarget;
        if (!((a == 0.0 && b != 0.0) || a * b < 0))
            continue;
        Real w = (a == 0.0) ? 0.0 : a / (a - b);
        Vec f = (1 - w) * pk.pack(pts[i].state) + w * pk.pack(pts[i + 1].state);
        Real resid = 0;
        f = newtonAtFixedF(prob, f, Ftarget, newton_tol, 50, &resid);
        BranchPoint p = makePoint(prob, f, Ftarget, 0.0, 0, resid);
        bool dup = false;
        for (const auto& q : out)
            dup |= std::abs(q.U_ave - p.U_ave) < 1e-6;
        if (!dup)
            out.push_back(std::move(p));
    }
    return out;
}

}  // namespace qg
