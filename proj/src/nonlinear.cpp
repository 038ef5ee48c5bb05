#include "qg/nonlinear.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace qg {

namespace {

std::mutex fftwPlanMutex;

int nextNiceSize(int n) {
    for (int s = n;; ++s) {
        int r = s;
        for (int f : {2, 3, 5})
            while (r % f == 0)
                r /= f;
        if (r == 1 && s % 2 == 0)
            return s;
    }
}

}  // namespace

struct NonlinearEvaluator::Impl {
    int M, N, Nx, Nc, stride, nModes;  // nModes: active modes incl. mean
    Real k;
    std::vector<int> modeOf;  // nModes -> Fourier index m

    Mat synth, analysis;

    // static topography data
    Mat hGrid, hxGrid, hyGrid;
    bool hasTopo = false;

    // scratch
    Mat cre, cim, vre, vim;        // coefficient/value panels (N x nModes)
    Mat fU, fV, fLapU, fLapV, fUx, fUy, fP, fQ;
    Vec qmean;
    fftw_plan planC2R = nullptr, planR2C = nullptr;
    double* realBuf = nullptr;
    fftw_complex* cplxBuf = nullptr;

    ~Impl() {
        std::lock_guard<std::mutex> lock(fftwPlanMutex);
        if (planC2R)
            fftw_destroy_plan(planC2R);
        if (planR2C)
            fftw_destroy_plan(planR2C);
        fftw_free(realBuf);
        fftw_free(cplxBuf);
    }

    // synthesize the field whose per-mode coefficients sit in (cre, cim)
    void toPhysical(Mat& out) {
        vre.noalias() = synth * cre;
        vim.noalias() = synth * cim;
        for (int i = 0; i < N; ++i) {
            for (int jx = 0; jx <= Nx / 2; ++jx) {
                cplxBuf[i * Nc + jx][0] = 0.0;
                cplxBuf[i * Nc + jx][1] = 0.0;
            }
            for (int jj = 0; jj < nModes; ++jj) {
                int j = modeOf[jj] / stride;
                cplxBuf[i * Nc + j][0] = vre(i, jj);
                cplxBuf[i * Nc + j][1] = vim(i, jj);
            }
        }
        fftw_execute_dft_c2r(planC2R, cplxBuf, realBuf);
        out = Eigen::Map<Mat>(realBuf, Nx, N).transpose();
    }

    // r2c analysis of a physical panel; per-mode values land in (vre, vim)
    void toModes(const Mat& in) {
        Eigen::Map<Mat>(realBuf, Nx, N) = in.transpose();
        fftw_execute_dft_r2c(planR2C, realBuf, cplxBuf);
        const Real norm = 1.0 / Nx;
        for (int i = 0; i < N; ++i)
            for (int jj = 0; jj < nModes; ++jj) {
                int j = modeOf[jj] / stride;
                vre(i, jj) = cplxBuf[i * Nc + j][0] * norm;
                vim(i, jj) = cplxBuf[i * Nc + j][1] * norm;
            }
    }
};

NonlinearEvaluator::NonlinearEvaluator(int M, int N, const ChannelParams& params, Symmetry sym)
    : impl_(std::make_unique<Impl>()) {
    auto& im = *impl_;
    im.M = M_ = M;
    im.N = N_ = N;
    im.k = params.k;
    im.stride = stride_ = (sym == Symmetry::Full) ? 1 : 2;

    im.modeOf.push_back(0);
    for (int m = 1; m < M; ++m)
        if (m % im.stride == 0)
            im.modeOf.push_back(m);
    im.nModes = static_cast<int>(im.modeOf.size());

    int jmax = im.modeOf.back() / im.stride;
    im.Nx = Nx_ = nextNiceSize(std::max(3 * jmax + 1, 8));
    im.Nc = Nx_ / 2 + 1;

    const ChebOps& ops = chebOps(N);
    im.synth = ops.synth();
    im.analysis = ops.analysis();

    im.cre.resize(N, im.nModes);
    im.cim.resize(N, im.nModes);
    im.vre.resize(N, im.nModes);
    im.vim.resize(N, im.nModes);
    for (Mat* f : {&im.fU, &im.fV, &im.fLapU, &im.fLapV, &im.fUx, &im.fUy, &im.fP, &im.fQ})
        f->resize(N, Nx_);

    im.realBuf = fftw_alloc_real(static_cast<size_t>(N) * Nx_);
    im.cplxBuf = fftw_alloc_complex(static_cast<size_t>(N) * im.Nc);
    {
        std::lock_guard<std::mutex> lock(fftwPlanMutex);
        im.planC2R = fftw_plan_many_dft_c2r(1, &im.Nx, N, im.cplxBuf, nullptr, 1, im.Nc,
                                            im.realBuf, nullptr, 1, im.Nx, FFTW_ESTIMATE);
        im.planR2C = fftw_plan_many_dft_r2c(1, &im.Nx, N, im.realBuf, nullptr, 1, im.Nx,
                                            im.cplxBuf, nullptr, 1, im.Nc, FFTW_ESTIMATE);
    }

    // topography grids
    auto hModes = topographyModes(params.topography, M, N);
    for (const auto& [m, h] : hModes) {
        if (m % im.stride != 0)
            throw std::invalid_argument(
                "NonlinearEvaluator: topography has Fourier modes outside the symmetry class");
        (void)h;
    }
    if (!hModes.empty()) {
        im.hasTopo = true;
        auto fill = [&](Mat& grid, auto coeffOf) {
            im.cre.setZero();
            im.cim.setZero();
            for (const auto& [m, h] : hModes) {
                CVec c = coeffOf(m, h);
                for (int jj = 0; jj < im.nModes; ++jj)
                    if (im.modeOf[jj] == m) {
                        im.cre.col(jj) = c.real();
                        im.cim.col(jj) = c.imag();
                    }
            }
            im.toPhysical(grid);
        };
        fill(im.hGrid, [](int, const CVec& h) { return h; });
        fill(im.hxGrid, [](int m, const CVec& h) { return CVec(I * Real(m) * h); });
        fill(im.hyGrid, [](int, const CVec& h) { return CVec(ddy(h)); });
    }
}

NonlinearEvaluator::~NonlinearEvaluator() = default;

NonlinearEvaluator::Tendency NonlinearEvaluator::makeTendency() const {
    Tendency t;
    t.A0 = Vec::Zero(N_);
    t.Am.assign(std::max(0, M_ - 1), CVec::Zero(N_));
    return t;
}

void NonlinearEvaluator::eval(const SpectralState& s, Tendency& out) {
    auto& im = *impl_;
    if (s.M() != M_ || s.N() != N_)
        throw std::invalid_argument("NonlinearEvaluator: state resolution mismatch");

    // per-mode coefficient panels of the six needed fields
    auto setCoeffs = [&](int jj, const CVec& c) {
        im.cre.col(jj) = c.real();
        im.cim.col(jj) = c.imag();
    };
    auto buildField = [&](Mat& grid, auto coeffOfMean, auto coeffOfMode) {
        im.cre.setZero();
        im.cim.setZero();
        im.cre.col(0) = coeffOfMean();
        for (int jj = 1; jj < im.nModes; ++jj)
            setCoeffs(jj, coeffOfMode(im.modeOf[jj]));
        im.toPhysical(grid);
    };

    buildField(im.fU, [&] { return s.U0hat(); },
               [&](int m) { return CVec((I / Real(m)) * ddy(s.Vhat(m))); });
    buildField(im.fV, [&] { return Vec(Vec::Zero(N_)); }, [&](int m) { return s.Vhat(m); });
    buildField(im.fLapU, [&] { return Vec(ddy(ddy(s.U0hat()))); },
               [&](int m) {
                   CVec u = (I / Real(m)) * ddy(s.Vhat(m));
                   return CVec(ddy(ddy(u)) - Real(m) * Real(m) * u);
               });
    buildField(im.fLapV, [&] { return Vec(Vec::Zero(N_)); },
               [&](int m) {
                   const CVec& v = s.Vhat(m);
                   return CVec(ddy(ddy(v)) - Real(m) * Real(m) * v);
               });
    buildField(im.fUx, [&] { return Vec(Vec::Zero(N_)); },
               [&](int m) { return CVec(-ddy(s.Vhat(m))); });
    buildField(im.fUy, [&] { return Vec(ddy(s.U0hat())); },
               [&](int m) { return CVec((I / Real(m)) * ddy(ddy(s.Vhat(m)))); });

    // pointwise products on the dealiased grid
    im.fP = im.fU.cwiseProduct(im.fLapV) - im.fV.cwiseProduct(im.fLapU);
    im.fQ = im.fU.cwiseProduct(im.fUx) + im.fV.cwiseProduct(im.fUy);
    if (im.hasTopo) {
        im.fP += im.fU.cwiseProduct(im.hxGrid) + im.fV.cwiseProduct(im.hyGrid);
        im.fQ -= im.hGrid.cwiseProduct(im.fV);
    }

    // mean equation: Chebyshev coefficients of the x-average of Q
    out.A0.noalias() = im.analysis * Vec(im.fQ.rowwise().mean());

    // mode equations: i m times the Fourier-Chebyshev coefficients of P
    im.toModes(im.fP);
    Mat pre = im.analysis * im.vre;
    Mat pim = im.analysis * im.vim;
    for (auto& a : out.Am)
        a.setZero();
    for (int jj = 1; jj < im.nModes; ++jj) {
        int m = im.modeOf[jj];
        out.Am[m - 1] = Real(m) * (I * pre.col(jj).cast<Complex>() - pim.col(jj).cast<Complex>());
    }
}

}  // namespace qg
