#include "qg/params.hpp"

#include <cmath>
#include <stdexcept>

namespace qg {

void ChannelParams::validate() const {
    if (!(k > 0))
        throw std::invalid_argument("ChannelParams: friction k must be > 0");
    if (const auto* aff = std::get_if<AffineClosure>(&closure)) {
        if (aff->a == 0.0 && aff->b == 0.0)
            throw std::invalid_argument("AffineClosure: a and b cannot both be 0");
    }
    validateTopography(topography, 8);
}

Vec ChannelParams::forcingCoeffs(int n) const {
    Vec f = forcingC() * k * coeffsOfSinY(n);
    f[0] -= forcingC() * k * 2.0 / pi;
    return f;
}

std::map<int, CVec> topographyModes(const Topography& topo, int M, int N) {
    std::map<int, CVec> out;
    if (const auto* z = std::get_if<ZonalTopo>(&topo)) {
        if (z->C * z->eta != 0.0)
            out[0] = (z->C * z->eta * coeffsOfCosY(N)).cast<Complex>();
    } else if (const auto* r = std::get_if<RidgeTopo>(&topo)) {
        if (r->h0 != 0.0 && M > 2)
            out[2] = (0.5 * r->h0 * coeffsOfSinY(N)).cast<Complex>();
    } else {
        const auto& tbl = std::get<SpectralTopo>(topo).modes;
        for (const auto& [m, coeffs] : tbl) {
            if (m >= M)
                continue;
            out[m] = resizeCoeffs(coeffs, N);
        }
    }
    return out;
}

Real topographyMean(const Topography& topo, int N) {
    auto modes = topographyModes(topo, 1, N);
    auto it = modes.find(0);
    if (it == modes.end())
        return 0.0;
    return integrateY(it->second).real() / pi;
}

void validateTopography(const Topography& topo, int N) {
    if (const auto* s = std::get_if<SpectralTopo>(&topo)) {
        for (const auto& [m, coeffs] : s->modes) {
            if (m < 0)
                throw std::invalid_argument(
                    "SpectralTopo: store modes m >= 0 only; negative modes are implied");
            if (m == 0 && coeffs.imag().cwiseAbs().maxCoeff() > 1e-14)
                throw std::invalid_argument("SpectralTopo: mode 0 must be real");
        }
    }
    if (std::abs(topographyMean(topo, std::max(N, 8))) > 1e-12)
        throw std::invalid_argument("Topography: channel mean of h must vanish");
}

}  // namespace qg
