#pragma once
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "hns/grid.hpp"

namespace testutil {

constexpr double pi = std::numbers::pi;

inline hns::SpectralField field(const hns::Grid& g, const std::function<double(double, double)>& f) {
    std::vector<double> s(static_cast<std::size_t>(g.Nx) * g.Ny);
    for (int iy = 0; iy < g.Ny; ++iy)
        for (int ix = 0; ix < g.Nx; ++ix) s[iy * g.Nx + ix] = f(g.x(ix), g.y(iy));
    return hns::to_spectral(g, s);
}

// Random band-limited field: modes up to the cut, smooth in y.
inline hns::SpectralField random_field(const hns::Grid& g, unsigned seed, double decay = 0.5) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    hns::SpectralField f(g);
    std::vector<std::array<double, 6>> c(g.nk());
    for (auto& a : c)
        for (auto& x : a) x = nd(rng);
    for (int iy = 0; iy < g.Ny; ++iy) {
        const double y = g.y(iy);
        for (int k = 0; k <= g.cut; ++k) {
            const double amp = std::exp(-decay * k);
            double re = 0, im = 0;
            for (int m = 0; m < 3; ++m) {
                re += c[k][m] * std::cos((m + 1) * pi * y);
                im += c[k][m + 3] * std::sin((m + 1) * pi * y);
            }
            f(k, iy) = k == 0 ? hns::cplx(amp * re, 0.0) : amp * hns::cplx(re, im);
        }
    }
    return f;
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace testutil
