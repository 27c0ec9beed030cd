#include "csd/gauge.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "csd/kernels.hpp"
#include "csd/spectral.hpp"

namespace csd::gauge {

using spectral::deriv_table;
using spectral::inv_laplacian_table;

SpinorField SlashField::apply(const SpinorField& psi) const {
    require_same_grid(grid(), psi.grid());
    SpinorField out(psi.grid());
    kernels::slash_apply(out.comp(0).values(), out.comp(1).values(), c0.values(), c1.values(),
                         c2.values(), psi.comp(0).values(), psi.comp(1).values());
    return out;
}

void n_multiplier_hat(const Grid& g, std::span<const cplx> b0, std::span<const cplx> b1,
                      std::span<const cplx> b2, std::span<cplx> c0, std::span<cplx> c1,
                      std::span<cplx> c2) {
    const int n = g.n;
    kernels::par_for(g.size(), [&](std::size_t i) {
        const int k1 = int(i) / n, k2 = int(i) % n;
        const double x1 = g.xi(k1), x2 = g.xi(k2);
        const double r2 = x1 * x1 + x2 * x2;
        // The zero mode and the self-conjugate Nyquist lines are annihilated:
        // first derivatives carry no information there and an odd symbol on a
        // Nyquist mode would break reality of the coefficients.
        if (r2 == 0.0 || k1 == n / 2 || k2 == n / 2) {
            c0[i] = c1[i] = c2[i] = cplx{0.0, 0.0};
            return;
        }
        const cplx il{-1.0 / r2, 0.0};
        const cplx d1{0.0, x1}, d2{0.0, x2};
        const cplx v0 = b0[i], v1 = b1[i], v2 = b2[i];
        c0[i] = il * (d2 * v1 - d1 * v2);
        c1[i] = -il * (d2 * v0);
        c2[i] = il * (d1 * v0);
    });
}

SlashField bilinear_n(const SpinorField& psi, const SpinorField& phi) {
    require_same_grid(psi.grid(), phi.grid());
    const Grid& g = psi.grid();

    ScalarField b0(g), b1(g), b2(g);
    kernels::gamma_bilinears(b0.values(), b1.values(), b2.values(), psi.comp(0).values(),
                             psi.comp(1).values(), phi.comp(0).values(), phi.comp(1).values());
    fft::fft(b0);
    fft::fft(b1);
    fft::fft(b2);

    SlashField out(g);
    n_multiplier_hat(g, b0.values(), b1.values(), b2.values(), out.c0.values(), out.c1.values(),
                     out.c2.values());
    fft::ifft(out.c0);
    fft::ifft(out.c1);
    fft::ifft(out.c2);
    return out;
}

GaugeState reconstruct_gauge(const SpinorField& psi) {
    const Grid& g = psi.grid();
    auto j = dirac::dirac_current(psi);
    const int n = g.n;

    ScalarField j0 = spectral::to_hat(j[0]);
    ScalarField j1 = spectral::to_hat(j[1]);
    ScalarField j2 = spectral::to_hat(j[2]);

    GaugeState out(g);
    ScalarField a0(g), a1(g), a2(g);
    auto va0 = a0.values(), va1 = a1.values(), va2 = a2.values();
    auto vj0 = j0.values(), vj1 = j1.values(), vj2 = j2.values();
    // A_0 = 1/Delta (d2 J^1 - d1 J^2), A_1 = -1/Delta d2 J^0, A_2 = 1/Delta d1 J^0,
    // with the zero mode and Nyquist lines annihilated (see n_multiplier_hat).
    kernels::par_for(g.size(), [&](std::size_t i) {
        const int k1 = int(i) / n, k2 = int(i) % n;
        const double x1 = g.xi(k1), x2 = g.xi(k2);
        const double r2 = x1 * x1 + x2 * x2;
        if (r2 == 0.0 || k1 == n / 2 || k2 == n / 2) {
            va0[i] = va1[i] = va2[i] = cplx{0.0, 0.0};
            return;
        }
        const cplx il{-1.0 / r2, 0.0};
        const cplx d1{0.0, x1}, d2{0.0, x2};
        va0[i] = il * (d2 * vj1[i] - d1 * vj2[i]);
        va1[i] = -il * (d2 * vj0[i]);
        va2[i] = il * (d1 * vj0[i]);
    });
    fft::ifft(a0);
    fft::ifft(a1);
    fft::ifft(a2);
    out.a0 = std::move(a0);
    out.a.comp(0) = std::move(a1);
    out.a.comp(1) = std::move(a2);
    return out;
}

SlashField gauge_slash(const GaugeState& a) {
    SlashField s(a.grid());
    s.c0 = a.a0;
    s.c1 = a.a.comp(0);
    s.c2 = a.a.comp(1);
    return s;
}

namespace {

double l2_of_two(const ScalarField& u, const ScalarField& v) {
    const double s2 = kernels::sum_abs2(u.values()) + kernels::sum_abs2(v.values());
    return std::sqrt(s2 * u.grid().cell_area());
}

}  // namespace

std::vector<ResidualRow> gauge_residuals(std::span<const double> times,
                                         std::span<const SpinorField> psis,
                                         std::span<const GaugeState> gauges) {
    if (times.size() < 3) throw std::domain_error("gauge_residuals: need at least 3 snapshots");
    if (psis.size() != times.size() || gauges.size() != times.size())
        throw std::domain_error("gauge_residuals: misaligned trajectories");

    const Grid& g = psis[0].grid();
    std::vector<ResidualRow> rows(times.size());

    for (std::size_t k = 0; k < times.size(); ++k) {
        const GaugeState& a = gauges[k];
        auto j = dirac::dirac_current(psis[k]);

        ScalarField div(g);
        {
            ScalarField d1a1 = spectral::deriv(a.a.comp(0), 0);
            ScalarField d2a2 = spectral::deriv(a.a.comp(1), 1);
            auto vd = div.values();
            auto v1 = d1a1.values(), v2 = d2a2.values();
            kernels::par_for(g.size(), [&](std::size_t i) { vd[i] = v1[i] + v2[i]; });
        }

        ScalarField curl_err(g);
        {
            ScalarField d1a2 = spectral::deriv(a.a.comp(1), 0);
            ScalarField d2a1 = spectral::deriv(a.a.comp(0), 1);
            // J^0 adjusted to the resolvable modes: mean and Nyquist lines out
            ScalarField j0_adj = spectral::drop_nyquist(j[0]);
            const cplx j0_mean = spectral::mean(j0_adj);
            auto vc = curl_err.values();
            auto v1 = d1a2.values(), v2 = d2a1.values(), vj = j0_adj.values();
            kernels::par_for(g.size(),
                             [&](std::size_t i) { vc[i] = v1[i] - v2[i] - (vj[i] - j0_mean); });
        }

        rows[k].t = times[k];
        rows[k].res_coulomb = std::sqrt(kernels::sum_abs2(div.values()) * g.cell_area());
        rows[k].res_curl = std::sqrt(kernels::sum_abs2(curl_err.values()) * g.cell_area());
        rows[k].res_dynamic = std::numeric_limits<double>::quiet_NaN();
    }

    for (std::size_t k = 1; k + 1 < times.size(); ++k) {
        const double dt2 = times[k + 1] - times[k - 1];
        auto j = dirac::dirac_current(psis[k]);
        ScalarField g1 = spectral::deriv(gauges[k].a0, 0);
        ScalarField g2 = spectral::deriv(gauges[k].a0, 1);

        // W = (-J_2, J_1) = (J^2, -J^1), adjusted to the resolvable modes
        ScalarField j1_adj = spectral::drop_nyquist(j[1]);
        ScalarField j2_adj = spectral::drop_nyquist(j[2]);
        const cplx w1_mean = spectral::mean(j2_adj);
        const cplx w2_mean = -spectral::mean(j1_adj);

        ScalarField r1(g), r2(g);
        auto vr1 = r1.values(), vr2 = r2.values();
        auto ap1 = gauges[k + 1].a.comp(0).values(), am1 = gauges[k - 1].a.comp(0).values();
        auto ap2 = gauges[k + 1].a.comp(1).values(), am2 = gauges[k - 1].a.comp(1).values();
        auto vg1 = g1.values(), vg2 = g2.values();
        auto vj1 = j1_adj.values(), vj2 = j2_adj.values();
        kernels::par_for(g.size(), [&](std::size_t i) {
            vr1[i] = (ap1[i] - am1[i]) / dt2 - vg1[i] - (vj2[i] - w1_mean);
            vr2[i] = (ap2[i] - am2[i]) / dt2 - vg2[i] - (-vj1[i] - w2_mean);
        });
        rows[k].res_dynamic = l2_of_two(r1, r2);
    }
    return rows;
}

void write_residual_csv(const std::string& path, std::span<const ResidualRow> rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.precision(17);
    out << "t,res_coulomb,res_curl,res_dynamic\n";
    for (const auto& r : rows)
        out << r.t << ',' << r.res_coulomb << ',' << r.res_curl << ',' << r.res_dynamic << '\n';
}

}  // namespace csd::gauge
