#include <doctest.h>

#include "csd/evolution.hpp"
#include "csd/gauge.hpp"
#include "csd/kernels.hpp"
#include "csd/random_data.hpp"

using namespace csd;
using dirac::Mat2;
namespace sp = csd::spectral;

namespace {

SpinorField random_spinor(const Grid& g, std::uint64_t seed) {
    lab::RandomDataSpec spec{g, 0.3, false, 0.0, 1.0, g.n / 3.0};
    return lab::random_spinor(spec, seed);
}

double rel_l2(const ScalarField& a, const ScalarField& b) {
    ScalarField d = a;
    kernels::axpy(d.values(), cplx{-1.0, 0.0}, b.values());
    const double nb = sp::l2_norm(b);
    return nb == 0.0 ? sp::l2_norm(d) : sp::l2_norm(d) / nb;
}

double rel_l2(const SpinorField& a, const SpinorField& b) {
    double num = 0.0, den = 0.0;
    for (int c = 0; c < 2; ++c) {
        ScalarField d = a.comp(c);
        kernels::axpy(d.values(), cplx{-1.0, 0.0}, b.comp(c).values());
        num += kernels::sum_abs2(d.values());
        den += kernels::sum_abs2(b.comp(c).values());
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

SpinorField scaled(const SpinorField& f, cplx a) {
    SpinorField out = f;
    for (int c = 0; c < 2; ++c) kernels::scale(out.comp(c).values(), a);
    return out;
}

}  // namespace

TEST_CASE("bilinear N vanishes on zero and constant inputs") {
    const Grid g(16, 2.0 * pi);
    const SpinorField zero(g);
    const SpinorField psi = random_spinor(g, 1);
    auto all_zero = [](const gauge::SlashField& nf) {
        return kernels::max_abs(nf.c0.values()) == 0.0 && kernels::max_abs(nf.c1.values()) == 0.0 &&
               kernels::max_abs(nf.c2.values()) == 0.0;
    };
    CHECK(all_zero(gauge::bilinear_n(zero, psi)));
    CHECK(all_zero(gauge::bilinear_n(psi, zero)));
    SpinorField cst(g);
    for (auto& v : cst.comp(0).values()) v = cplx{0.3, 0.1};
    for (auto& v : cst.comp(1).values()) v = cplx{-0.2, 0.5};
    const gauge::SlashField nf = gauge::bilinear_n(cst, cst);
    CHECK(kernels::max_abs(nf.c0.values()) < 1e-14);
    CHECK(kernels::max_abs(nf.c1.values()) < 1e-14);
    CHECK(kernels::max_abs(nf.c2.values()) < 1e-14);
}

TEST_CASE("bilinear N matches a re-composition from separately tested primitives") {
    const Grid g(16, 2.0 * pi);
    const SpinorField psi = random_spinor(g, 2);
    const SpinorField phi = random_spinor(g, 3);
    const gauge::SlashField got = gauge::bilinear_n(psi, phi);

    // independent pipeline: matrix-oracle bilinears, multiplier-symbol
    // derivatives, inv_laplacian, composed step by step
    const dirac::GammaAlgebra ga;
    ScalarField b[3] = {ScalarField(g), ScalarField(g), ScalarField(g)};
    for (int nu = 0; nu < 3; ++nu) {
        const Mat2 m = dirac::mat_mul(ga.gamma[0], ga.gamma[nu]);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const cplx p1 = psi.comp(0)[i], p2 = psi.comp(1)[i];
            const cplx q1 = phi.comp(0)[i], q2 = phi.comp(1)[i];
            b[nu][i] = std::conj(p1) * (m[0] * q1 + m[1] * q2) +
                       std::conj(p2) * (m[2] * q1 + m[3] * q2);
        }
    }
    ScalarField c0 = sp::deriv(b[1], 1);
    kernels::axpy(c0.values(), cplx{-1.0, 0.0}, sp::deriv(b[2], 0).values());
    c0 = sp::drop_nyquist(sp::inv_laplacian(c0));
    ScalarField c1 = sp::drop_nyquist(sp::inv_laplacian(sp::deriv(b[0], 1)));
    kernels::scale(c1.values(), cplx{-1.0, 0.0});
    ScalarField c2 = sp::drop_nyquist(sp::inv_laplacian(sp::deriv(b[0], 0)));

    CHECK(rel_l2(got.c0, c0) < 1e-10);
    CHECK(rel_l2(got.c1, c1) < 1e-10);
    CHECK(rel_l2(got.c2, c2) < 1e-10);
}

TEST_CASE("bilinear N is sesquilinear") {
    const Grid g(16, 2.0 * pi);
    const SpinorField psi = random_spinor(g, 4);
    const SpinorField phi = random_spinor(g, 5);
    const cplx a{0.6, -1.1}, bb{-0.4, 0.9};

    const gauge::SlashField left = gauge::bilinear_n(scaled(psi, a), scaled(phi, bb));
    gauge::SlashField want = gauge::bilinear_n(psi, phi);
    const cplx fac = std::conj(a) * bb;
    kernels::scale(want.c0.values(), fac);
    kernels::scale(want.c1.values(), fac);
    kernels::scale(want.c2.values(), fac);
    CHECK(rel_l2(left.c0, want.c0) < 1e-12);
    CHECK(rel_l2(left.c1, want.c1) < 1e-12);
    CHECK(rel_l2(left.c2, want.c2) < 1e-12);
}

TEST_CASE("bilinear N coefficients are real when phi = psi") {
    const Grid g(32, 2.0 * pi);
    const SpinorField psi = random_spinor(g, 6);
    const gauge::SlashField nf = gauge::bilinear_n(psi, psi);
    CHECK(sp::max_imag_ratio(nf.c0) < 1e-12);
    CHECK(sp::max_imag_ratio(nf.c1) < 1e-12);
    CHECK(sp::max_imag_ratio(nf.c2) < 1e-12);
}

TEST_CASE("reconstruct_gauge: zero and constant spinors give the zero gauge") {
    const Grid g(16, 2.0 * pi);
    const gauge::GaugeState a0 = gauge::reconstruct_gauge(SpinorField(g));
    CHECK(kernels::max_abs(a0.a0.values()) == 0.0);
    CHECK(kernels::max_abs(a0.a.comp(0).values()) == 0.0);
    CHECK(kernels::max_abs(a0.a.comp(1).values()) == 0.0);

    SpinorField cst(g);
    for (auto& v : cst.comp(0).values()) v = cplx{0.8, -0.1};
    const gauge::GaugeState a1 = gauge::reconstruct_gauge(cst);
    CHECK(kernels::max_abs(a1.a0.values()) < 1e-13);
    CHECK(kernels::max_abs(a1.a.comp(0).values()) < 1e-13);
    CHECK(kernels::max_abs(a1.a.comp(1).values()) < 1e-13);
}

TEST_CASE("reconstruct_gauge satisfies the constraint equations") {
    const Grid g(32, 2.0 * pi);
    for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
        const SpinorField psi = random_spinor(g, seed);
        const gauge::GaugeState a = gauge::reconstruct_gauge(psi);

        // components real and mean-zero
        CHECK(sp::max_imag_ratio(a.a0) < 1e-12);
        CHECK(sp::max_imag_ratio(a.a.comp(0)) < 1e-12);
        CHECK(std::abs(sp::mean(a.a0)) < 1e-13);

        // Coulomb condition
        ScalarField div = sp::deriv(a.a.comp(0), 0);
        kernels::axpy(div.values(), cplx{1.0, 0.0}, sp::deriv(a.a.comp(1), 1).values());
        CHECK(sp::l2_norm(div) < 1e-10);

        // curl constraint: d1 A2 - d2 A1 = J0 adjusted to the resolvable modes
        auto j = dirac::dirac_current(psi);
        const ScalarField j0 = sp::drop_nyquist(j[0]);
        ScalarField curl = sp::deriv(a.a.comp(1), 0);
        kernels::axpy(curl.values(), cplx{-1.0, 0.0}, sp::deriv(a.a.comp(0), 1).values());
        const cplx mu = sp::mean(j0);
        for (std::size_t i = 0; i < g.size(); ++i) curl[i] -= (j0[i] - mu);
        CHECK(sp::l2_norm(curl) < 1e-10);
    }
}

TEST_CASE("substitution identity: A_mu gamma^mu psi equals N(psi,psi) psi") {
    const Grid g(32, 2.0 * pi);
    for (std::uint64_t seed = 20; seed < 25; ++seed) {
        const SpinorField psi = random_spinor(g, seed);
        const SpinorField via_gauge = gauge::gauge_slash(gauge::reconstruct_gauge(psi)).apply(psi);
        const SpinorField via_n = gauge::bilinear_n(psi, psi).apply(psi);
        CHECK(rel_l2(via_gauge, via_n) < 1e-10);
    }
}

TEST_CASE("gauge_residuals: zero trajectory, reconstructed constraints, input validation") {
    const Grid g(16, 2.0 * pi);
    std::vector<double> times = {0.0, 0.1, 0.2};
    std::vector<SpinorField> zeros(3, SpinorField(g));
    std::vector<gauge::GaugeState> zgauges(3, gauge::GaugeState(g));
    auto rows = gauge::gauge_residuals(times, zeros, zgauges);
    CHECK(rows.size() == 3);
    CHECK(rows[0].res_coulomb == 0.0);
    CHECK(rows[0].res_curl == 0.0);
    CHECK(rows[1].res_dynamic == 0.0);
    CHECK(std::isnan(rows[0].res_dynamic));

    const SpinorField psi = random_spinor(g, 33);
    std::vector<SpinorField> psis(3, psi);
    std::vector<gauge::GaugeState> gauges;
    for (int k = 0; k < 3; ++k) gauges.push_back(gauge::reconstruct_gauge(psi));
    rows = gauge::gauge_residuals(times, psis, gauges);
    for (const auto& r : rows) {
        CHECK(r.res_coulomb < 1e-10);
        CHECK(r.res_curl < 1e-10);
    }

    std::vector<double> two_times = {0.0, 0.1};
    std::vector<SpinorField> two(2, psi);
    std::vector<gauge::GaugeState> twog(2, gauge::GaugeState(g));
    CHECK_THROWS_AS(gauge::gauge_residuals(two_times, two, twog), std::domain_error);
}

TEST_CASE("dynamic gauge residual converges at second order in dt") {
    const Grid g(32, 2.0 * pi);
    lab::RandomDataSpec spec{g, 0.45, false, 0.0, 2.0, 6.0};
    const SpinorField f = lab::random_spinor(spec, 55);

    auto mid_residual = [&](double dt) {
        evolve::SimConfig cfg;
        cfg.n = g.n;
        cfg.dt = dt;
        cfg.t_final = 0.16;  // same physical midpoint for both step sizes
        cfg.mass = 0.5;
        cfg.snapshot_stride = 1;
        auto res = evolve::simulate(cfg, f, true);
        auto rows = gauge::gauge_residuals(res.traj.times, res.traj.snaps, res.traj.gauges);
        return rows[rows.size() / 2].res_dynamic;
    };

    const double r1 = mid_residual(0.02);
    const double r2 = mid_residual(0.01);
    CHECK(r1 / r2 > 3.0);  // centered differences: ratio ~ 4
}
