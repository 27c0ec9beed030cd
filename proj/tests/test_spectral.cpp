#include <doctest.h>

#include <random>

#include "csd/kernels.hpp"
#include "csd/spectral.hpp"

using namespace csd;
namespace sp = csd::spectral;

namespace {

ScalarField random_field(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ScalarField f(g);
    for (auto& v : f.values())
        v = cplx{double(rng() >> 11) * 0x1p-53 - 0.5, double(rng() >> 11) * 0x1p-53 - 0.5};
    return f;
}

ScalarField zero_mean(ScalarField f) {
    const cplx mu = sp::mean(f);
    for (auto& v : f.values()) v -= mu;
    return f;
}

/// Plane wave exp(2 pi i (k1 j1 + k2 j2)/N) = exp(i xi_k . x) on the grid.
ScalarField wave(const Grid& g, int k1, int k2, cplx amp = cplx{1.0, 0.0}) {
    ScalarField f(g);
    for (int j1 = 0; j1 < g.n; ++j1)
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double th = 2.0 * pi * (double(k1) * j1 + double(k2) * j2) / g.n;
            f(j1, j2) = amp * cplx{std::cos(th), std::sin(th)};
        }
    return f;
}

/// Brute-force O(N^4) DFT, the independent oracle for the FFT path.
ScalarField dft_oracle(const ScalarField& f) {
    const Grid& g = f.grid();
    const int n = g.n;
    ScalarField out(g);
    for (int k1 = 0; k1 < n; ++k1)
        for (int k2 = 0; k2 < n; ++k2) {
            cplx acc{0.0, 0.0};
            for (int j1 = 0; j1 < n; ++j1)
                for (int j2 = 0; j2 < n; ++j2) {
                    const double th = -2.0 * pi * (double(k1) * j1 + double(k2) * j2) / n;
                    acc += f(j1, j2) * cplx{std::cos(th), std::sin(th)};
                }
            out(k1, k2) = acc;
        }
    return out;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double rel_l2(const ScalarField& a, const ScalarField& b) {
    ScalarField d = a;
    kernels::axpy(d.values(), cplx{-1.0, 0.0}, b.values());
    const double nb = sp::l2_norm(b);
    return nb == 0.0 ? sp::l2_norm(d) : sp::l2_norm(d) / nb;
}

}  // namespace

TEST_CASE("dft: constant field populates only the zero mode") {
    const Grid g(8, 2.0 * pi);
    ScalarField f(g, cplx{0.7, -0.2});
    ScalarField fh = sp::to_hat(f);
    CHECK(std::abs(fh(0, 0) - cplx{0.7, -0.2} * double(g.size())) < 1e-10);
    fh(0, 0) = 0.0;
    CHECK(kernels::max_abs(fh.values()) < 1e-10);
}

TEST_CASE("dft: pure mode lands on a single coefficient") {
    const Grid g(16, 2.0 * pi);
    ScalarField fh = sp::to_hat(wave(g, 1, 0));
    CHECK(std::abs(fh(1, 0) - cplx{double(g.size()), 0.0}) < 1e-9);
    fh(1, 0) = 0.0;
    CHECK(kernels::max_abs(fh.values()) < 1e-9);
}

TEST_CASE("dft matches the brute-force O(N^4) summation at 8x8") {
    const Grid g(8, 2.0 * pi);
    const ScalarField f = random_field(g, 99);
    const ScalarField fast = sp::to_hat(f);
    const ScalarField slow = dft_oracle(f);
    CHECK(max_diff(fast, slow) < 1e-10);
}

TEST_CASE("dft round trip and Parseval") {
    const Grid g(64, 5.0);
    const ScalarField f = random_field(g, 5);
    CHECK(rel_l2(sp::from_hat(sp::to_hat(f)), f) < 1e-12);
    const double grid_norm = sp::l2_norm(f);
    const double coef_norm = sp::sobolev_norm(f, 0.0, false);
    CHECK(std::abs(grid_norm - coef_norm) < 1e-10 * grid_norm);
}

TEST_CASE("apply_multiplier: identity symbol") {
    const Grid g(16, 2.0 * pi);
    const ScalarField f = random_field(g, 6);
    const sp::MultiplierSymbol one{[](double, double) { return cplx{1.0, 0.0}; }, {}};
    CHECK(rel_l2(sp::apply_multiplier(f, one), f) < 1e-12);
}

TEST_CASE("apply_multiplier: i xi_1 on a plane wave is an eigenvalue") {
    const Grid g(16, 2.0 * pi);
    const ScalarField f = wave(g, 1, 0);
    const sp::MultiplierSymbol dx{[](double x1, double) { return cplx{0.0, x1}; }, {}};
    ScalarField want = f;
    kernels::scale(want.values(), cplx{0.0, 1.0});  // i * (2 pi / L) = i for L = 2 pi
    CHECK(rel_l2(sp::apply_multiplier(f, dx), want) < 1e-12);
}

TEST_CASE("apply_multiplier: |xi|^1/2 matches coefficient-wise oracle at 16x16") {
    const Grid g(16, 2.0 * pi);
    const ScalarField f = random_field(g, 7);
    const ScalarField got = sp::frac_deriv(f, 0.5);
    // independent pipeline through the brute-force DFT
    ScalarField hat = dft_oracle(f);
    for (int k1 = 0; k1 < g.n; ++k1)
        for (int k2 = 0; k2 < g.n; ++k2) {
            const double r = std::hypot(g.xi(k1), g.xi(k2));
            hat(k1, k2) *= (r == 0.0 ? 0.0 : std::sqrt(r));
        }
    // inverse by conjugate brute force
    ScalarField want(g);
    for (int j1 = 0; j1 < g.n; ++j1)
        for (int j2 = 0; j2 < g.n; ++j2) {
            cplx acc{0.0, 0.0};
            for (int k1 = 0; k1 < g.n; ++k1)
                for (int k2 = 0; k2 < g.n; ++k2) {
                    const double th = 2.0 * pi * (double(k1) * j1 + double(k2) * j2) / g.n;
                    acc += hat(k1, k2) * cplx{std::cos(th), std::sin(th)};
                }
            want(j1, j2) = acc / double(g.size());
        }
    CHECK(max_diff(got, want) < 1e-10);
}

TEST_CASE("apply_multiplier: singular symbol without zero rule is rejected") {
    const Grid g(8, 2.0 * pi);
    const sp::MultiplierSymbol bad{
        [](double x1, double x2) { return cplx{1.0 / (x1 * x1 + x2 * x2), 0.0}; }, {}};
    CHECK_THROWS_AS(sp::make_table(g, bad), std::domain_error);
    const sp::MultiplierSymbol good{
        [](double x1, double x2) { return cplx{1.0 / (x1 * x1 + x2 * x2), 0.0}; }, cplx{0.0, 0.0}};
    CHECK_NOTHROW(sp::make_table(g, good));
}

TEST_CASE("frac_deriv: a = 0 is the identity") {
    const Grid g(16, 2.0 * pi);
    const ScalarField f = random_field(g, 8);
    CHECK(rel_l2(sp::frac_deriv(f, 0.0), f) == 0.0);
}

TEST_CASE("frac_deriv: plane wave at k=(3,4) scales by 5^a") {
    const Grid g(32, 2.0 * pi);
    const ScalarField f = wave(g, 3, 4);
    for (double a : {0.5, 1.0, -1.0, 2.0}) {
        ScalarField want = f;
        kernels::scale(want.values(), cplx{std::pow(5.0, a), 0.0});
        CHECK(rel_l2(sp::frac_deriv(f, a), want) < 1e-12);
    }
}

TEST_CASE("frac_deriv: a = 2 equals the -Laplacian symbol") {
    const Grid g(32, 2.0 * pi);
    const ScalarField f = zero_mean(random_field(g, 9));
    const sp::MultiplierSymbol mlap{
        [](double x1, double x2) { return cplx{x1 * x1 + x2 * x2, 0.0}; }, {}};
    CHECK(rel_l2(sp::frac_deriv(f, 2.0), sp::apply_multiplier(f, mlap)) < 1e-10);
}

TEST_CASE("frac_deriv group law on mean-zero fields") {
    const Grid g(32, 2.0 * pi);
    const ScalarField f = zero_mean(random_field(g, 10));
    for (double a : {0.3, 1.2}) {
        CHECK(rel_l2(sp::frac_deriv(sp::frac_deriv(f, a), -a), f) < 1e-10);
    }
    // |nab|^a |nab|^b = |nab|^{a+b}
    CHECK(rel_l2(sp::frac_deriv(sp::frac_deriv(f, 0.4), 0.8), sp::frac_deriv(f, 1.2)) < 1e-10);
}

TEST_CASE("inv_laplacian: constant annihilated, plane wave scaled by -1/|xi|^2") {
    const Grid g(16, 2.0 * pi);
    CHECK(sp::l2_norm(sp::inv_laplacian(ScalarField(g, cplx{3.0, 0.0}))) == 0.0);
    const ScalarField f = wave(g, 1, 0);
    ScalarField want = f;
    kernels::scale(want.values(), cplx{-1.0, 0.0});
    CHECK(rel_l2(sp::inv_laplacian(f), want) < 1e-12);
}

TEST_CASE("inv_laplacian round trip on mean-zero fields") {
    const Grid g(32, 3.0);
    const ScalarField f = zero_mean(random_field(g, 11));
    const sp::MultiplierSymbol lap{[](double x1, double x2) { return cplx{-(x1 * x1 + x2 * x2), 0.0}; },
                                   cplx{0.0, 0.0}};
    CHECK(rel_l2(sp::apply_multiplier(sp::inv_laplacian(f), lap), f) < 1e-10);
}

TEST_CASE("Helmholtz projections: gradient and perp-gradient inputs") {
    const Grid g(32, 2.0 * pi);
    // Nyquist-free potential: the discrete gradient is a true gradient exactly
    // on these modes (first derivatives annihilate the Nyquist lines).
    const ScalarField h = sp::drop_nyquist(zero_mean(random_field(g, 12)));
    VectorField grad(g), perp(g);
    grad.comp(0) = sp::deriv(h, 0);
    grad.comp(1) = sp::deriv(h, 1);
    perp.comp(0) = sp::deriv(h, 1);
    kernels::scale(perp.comp(0).values(), cplx{-1.0, 0.0});
    perp.comp(1) = sp::deriv(h, 0);

    VectorField pc = sp::proj_curl_free(grad);
    VectorField pd = sp::proj_div_free(grad);
    CHECK(rel_l2(pc.comp(0), grad.comp(0)) < 1e-10);
    CHECK(rel_l2(pc.comp(1), grad.comp(1)) < 1e-10);
    CHECK(sp::l2_norm(pd.comp(0)) + sp::l2_norm(pd.comp(1)) < 1e-10);

    VectorField qc = sp::proj_curl_free(perp);
    VectorField qd = sp::proj_div_free(perp);
    CHECK(rel_l2(qd.comp(0), perp.comp(0)) < 1e-10);
    CHECK(rel_l2(qd.comp(1), perp.comp(1)) < 1e-10);
    CHECK(sp::l2_norm(qc.comp(0)) + sp::l2_norm(qc.comp(1)) < 1e-10);
}

TEST_CASE("Helmholtz projections are L2-orthogonal on random mean-zero fields") {
    const Grid g(32, 2.0 * pi);
    VectorField b(g);
    b.comp(0) = zero_mean(random_field(g, 13));
    b.comp(1) = zero_mean(random_field(g, 14));
    VectorField pc = sp::proj_curl_free(b);
    VectorField pd = sp::proj_div_free(b);
    cplx inner{0.0, 0.0};
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < g.size(); ++i)
            inner += std::conj(pc.comp(c)[i]) * pd.comp(c)[i] * g.cell_area();
    double scale = sp::l2_norm(b.comp(0)) + sp::l2_norm(b.comp(1));
    CHECK(std::abs(inner) < 1e-10 * scale * scale);
}

TEST_CASE("Littlewood-Paley: sharp cutoff conventions on plane waves") {
    const Grid g(32, 2.0 * pi);
    const ScalarField f1 = wave(g, 1, 0);  // |xi| = 1
    CHECK(rel_l2(sp::lp_project(f1, 1.0), f1) < 1e-12);  // kept: lam/2 < 1 <= lam
    const ScalarField f8 = wave(g, 8, 0);  // |xi| = 8
    CHECK(sp::l2_norm(sp::lp_project(f8, 1.0)) < 1e-12 * sp::l2_norm(f8));
}

TEST_CASE("Littlewood-Paley: dyadic shells reconstruct the field") {
    const Grid g(64, 2.0 * pi);
    const ScalarField f = random_field(g, 15);
    ScalarField sum(g);
    for (double lam : sp::dyadic_scales(g)) {
        ScalarField piece = sp::lp_project(f, lam);
        kernels::axpy(sum.values(), cplx{1.0, 0.0}, piece.values());
    }
    const cplx mu = sp::mean(f);
    for (auto& v : sum.values()) v += mu;
    CHECK(rel_l2(sum, f) < 1e-10);
}

TEST_CASE("Littlewood-Paley: out-of-range scale returns zero with a flag") {
    const Grid g(16, 2.0 * pi);
    bool ok = true;
    ScalarField z = sp::lp_project(random_field(g, 16), 1e6, &ok);
    CHECK_FALSE(ok);
    CHECK(sp::l2_norm(z) == 0.0);
    sp::lp_project(random_field(g, 16), 2.0, &ok);
    CHECK(ok);
}

TEST_CASE("sobolev_norm: zero field, Parseval case, single-mode weight") {
    const Grid g(32, 2.0 * pi);
    CHECK(sp::sobolev_norm(ScalarField(g), 0.7, true) == 0.0);
    const ScalarField f = random_field(g, 17);
    CHECK(std::abs(sp::sobolev_norm(f, 0.0, false) - sp::l2_norm(f)) < 1e-10 * sp::l2_norm(f));
    const ScalarField w = wave(g, 3, 4, cplx{0.25, 0.0});
    CHECK(std::abs(sp::sobolev_norm(w, 1.0, true) - 5.0 * sp::l2_norm(w)) <
          1e-10 * sp::l2_norm(w));
}

TEST_CASE("mixed_norm: constant-in-time path and q = infinity") {
    const Grid g(16, 2.0 * pi);
    const ScalarField u0 = random_field(g, 18);
    std::vector<double> times = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<ScalarField> snaps(times.size(), u0);
    const double lr = sp::lp_norm(u0, 2.0);
    // |I|^{1/q} ||u0||_r with |I| = 1
    CHECK(std::abs(sp::mixed_norm(times, snaps, 3.0, 2.0, 0.0, 1.0) - lr) < 1e-10 * lr);
    CHECK(std::abs(sp::mixed_norm(times, snaps, sp::inf, 2.0, 0.0, 1.0) - lr) < 1e-12 * lr);
}

TEST_CASE("mixed_norm: two-snapshot trapezoid value") {
    const Grid g(16, 2.0 * pi);
    ScalarField u0 = random_field(g, 19);
    ScalarField u1 = random_field(g, 20);
    std::vector<double> times = {0.0, 0.4};
    std::vector<ScalarField> snaps = {u0, u1};
    const double v0 = sp::lp_norm(u0, 2.0), v1 = sp::lp_norm(u1, 2.0);
    const double want = 0.4 * 0.5 * (v0 + v1);
    CHECK(std::abs(sp::mixed_norm(times, snaps, 1.0, 2.0, 0.0, 0.4) - want) < 1e-12 * want);
}

TEST_CASE("mixed_norm: empty trajectory is a domain error") {
    std::vector<double> times;
    std::vector<ScalarField> snaps;
    CHECK_THROWS_AS(sp::mixed_norm(times, snaps, 2.0, 2.0, 0.0, 1.0), std::domain_error);
}

TEST_CASE("resample: up then down is the identity") {
    const Grid g(16, 2.0 * pi);
    const ScalarField f = random_field(g, 21);
    const ScalarField up = sp::resample(f, 32);
    const ScalarField back = sp::resample(up, 16);
    CHECK(rel_l2(back, f) < 1e-12);
    // band-limited content is reproduced exactly at the common points
    const ScalarField w = wave(g, 3, -2);
    const ScalarField wup = sp::resample(w, 32);
    double worst = 0.0;
    for (int j1 = 0; j1 < 16; ++j1)
        for (int j2 = 0; j2 < 16; ++j2)
            worst = std::max(worst, std::abs(wup(2 * j1, 2 * j2) - w(j1, j2)));
    CHECK(worst < 1e-12);
}

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(Grid(12, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid(2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid(8, 0.0), std::invalid_argument);
    const Grid g(8, 2.0 * pi);
    CHECK(g.mode(4) == -4);  // Nyquist
    CHECK(g.mode(7) == -1);
    CHECK(g.xi(1) == doctest::Approx(1.0));
}
