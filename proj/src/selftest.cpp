#include "csd/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "csd/evolution.hpp"
#include "csd/kernels.hpp"
#include "csd/probes.hpp"
#include "csd/snapshot.hpp"

namespace csd {

namespace {

namespace sp = csd::spectral;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

void check(SelfTestReport& rep, const std::string& name, double residual, double tol) {
    rep.lines.push_back({name, residual <= tol, fmt(residual) + " (tol " + fmt(tol) + ")"});
}

void check_flag(SelfTestReport& rep, const std::string& name, bool pass,
                const std::string& detail = "") {
    rep.lines.push_back({name, pass, detail});
}

double rel_l2_diff(const ScalarField& a, const ScalarField& b) {
    ScalarField d = a;
    kernels::axpy(d.values(), cplx{-1.0, 0.0}, b.values());
    const double nb = sp::l2_norm(b);
    return nb == 0.0 ? sp::l2_norm(d) : sp::l2_norm(d) / nb;
}

double rel_l2_diff(const SpinorField& a, const SpinorField& b) {
    double num = 0.0, den = 0.0;
    for (int c = 0; c < 2; ++c) {
        ScalarField d = a.comp(c);
        kernels::axpy(d.values(), cplx{-1.0, 0.0}, b.comp(c).values());
        num += kernels::sum_abs2(d.values());
        den += kernels::sum_abs2(b.comp(c).values());
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

VectorField random_vector(const Grid& g, std::uint64_t seed) {
    lab::RandomDataSpec spec{g, 0.0, false, 0.0, 1.0, g.n / 3.0};
    VectorField b(g);
    // real content: take real part of complex random data
    for (int c = 0; c < 2; ++c) {
        ScalarField z = lab::random_scalar(spec, mix_seed(seed, c + 1));
        auto v = b.comp(c).values();
        auto zv = z.values();
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx{zv[i].real(), 0.0};
    }
    return b;
}

void run_size(SelfTestReport& rep, int n, bool corrupt_gamma) {
    const Grid g(n, 2.0 * pi);
    const std::string tag = " @" + std::to_string(n);
    const std::uint64_t seed = mix_seed(0xC5Dull, n);

    // gamma algebra (with the fault-injection hook)
    {
        dirac::GammaAlgebra alg;
        if (corrupt_gamma) alg.gamma[1][0] += cplx{1e-3, 0.0};
        const auto gr = dirac::check_gamma_algebra(alg);
        std::string failed;
        for (const auto& c : gr.checks)
            if (!c.pass) failed += (failed.empty() ? "" : "; ") + c.relation;
        check_flag(rep, "gamma algebra" + tag, gr.all_pass(),
                   gr.all_pass() ? "12 relations exact" : "failed: " + failed);
    }

    lab::RandomDataSpec sspec{g, 0.3, false, 0.0, 1.0, g.n / 3.0};
    const ScalarField f = lab::random_scalar(sspec, mix_seed(seed, 11));
    const SpinorField psi = lab::random_spinor(sspec, mix_seed(seed, 12));

    // dft round trip and Parseval
    {
        ScalarField rt = sp::from_hat(sp::to_hat(f));
        check(rep, "dft round trip" + tag, rel_l2_diff(rt, f), 1e-12);
        const double grid_l2 = sp::l2_norm(f);
        const double spec_l2 = sp::sobolev_norm(f, 0.0, false);
        check(rep, "Parseval" + tag, std::abs(grid_l2 - spec_l2) / grid_l2, 1e-10);
    }

    // fractional derivative group law
    {
        ScalarField rt = sp::frac_deriv(sp::frac_deriv(f, 0.7), -0.7);
        check(rep, "frac_deriv group law" + tag, rel_l2_diff(rt, f), 1e-10);
    }

    // inverse Laplacian round trip (f is mean-zero by construction)
    {
        ScalarField lap = sp::apply_multiplier(
            sp::inv_laplacian(f),
            sp::MultiplierSymbol{[](double x1, double x2) { return cplx{-(x1 * x1 + x2 * x2), 0.0}; },
                                 cplx{0.0, 0.0}});
        check(rep, "inv_laplacian round trip" + tag, rel_l2_diff(lap, f), 1e-10);
    }

    // Helmholtz projection algebra
    {
        VectorField b = random_vector(g, mix_seed(seed, 13));
        VectorField pc = sp::proj_curl_free(b);
        VectorField pd = sp::proj_div_free(b);
        double worst = 0.0;
        for (int c = 0; c < 2; ++c) {
            ScalarField sum = pc.comp(c);
            kernels::axpy(sum.values(), cplx{1.0, 0.0}, pd.comp(c).values());
            worst = std::max(worst, rel_l2_diff(sum, b.comp(c)));
        }
        check(rep, "P_cf + P_df = Id" + tag, worst, 1e-10);

        VectorField pcc = sp::proj_curl_free(pc);
        VectorField pdc = sp::proj_curl_free(pd);
        double idem = 0.0, annih = 0.0;
        const double scale = sp::l2_norm(b.comp(0)) + sp::l2_norm(b.comp(1));
        for (int c = 0; c < 2; ++c) {
            idem = std::max(idem, rel_l2_diff(pcc.comp(c), pc.comp(c)));
            annih = std::max(annih, sp::l2_norm(pdc.comp(c)) / scale);
        }
        check(rep, "projection idempotence" + tag, idem, 1e-10);
        check(rep, "projection annihilation" + tag, annih, 1e-10);

        ScalarField div_pd = sp::deriv(pd.comp(0), 0);
        kernels::axpy(div_pd.values(), cplx{1.0, 0.0}, sp::deriv(pd.comp(1), 1).values());
        ScalarField curl_pc = sp::deriv(pc.comp(1), 0);
        kernels::axpy(curl_pc.values(), cplx{-1.0, 0.0}, sp::deriv(pc.comp(0), 1).values());
        check(rep, "div P_df = curl P_cf = 0" + tag,
              (sp::l2_norm(div_pd) + sp::l2_norm(curl_pc)) / scale, 1e-10);
    }

    // Littlewood-Paley reconstruction
    {
        ScalarField sum(g);
        for (double lam : sp::dyadic_scales(g)) {
            ScalarField piece = sp::lp_project(f, lam);
            kernels::axpy(sum.values(), cplx{1.0, 0.0}, piece.values());
        }
        const cplx mu = sp::mean(f);
        auto v = sum.values();
        kernels::par_for(v.size(), [&](std::size_t i) { v[i] += mu; });
        check(rep, "LP reconstruction" + tag, rel_l2_diff(sum, f), 1e-10);
    }

    // half-wave projector algebra at every lattice point
    {
        const auto lp = dirac::half_wave_projectors(g);
        double worst = 0.0;
        for (std::size_t i = 1; i < g.size(); ++i) {  // idempotence holds away from xi = 0
            const dirac::Mat2 l{lp.p00[i], lp.p01[i], lp.p10[i], lp.p11[i]};
            const dirac::Mat2 l2 = dirac::mat_mul(l, l);
            const dirac::Mat2 lm{cplx{1, 0} - l[0], -l[1], -l[2], cplx{1, 0} - l[3]};
            const dirac::Mat2 prod = dirac::mat_mul(l, lm);
            for (int e = 0; e < 4; ++e) {
                worst = std::max(worst, std::abs(l2[e] - l[e]));
                worst = std::max(worst, std::abs(prod[e]));
            }
        }
        check(rep, "L+- projector algebra" + tag, worst, 1e-12);
    }

    // free propagator unitarity and group law
    {
        double worst_u = 0.0, worst_g = 0.0;
        const double l2 = sp::l2_norm(psi);
        for (int k = 0; k < 5; ++k) {
            const double t = 0.13 + 0.61 * k, s2 = 0.07 + 0.29 * k;
            SpinorField ut = dirac::free_propagator(psi, t);
            worst_u = std::max(worst_u, std::abs(sp::l2_norm(ut) - l2) / l2);
            SpinorField uts = dirac::free_propagator(ut, s2);
            SpinorField direct = dirac::free_propagator(psi, t + s2);
            worst_g = std::max(worst_g, rel_l2_diff(uts, direct));
        }
        check(rep, "propagator unitarity" + tag, worst_u, 1e-12);
        check(rep, "propagator group law" + tag, worst_g, 1e-10);
    }

    // currents: reality and J^0 = |psi|^2
    {
        auto j = dirac::dirac_current(psi);
        double imag = 0.0;
        for (const auto& comp : j) imag = std::max(imag, sp::max_imag_ratio(comp));
        check(rep, "current reality" + tag, imag, 1e-12);
        ScalarField j0(g);
        auto v = j0.values();
        auto p1 = psi.comp(0).values(), p2 = psi.comp(1).values();
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = cplx{std::norm(p1[i]) + std::norm(p2[i]), 0.0};
        check(rep, "J0 = |psi|^2" + tag, rel_l2_diff(j[0], j0), 1e-12);
    }

    // bilinear N: coefficient reality for phi = psi
    {
        gauge::SlashField nf = gauge::bilinear_n(psi, psi);
        const double imag = std::max({sp::max_imag_ratio(nf.c0), sp::max_imag_ratio(nf.c1),
                                      sp::max_imag_ratio(nf.c2)});
        check(rep, "N coefficient reality" + tag, imag, 1e-12);
    }

    // gauge constraints and the substitution identity
    {
        gauge::GaugeState a = gauge::reconstruct_gauge(psi);
        std::vector<double> times = {0.0, 0.1, 0.2};
        std::vector<SpinorField> psis = {psi, psi, psi};
        std::vector<gauge::GaugeState> gs = {a, a, a};
        auto rows = gauge::gauge_residuals(times, psis, gs);
        check(rep, "Coulomb constraint" + tag, rows[0].res_coulomb, 1e-10);
        check(rep, "curl constraint" + tag, rows[0].res_curl, 1e-10);

        SpinorField via_gauge = gauge::gauge_slash(a).apply(psi);
        SpinorField via_n = gauge::bilinear_n(psi, psi).apply(psi);
        check(rep, "substitution identity" + tag, rel_l2_diff(via_gauge, via_n), 1e-10);
    }

    // Duhamel source wiring: i g0 F == m psi - N psi
    {
        SpinorField ff = evolve::rhs(psi, 0.7);
        SpinorField lhs(g);
        const cplx iu{0.0, 1.0};
        for (int c = 0; c < 2; ++c) {
            auto o = lhs.comp(c).values();
            auto s = ff.comp(c).values();
            const cplx fac = (c == 0) ? iu : -iu;  // i gamma^0
            for (std::size_t i = 0; i < o.size(); ++i) o[i] = fac * s[i];
        }
        SpinorField want = gauge::bilinear_n(psi, psi).apply(psi);
        for (int c = 0; c < 2; ++c) {
            auto w = want.comp(c).values();
            auto p = psi.comp(c).values();
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.7 * p[i] - w[i];
        }
        check(rep, "source wiring identity" + tag, rel_l2_diff(lhs, want), 1e-10);
    }

    // stepper is exact on the free flow
    {
        evolve::Stepper st(g, 0.05, 0.0, /*zero_source=*/true);
        SpinorField stepped = st.step(psi, 0.0);
        SpinorField exact = dirac::free_propagator(psi, 0.05);
        check(rep, "free-flow step exactness" + tag, rel_l2_diff(stepped, exact), 1e-12);
    }

    // short nonlinear run: charge drift at integrator order
    {
        evolve::SimConfig cfg;
        cfg.n = n;
        cfg.dt = 0.002;
        cfg.t_final = 0.05;
        cfg.mass = 1.0;
        auto res = evolve::simulate(cfg, psi, false);
        check(rep, "charge drift, short run" + tag,
              evolve::charge_drift(res.step_charges).max_rel_drift, 1e-10);
    }

    // snapshot IO round trip
    {
        const std::string path = "/tmp/csd_selftest_snapshot.bin";
        io::write_snapshot(path, psi, 0.25);
        double t = 0.0;
        SpinorField back = io::read_snapshot_spinor(path, &t);
        bool same = t == 0.25 && back.grid() == psi.grid();
        for (int c = 0; c < 2 && same; ++c) {
            auto a = back.comp(c).values();
            auto b = psi.comp(c).values();
            for (std::size_t i = 0; i < a.size(); ++i)
                if (a[i] != b[i]) {
                    same = false;
                    break;
                }
        }
        check_flag(rep, "snapshot round trip" + tag, same, same ? "bit-exact" : "mismatch");
        std::remove(path.c_str());
    }

    // probe zero gates and per-seed determinism
    {
        lab::ProbeParams pp;
        pp.n = n;
        pp.time_samples = 8;
        pp.trials = 2;
        pp.scales = {2, 4};
        pp.s = 0.3;
        bool gates = true;
        for (const auto& name : lab::probe_names()) gates = gates && lab::zero_gate(name, pp);
        check_flag(rep, "probe zero gates" + tag, gates);

        auto r1 = lab::run_probe("homogeneous_product", pp);
        auto r2 = lab::run_probe("homogeneous_product", pp);
        bool identical = r1.size() == r2.size();
        for (std::size_t i = 0; i < r1.size() && identical; ++i)
            identical = r1[i].lhs == r2[i].lhs && r1[i].ratio == r2[i].ratio &&
                        r1[i].seed == r2[i].seed;
        check_flag(rep, "probe determinism" + tag, identical,
                   identical ? "bit-identical records" : "records differ");
    }
}

}  // namespace

SelfTestReport selftest(const std::vector<int>& sizes, bool corrupt_gamma) {
    SelfTestReport rep;
    for (int n : sizes) run_size(rep, n, corrupt_gamma);
    return rep;
}

std::string format_report(const SelfTestReport& rep) {
    std::ostringstream os;
    for (const auto& l : rep.lines)
        os << (l.pass ? "[ok]   " : "[FAIL] ") << l.name
           << (l.detail.empty() ? "" : "  " + l.detail) << "\n";
    os << (rep.all_pass() ? "selftest: all checks passed\n" : "selftest: FAILURES present\n");
    return os.str();
}

}  // namespace csd
