#include "csd/dirac.hpp"

#include <cmath>
#include <sstream>

#include "csd/kernels.hpp"

namespace csd::dirac {

namespace {

bool mat_equal(const Mat2& a, const Mat2& b) {
    for (int i = 0; i < 4; ++i)
        if (a[i] != b[i]) return false;
    return true;
}

}  // namespace

GammaReport check_gamma_algebra(const GammaAlgebra& g) {
    GammaReport rep;
    for (int mu = 0; mu < 3; ++mu) {
        for (int nu = 0; nu < 3; ++nu) {
            const Mat2 anti = mat_add(mat_mul(g.gamma[mu], g.gamma[nu]), mat_mul(g.gamma[nu], g.gamma[mu]));
            const double gmunu = (mu == nu) ? GammaAlgebra::metric[mu] : 0.0;
            const Mat2 want = mat_scale(cplx{2.0 * gmunu, 0.0}, mat_id());
            std::ostringstream os;
            os << "g" << mu << " g" << nu << " + g" << nu << " g" << mu << " = 2 g^{" << mu << nu
               << "} I";
            rep.checks.push_back({os.str(), mat_equal(anti, want)});
        }
    }
    rep.checks.push_back({"(g0)^dag = g0", mat_equal(mat_dagger(g.gamma[0]), g.gamma[0])});
    rep.checks.push_back(
        {"(g1)^dag = -g1", mat_equal(mat_dagger(g.gamma[1]), mat_scale(cplx{-1, 0}, g.gamma[1]))});
    rep.checks.push_back(
        {"(g2)^dag = -g2", mat_equal(mat_dagger(g.gamma[2]), mat_scale(cplx{-1, 0}, g.gamma[2]))});
    return rep;
}

std::array<ScalarField, 3> dirac_current(const SpinorField& psi) {
    const Grid& g = psi.grid();
    std::array<ScalarField, 3> j{ScalarField(g), ScalarField(g), ScalarField(g)};
    kernels::gamma_bilinears(j[0].values(), j[1].values(), j[2].values(), psi.comp(0).values(),
                             psi.comp(1).values(), psi.comp(0).values(), psi.comp(1).values());
    return j;
}

ScalarField half_wave(const ScalarField& f, double t, int sign) {
    return spectral::apply_table(f, spectral::half_wave_table(f.grid(), t, sign));
}

SpinorField half_wave(const SpinorField& f, double t, int sign) {
    return spectral::apply_table(f, spectral::half_wave_table(f.grid(), t, sign));
}

ProjectorTables half_wave_projectors(const Grid& g) {
    ProjectorTables lp;
    lp.p00.resize(g.size());
    lp.p01.resize(g.size());
    lp.p10.resize(g.size());
    lp.p11.resize(g.size());
    const int n = g.n;
    kernels::par_for(g.size(), [&](std::size_t i) {
        const double x1 = g.xi(int(i) / n), x2 = g.xi(int(i) % n);
        const double r = std::hypot(x1, x2);
        if (r == 0.0) {
            lp.p00[i] = lp.p11[i] = cplx{0.5, 0.0};
            lp.p01[i] = lp.p10[i] = cplx{0.0, 0.0};
            return;
        }
        const cplx w{x2, x1};
        lp.p00[i] = lp.p11[i] = cplx{0.5, 0.0};
        lp.p01[i] = -0.5 * w / r;
        lp.p10[i] = -0.5 * std::conj(w) / r;
    });
    return lp;
}

namespace {

SpinorField apply_projector(const SpinorField& f, const ProjectorTables& lp, bool plus) {
    SpinorField out(f.grid());
    SpinorField fhat(f.grid());
    for (int c = 0; c < 2; ++c) fhat.comp(c) = spectral::to_hat(f.comp(c));
    const std::size_t n = f.size();
    auto o1 = out.comp(0).values(), o2 = out.comp(1).values();
    auto i1 = fhat.comp(0).values(), i2 = fhat.comp(1).values();
    if (plus) {
        kernels::apply_mat2(o1, o2, i1, i2, {lp.p00.data(), n}, {lp.p01.data(), n},
                            {lp.p10.data(), n}, {lp.p11.data(), n});
    } else {
        // L_- = I - L_+
        kernels::par_for(n, [&](std::size_t i) {
            const cplx a = i1[i], b = i2[i];
            o1[i] = (cplx{1, 0} - lp.p00[i]) * a - lp.p01[i] * b;
            o2[i] = -lp.p10[i] * a + (cplx{1, 0} - lp.p11[i]) * b;
        });
    }
    fft::ifft(out.comp(0));
    fft::ifft(out.comp(1));
    return out;
}

}  // namespace

SpinorField apply_lplus(const SpinorField& f, const ProjectorTables& lp) {
    return apply_projector(f, lp, true);
}

SpinorField apply_lminus(const SpinorField& f, const ProjectorTables& lp) {
    return apply_projector(f, lp, false);
}

PropagatorTable make_propagator(const Grid& g, double t) {
    PropagatorTable u;
    u.m00.resize(g.size());
    u.m01.resize(g.size());
    u.m10.resize(g.size());
    u.m11.resize(g.size());
    const int n = g.n;
    kernels::par_for(g.size(), [&](std::size_t i) {
        const double x1 = g.xi(int(i) / n), x2 = g.xi(int(i) % n);
        const double r = std::hypot(x1, x2);
        const double c = std::cos(t * r), s = std::sin(t * r);
        u.m00[i] = u.m11[i] = cplx{c, 0.0};
        if (r == 0.0) {
            u.m01[i] = u.m10[i] = cplx{0.0, 0.0};
        } else {
            const cplx w{x2, x1};
            u.m01[i] = cplx{0.0, -s} * (w / r);
            u.m10[i] = cplx{0.0, -s} * (std::conj(w) / r);
        }
    });
    return u;
}

void apply_propagator_hat(SpinorField& fhat, const PropagatorTable& u) {
    const std::size_t n = fhat.size();
    SpinorField tmp = fhat;
    kernels::apply_mat2(fhat.comp(0).values(), fhat.comp(1).values(), tmp.comp(0).values(),
                        tmp.comp(1).values(), {u.m00.data(), n}, {u.m01.data(), n},
                        {u.m10.data(), n}, {u.m11.data(), n});
}

SpinorField apply_propagator(const SpinorField& f, const PropagatorTable& u) {
    SpinorField fhat(f.grid());
    for (int c = 0; c < 2; ++c) fhat.comp(c) = spectral::to_hat(f.comp(c));
    apply_propagator_hat(fhat, u);
    for (int c = 0; c < 2; ++c) fft::ifft(fhat.comp(c));
    return fhat;
}

SpinorField free_propagator(const SpinorField& f, double t) {
    return apply_propagator(f, make_propagator(f.grid(), t));
}

}  // namespace csd::dirac
