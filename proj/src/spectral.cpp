#include "csd/spectral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

#include "csd/kernels.hpp"

namespace csd::spectral {

namespace {

inline double xi_norm(const Grid& g, std::size_t flat) {
    const int n = g.n;
    const double x1 = g.xi(int(flat) / n), x2 = g.xi(int(flat) % n);
    return std::hypot(x1, x2);
}

// Sobolev weight tables are reused heavily by the probe harness; cache them.
using WeightKey = std::tuple<int, double, double, int>;
std::mutex weight_mutex;
std::map<WeightKey, std::shared_ptr<std::vector<double>>>& weight_cache() {
    static std::map<WeightKey, std::shared_ptr<std::vector<double>>> cache;
    return cache;
}

std::shared_ptr<std::vector<double>> sobolev_weights(const Grid& g, double s, bool homogeneous) {
    const WeightKey key{g.n, g.length, s, homogeneous ? 1 : 0};
    {
        std::lock_guard<std::mutex> lock(weight_mutex);
        auto it = weight_cache().find(key);
        if (it != weight_cache().end()) return it->second;
    }
    auto w = std::make_shared<std::vector<double>>(g.size());
    kernels::par_for(g.size(), [&](std::size_t i) {
        const double r = xi_norm(g, i);
        if (homogeneous)
            (*w)[i] = (r == 0.0) ? 0.0 : std::pow(r, 2.0 * s);
        else
            (*w)[i] = std::pow(1.0 + r * r, s);
    });
    std::lock_guard<std::mutex> lock(weight_mutex);
    auto [pos, ok] = weight_cache().emplace(key, std::move(w));
    (void)ok;
    return pos->second;
}

}  // namespace

MultiplierTable make_table(const Grid& g, const MultiplierSymbol& sym) {
    MultiplierTable t(g.size());
    const int n = g.n;
    kernels::par_for(g.size(), [&](std::size_t i) {
        const int ix = int(i) / n, iy = int(i) % n;
        if (ix == 0 && iy == 0 && sym.zero_rule) {
            t[i] = *sym.zero_rule;
        } else {
            t[i] = sym.eval(g.xi(ix), g.xi(iy));
        }
    });
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i].real()) || !std::isfinite(t[i].imag())) {
            std::ostringstream os;
            os << "multiplier symbol not finite at lattice point k=(" << g.mode(int(i) / n) << ","
               << g.mode(int(i) % n) << ")";
            if (i == 0) os << " and no zero rule declared";
            throw std::domain_error(os.str());
        }
    }
    return t;
}

MultiplierTable frac_deriv_table(const Grid& g, double a) {
    MultiplierTable t(g.size());
    kernels::par_for(g.size(), [&](std::size_t i) {
        const double r = xi_norm(g, i);
        t[i] = (r == 0.0) ? cplx{0.0, 0.0} : cplx{std::pow(r, a), 0.0};
    });
    return t;
}

MultiplierTable inv_laplacian_table(const Grid& g) {
    MultiplierTable t(g.size());
    kernels::par_for(g.size(), [&](std::size_t i) {
        const double r = xi_norm(g, i);
        t[i] = (r == 0.0) ? cplx{0.0, 0.0} : cplx{-1.0 / (r * r), 0.0};
    });
    return t;
}

MultiplierTable deriv_table(const Grid& g, int axis) {
    MultiplierTable t(g.size());
    const int n = g.n;
    kernels::par_for(g.size(), [&](std::size_t i) {
        const int k = axis == 0 ? int(i) / n : int(i) % n;
        // The Nyquist mode is self-conjugate; an odd symbol there would break
        // reality, so first derivatives annihilate it.
        t[i] = (k == n / 2) ? cplx{0.0, 0.0} : cplx{0.0, g.xi(k)};
    });
    return t;
}

MultiplierTable half_wave_table(const Grid& g, double t, int sign) {
    MultiplierTable tab(g.size());
    kernels::par_for(g.size(), [&](std::size_t i) {
        const double phase = sign * t * xi_norm(g, i);
        tab[i] = cplx{std::cos(phase), std::sin(phase)};
    });
    return tab;
}

ScalarField to_hat(const ScalarField& f) {
    ScalarField out = f;
    fft::fft(out);
    return out;
}

ScalarField from_hat(const ScalarField& fhat) {
    ScalarField out = fhat;
    fft::ifft(out);
    return out;
}

void apply_table_hat(ScalarField& fhat, const MultiplierTable& t) {
    kernels::cmul(fhat.values(), {t.data(), t.size()});
}

ScalarField apply_table(const ScalarField& f, const MultiplierTable& t) {
    ScalarField out = to_hat(f);
    apply_table_hat(out, t);
    fft::ifft(out);
    return out;
}

SpinorField apply_table(const SpinorField& f, const MultiplierTable& t) {
    SpinorField out(f.grid());
    for (int c = 0; c < 2; ++c) out.comp(c) = apply_table(f.comp(c), t);
    return out;
}

ScalarField apply_multiplier(const ScalarField& f, const MultiplierSymbol& sym) {
    return apply_table(f, make_table(f.grid(), sym));
}

ScalarField frac_deriv(const ScalarField& f, double a) {
    if (a == 0.0) return f;
    return apply_table(f, frac_deriv_table(f.grid(), a));
}

SpinorField frac_deriv(const SpinorField& f, double a) {
    if (a == 0.0) return f;
    return apply_table(f, frac_deriv_table(f.grid(), a));
}

ScalarField inv_laplacian(const ScalarField& f) {
    return apply_table(f, inv_laplacian_table(f.grid()));
}

ScalarField deriv(const ScalarField& f, int axis) {
    return apply_table(f, deriv_table(f.grid(), axis));
}

cplx mean(const ScalarField& f) {
    auto v = f.values();
    const double re = kernels::det_sum(v.size(), [&](std::size_t i) { return v[i].real(); });
    const double im = kernels::det_sum(v.size(), [&](std::size_t i) { return v[i].imag(); });
    return cplx{re, im} / double(f.size());
}

namespace {

// Shared implementation for the Helmholtz pair: curl_free picks xi (xi.B)/|xi|^2,
// div_free picks xi_perp (xi_perp.B)/|xi|^2 with xi_perp = (-xi2, xi1).
VectorField helmholtz(const VectorField& b, bool curl_free) {
    const Grid& g = b.grid();
    ScalarField h1 = to_hat(b.comp(0));
    ScalarField h2 = to_hat(b.comp(1));
    const int n = g.n;
    auto v1 = h1.values(), v2 = h2.values();
    kernels::par_for(g.size(), [&](std::size_t i) {
        const double x1 = g.xi(int(i) / n), x2 = g.xi(int(i) % n);
        const double r2 = x1 * x1 + x2 * x2;
        if (r2 == 0.0) {
            v1[i] = v2[i] = cplx{0.0, 0.0};
            return;
        }
        if (curl_free) {
            const cplx s = (x1 * v1[i] + x2 * v2[i]) / r2;
            v1[i] = x1 * s;
            v2[i] = x2 * s;
        } else {
            const cplx s = (-x2 * v1[i] + x1 * v2[i]) / r2;
            v1[i] = -x2 * s;
            v2[i] = x1 * s;
        }
    });
    fft::ifft(h1);
    fft::ifft(h2);
    VectorField out(g);
    out.comp(0) = std::move(h1);
    out.comp(1) = std::move(h2);
    return out;
}

}  // namespace

VectorField proj_curl_free(const VectorField& b) { return helmholtz(b, true); }
VectorField proj_div_free(const VectorField& b) { return helmholtz(b, false); }

void lp_project_hat(ScalarField& fhat, double lam) {
    const Grid& g = fhat.grid();
    auto v = fhat.values();
    kernels::par_for(g.size(), [&](std::size_t i) {
        const double r = xi_norm(g, i);
        if (!(r > 0.5 * lam && r <= lam)) v[i] = cplx{0.0, 0.0};
    });
}

void lp_low_hat(ScalarField& fhat, double cutoff) {
    const Grid& g = fhat.grid();
    auto v = fhat.values();
    kernels::par_for(g.size(), [&](std::size_t i) {
        if (!(xi_norm(g, i) < cutoff)) v[i] = cplx{0.0, 0.0};
    });
}

void lp_leq_hat(ScalarField& fhat, double cutoff) {
    const Grid& g = fhat.grid();
    auto v = fhat.values();
    kernels::par_for(g.size(), [&](std::size_t i) {
        if (!(xi_norm(g, i) <= cutoff)) v[i] = cplx{0.0, 0.0};
    });
}

ScalarField lp_project(const ScalarField& f, double lam, bool* resolvable) {
    const Grid& g = f.grid();
    const bool ok = lam > g.xi_min() * 0.999999 && 0.5 * lam < g.xi_max();
    if (resolvable) *resolvable = ok;
    if (!ok) return ScalarField(g);
    ScalarField out = to_hat(f);
    lp_project_hat(out, lam);
    fft::ifft(out);
    return out;
}

ScalarField lp_low(const ScalarField& f, double cutoff) {
    ScalarField out = to_hat(f);
    lp_low_hat(out, cutoff);
    fft::ifft(out);
    return out;
}

SpinorField lp_low(const SpinorField& f, double cutoff) {
    SpinorField out(f.grid());
    for (int c = 0; c < 2; ++c) out.comp(c) = lp_low(f.comp(c), cutoff);
    return out;
}

std::vector<double> dyadic_scales(const Grid& g) {
    const int m_lo = int(std::ceil(std::log2(g.xi_min()) - 1e-9));
    const int m_hi = int(std::ceil(std::log2(g.xi_max()) - 1e-9));
    std::vector<double> out;
    for (int m = m_lo; m <= m_hi; ++m) out.push_back(std::ldexp(1.0, m));
    return out;
}

double sobolev_norm_hat(const ScalarField& fhat, double s, bool homogeneous) {
    const Grid& g = fhat.grid();
    auto w = sobolev_weights(g, s, homogeneous);
    auto v = fhat.values();
    const double sum =
        kernels::det_sum(v.size(), [&](std::size_t i) { return (*w)[i] * std::norm(v[i]); });
    const double scale = g.length * g.length / (double(g.size()) * double(g.size()));
    return std::sqrt(scale * sum);
}

double sobolev_norm_hat(const SpinorField& fhat, double s, bool homogeneous) {
    double s2 = 0.0;
    for (int c = 0; c < 2; ++c) {
        const double nc = sobolev_norm_hat(fhat.comp(c), s, homogeneous);
        s2 += nc * nc;
    }
    return std::sqrt(s2);
}

double sobolev_norm(const ScalarField& f, double s, bool homogeneous) {
    return sobolev_norm_hat(to_hat(f), s, homogeneous);
}

double sobolev_norm(const SpinorField& f, double s, bool homogeneous) {
    double s2 = 0.0;
    for (int c = 0; c < 2; ++c) {
        const double nc = sobolev_norm(f.comp(c), s, homogeneous);
        s2 += nc * nc;
    }
    return std::sqrt(s2);
}

double l2_norm(const ScalarField& f) {
    return std::sqrt(kernels::sum_abs2(f.values()) * f.grid().cell_area());
}

double l2_norm(const SpinorField& f) {
    const double s2 = kernels::sum_abs2(f.comp(0).values()) + kernels::sum_abs2(f.comp(1).values());
    return std::sqrt(s2 * f.grid().cell_area());
}

double lp_norm_mag2(std::size_t npts, const std::function<double(std::size_t)>& mag2, double r,
                    double cell_area) {
    if (std::isinf(r)) {
        double m = 0.0;
        for (std::size_t i = 0; i < npts; ++i) m = std::max(m, mag2(i));
        return std::sqrt(m);
    }
    if (r == 2.0) {
        const double s = kernels::det_sum(npts, mag2);
        return std::sqrt(s * cell_area);
    }
    const double s =
        kernels::det_sum(npts, [&](std::size_t i) { return std::pow(mag2(i), 0.5 * r); });
    return std::pow(s * cell_area, 1.0 / r);
}

double lp_norm(const ScalarField& f, double r) {
    auto v = f.values();
    if (std::isinf(r)) return kernels::max_abs(v);
    return lp_norm_mag2(v.size(), [v](std::size_t i) { return std::norm(v[i]); }, r,
                        f.grid().cell_area());
}

double lp_norm(const SpinorField& f, double r) {
    auto a = f.comp(0).values(), b = f.comp(1).values();
    return lp_norm_mag2(a.size(), [a, b](std::size_t i) { return std::norm(a[i]) + std::norm(b[i]); },
                        r, f.grid().cell_area());
}

double time_lq(std::span<const double> times, std::span<const double> vals, double q, double t0,
               double t1) {
    if (times.empty() || times.size() != vals.size())
        throw std::domain_error("time_lq: empty or mismatched sample arrays");
    const double tol = 1e-9 * std::max(1.0, std::abs(t1 - t0));
    if (times.front() > t0 + tol || times.back() < t1 - tol)
        throw std::domain_error("time_lq: samples do not cover the requested interval");

    std::size_t lo = 0, hi = times.size() - 1;
    while (lo + 1 < times.size() && times[lo + 1] <= t0 + tol) ++lo;
    while (hi > 0 && times[hi - 1] >= t1 - tol) --hi;
    if (std::abs(times[lo] - t0) > tol || std::abs(times[hi] - t1) > tol)
        throw std::domain_error("time_lq: interval endpoints must lie on sample times");

    if (std::isinf(q)) {
        double m = 0.0;
        for (std::size_t i = lo; i <= hi; ++i) m = std::max(m, vals[i]);
        return m;
    }
    if (hi == lo) return 0.0;
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double dt = times[i + 1] - times[i];
        acc += 0.5 * dt * (std::pow(vals[i], q) + std::pow(vals[i + 1], q));
    }
    return std::pow(acc, 1.0 / q);
}

namespace {
template <class FieldT>
double mixed_norm_impl(std::span<const double> times, std::span<const FieldT> snaps, double q,
                       double r, double t0, double t1) {
    if (snaps.empty()) throw std::domain_error("mixed_norm: empty trajectory");
    if (times.size() != snaps.size())
        throw std::domain_error("mixed_norm: timestamps and snapshots misaligned");
    std::vector<double> vals(snaps.size());
    for (std::size_t i = 0; i < snaps.size(); ++i) vals[i] = lp_norm(snaps[i], r);
    return time_lq(times, vals, q, t0, t1);
}
}  // namespace

double mixed_norm(std::span<const double> times, std::span<const ScalarField> snaps, double q,
                  double r, double t0, double t1) {
    return mixed_norm_impl(times, snaps, q, r, t0, t1);
}

double mixed_norm(std::span<const double> times, std::span<const SpinorField> snaps, double q,
                  double r, double t0, double t1) {
    return mixed_norm_impl(times, snaps, q, r, t0, t1);
}

double max_imag_ratio(const ScalarField& f) {
    auto v = f.values();
    const double mi = kernels::par_max(v.size(), [&](std::size_t i) { return std::abs(v[i].imag()); });
    const double ma = kernels::max_abs(v);
    return ma == 0.0 ? 0.0 : mi / ma;
}

ScalarField drop_nyquist(const ScalarField& f) {
    const Grid& g = f.grid();
    ScalarField out = to_hat(f);
    auto v = out.values();
    const int n = g.n;
    kernels::par_for(g.size(), [&](std::size_t i) {
        if (int(i) / n == n / 2 || int(i) % n == n / 2) v[i] = cplx{0.0, 0.0};
    });
    fft::ifft(out);
    return out;
}

ScalarField resample(const ScalarField& f, int n_new) {
    const Grid& g = f.grid();
    const int n_old = g.n;
    if (n_new == n_old) return f;
    const Grid g_new(n_new, g.length);

    // Per-axis map: source FFT index -> (target index, weight) pairs.
    struct Tap {
        int idx;
        double w;
    };
    auto axis_map = [&](int i) {
        std::vector<Tap> taps;
        const int m = i < n_old / 2 ? i : i - n_old;
        if (n_new > n_old) {
            if (m == -n_old / 2) {
                taps.push_back({(-n_old / 2 + n_new) % n_new, 0.5});
                taps.push_back({n_old / 2, 0.5});
            } else {
                taps.push_back({(m + n_new) % n_new, 1.0});
            }
        } else {
            if (std::abs(m) < n_new / 2)
                taps.push_back({(m + n_new) % n_new, 1.0});
            else if (std::abs(m) == n_new / 2)
                taps.push_back({n_new / 2, 1.0});  // fold onto the target Nyquist line
        }
        return taps;
    };

    ScalarField fhat = to_hat(f);
    ScalarField out_hat(g_new);
    for (int i1 = 0; i1 < n_old; ++i1) {
        const auto t1 = axis_map(i1);
        if (t1.empty()) continue;
        for (int i2 = 0; i2 < n_old; ++i2) {
            const auto t2 = axis_map(i2);
            if (t2.empty()) continue;
            const cplx v = fhat(i1, i2);
            for (const auto& a : t1)
                for (const auto& b : t2) out_hat(a.idx, b.idx) += a.w * b.w * v;
        }
    }
    const double scale = double(g_new.size()) / double(g.size());
    kernels::scale(out_hat.values(), cplx{scale, 0.0});
    fft::ifft(out_hat);
    return out_hat;
}

SpinorField resample(const SpinorField& f, int n_new) {
    SpinorField out(Grid(n_new, f.grid().length));
    for (int c = 0; c < 2; ++c) out.comp(c) = resample(f.comp(c), n_new);
    return out;
}

}  // namespace csd::spectral
