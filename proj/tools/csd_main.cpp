#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "csd/config.hpp"
#include "csd/evolution.hpp"
#include "csd/probes.hpp"
#include "csd/selftest.hpp"
#include "csd/snapshot.hpp"

namespace fs = std::filesystem;
using namespace csd;

namespace {

// Flags are stored as strings and overlaid onto the config only when the user
// passed them, so the precedence is: defaults < config file < flags.
struct FlagSet {
    std::vector<std::pair<CLI::Option*, std::pair<std::string, std::string*>>> opts;
    std::vector<std::unique_ptr<std::string>> storage;

    void add(CLI::App* cmd, const std::string& flag, const std::string& key,
             const std::string& desc) {
        storage.push_back(std::make_unique<std::string>());
        CLI::Option* o = cmd->add_option(flag, *storage.back(), desc);
        opts.push_back({o, {key, storage.back().get()}});
    }
    void apply(io::RunConfig& cfg) const {
        for (const auto& [opt, kv] : opts)
            if (opt->count() > 0) cfg.set(kv.first, *kv.second);
    }
};

io::RunConfig resolve(const std::string& command, const std::string& config_file,
                      const FlagSet& flags) {
    io::RunConfig cfg = io::RunConfig::defaults(command);
    if (!config_file.empty()) cfg.merge_file(config_file);
    flags.apply(cfg);
    cfg.validate();
    for (const auto& w : cfg.warnings()) std::cerr << "warning: " << w << "\n";
    return cfg;
}

std::string prepare_outdir(const io::RunConfig& cfg) {
    const std::string outdir = cfg.gets("outdir");
    fs::create_directories(outdir);
    cfg.echo(outdir + "/config_resolved.cfg");
    return outdir;
}

evolve::DataSpec data_spec_from(const io::RunConfig& cfg) {
    evolve::DataSpec d;
    d.kind = cfg.gets("data");
    d.s = cfg.getd("s");
    d.band_lo_k = cfg.getd("data_band_lo");
    d.band_hi_k = cfg.getd("data_band_hi");
    d.annulus = cfg.getd("data_annulus");
    d.gaussian_width = cfg.getd("gaussian_width");
    d.target_hs_norm = cfg.getd("data_norm");
    d.seed = cfg.getu64("seed");
    return d;
}

void write_run_report(const std::string& path, const evolve::Trajectory& traj, double s, double m) {
    std::vector<gauge::ResidualRow> rows;
    if (traj.size() >= 3 && traj.gauges.size() == traj.size())
        rows = gauge::gauge_residuals(traj.times, traj.snaps, traj.gauges);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.precision(17);
    out << "t,charge,hs_norm,res_coulomb,res_curl,res_dynamic,y_source_hs\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double rc = rows.empty() ? nan : rows[k].res_coulomb;
        const double rk = rows.empty() ? nan : rows[k].res_curl;
        const double rd = rows.empty() ? nan : rows[k].res_dynamic;
        out << traj.times[k] << ',' << evolve::charge(traj.snaps[k]) << ','
            << spectral::sobolev_norm(traj.snaps[k], s, false) << ',' << rc << ',' << rk << ','
            << rd << ',' << evolve::y_source_eq_at(traj, k, s, m) << '\n';
    }
}

void write_snapshots(const std::string& outdir, const evolve::Trajectory& traj) {
    for (std::size_t k = 0; k < traj.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "/snapshot_%05zu.bin", k);
        io::write_snapshot(outdir + name, traj.snaps[k], traj.times[k]);
    }
}

int cmd_simulate(const io::RunConfig& cfg) {
    const std::string outdir = prepare_outdir(cfg);
    const Grid g(cfg.geti("n"), cfg.getd("length"));
    const SpinorField f = evolve::make_initial_data(g, data_spec_from(cfg));
    const double s = cfg.getd("s");
    const double m = cfg.getd("mass");

    evolve::Trajectory traj;
    if (cfg.gets("integrator") == "picard") {
        auto pr = evolve::picard_iterate(f, cfg.getd("t_final"), cfg.geti("picard_iters"), m,
                                         cfg.geti("picard_steps"), s);
        if (pr.contraction_warning)
            std::cerr << "warning: Picard iterate distances are not contracting\n";
        std::ofstream pd(outdir + "/picard_distances.csv");
        pd.precision(17);
        pd << "iteration,distance\n";
        for (std::size_t k = 0; k < pr.distances.size(); ++k)
            pd << (k + 1) << ',' << pr.distances[k] << '\n';
        traj = std::move(pr.traj);
        for (const auto& snap : traj.snaps) traj.gauges.push_back(gauge::reconstruct_gauge(snap));
    } else {
        evolve::SimConfig sc;
        sc.n = g.n;
        sc.length = g.length;
        sc.dt = cfg.getd("dt");
        sc.t_final = cfg.getd("t_final");
        sc.mass = m;
        sc.s = s;
        sc.snapshot_stride = cfg.geti("snapshot_stride");
        sc.blowup_threshold = cfg.getd("blowup_threshold");
        auto res = evolve::simulate(sc, f, /*with_gauges=*/true);
        traj = std::move(res.traj);

        std::ofstream ch(outdir + "/charge.csv");
        ch.precision(17);
        ch << "t,charge\n";
        for (std::size_t k = 0; k < res.step_times.size(); ++k)
            ch << res.step_times[k] << ',' << res.step_charges[k] << '\n';
        const double drift = evolve::charge_drift(res.step_charges).max_rel_drift;
        std::cout << "charge drift (relative): " << drift << "\n";
    }

    write_snapshots(outdir, traj);
    write_run_report(outdir + "/run_report.csv", traj, s, m);
    if (traj.size() >= 3 && traj.gauges.size() == traj.size()) {
        auto rows = gauge::gauge_residuals(traj.times, traj.snaps, traj.gauges);
        gauge::write_residual_csv(outdir + "/gauge_residuals.csv", rows);
    }
    std::cout << "simulate: " << traj.size() << " snapshots -> " << outdir << "\n";
    return 0;
}

int cmd_probe(const std::string& name, const io::RunConfig& cfg) {
    const std::string outdir = prepare_outdir(cfg);
    lab::ProbeParams p;
    p.n = cfg.geti("n");
    p.length = cfg.getd("length");
    p.s = cfg.getd("s");
    p.a = cfg.getd("a");
    p.q = cfg.getd("q");
    p.r = cfg.getd("r");
    p.alpha = cfg.getd("alpha");
    p.interval = cfg.getd("interval");
    p.time_samples = cfg.geti("time_samples");
    p.trials = cfg.geti("trials");
    p.scales = cfg.get_list("scales");
    p.seed = cfg.getu64("seed");
    p.s1 = cfg.getd("s1");
    p.s2 = cfg.getd("s2");
    p.s3 = cfg.getd("s3");

    if (!lab::zero_gate(name, p)) {
        std::cerr << "probe " << name << ": zero-input sanity gate FAILED\n";
        return 1;
    }
    const lab::RecordList recs = lab::run_probe(name, p);
    lab::write_records_csv(outdir + "/probe_" + name + "_records.csv", recs);
    lab::write_summary(outdir + "/probe_" + name + "_summary.txt", name, p, recs);

    for (const auto& [series, st] : lab::summarize(recs)) {
        double overall = 0.0;
        for (const auto& [sc, mx] : st.max_ratio) overall = std::max(overall, mx);
        std::cout << series << ": slope = " << st.slope << ", max ratio = " << overall << " ("
                  << recs.size() << " records)\n";
    }
    return 0;
}

int cmd_convergence(const io::RunConfig& cfg) {
    const std::string outdir = prepare_outdir(cfg);
    const Grid g(cfg.geti("n"), cfg.getd("length"));
    const SpinorField f = evolve::make_initial_data(g, data_spec_from(cfg));
    const double m = cfg.getd("mass");
    const double T = cfg.getd("t_final");
    const double dt = cfg.getd("dt");

    std::ofstream out(outdir + "/convergence.txt");
    out.precision(17);
    bool blew_up = false;

    auto final_state = [&](const SpinorField& data, double step) {
        evolve::SimConfig sc;
        sc.n = data.grid().n;
        sc.length = data.grid().length;
        sc.dt = step;
        sc.t_final = T;
        sc.mass = m;
        sc.snapshot_stride = 0;
        auto res = evolve::simulate(sc, data, false);
        return res.traj.snaps.back();
    };

    try {
        // temporal refinement at fixed N
        SpinorField p1 = final_state(f, dt);
        SpinorField p2 = final_state(f, dt / 2);
        SpinorField p4 = final_state(f, dt / 4);
        auto diff_l2 = [](const SpinorField& a, const SpinorField& b) {
            double s2 = 0.0;
            for (int c = 0; c < 2; ++c) {
                ScalarField d = a.comp(c);
                for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b.comp(c)[i];
                const double nc = spectral::l2_norm(d);
                s2 += nc * nc;
            }
            return std::sqrt(s2);
        };
        const double e1 = diff_l2(p1, p2), e2 = diff_l2(p2, p4);
        const double order = (e1 > 0 && e2 > 0) ? std::log2(e1 / e2) : 0.0;
        out << "temporal_err_dt = " << e1 << "\n";
        out << "temporal_err_dt2 = " << e2 << "\n";
        out << "temporal_order = " << order << "\n";
        std::cout << "temporal order: " << order << "\n";

        // spatial refinement at the finest dt
        const SpinorField f2n = spectral::resample(f, 2 * g.n);
        SpinorField q1 = final_state(f2n, dt / 4);
        SpinorField q1c = spectral::resample(q1, g.n);
        const double es = diff_l2(q1c, p4);
        out << "spatial_err = " << es << "\n";
        std::cout << "spatial refinement error: " << es << "\n";

        // linear run sanity: zero source integrates the free flow exactly
        {
            evolve::Stepper st(g, dt, 0.0, /*zero_source=*/true);
            SpinorField psi = f;
            const long n_steps = std::lround(T / dt);
            for (long k = 0; k < n_steps; ++k) psi = st.step(psi, k * dt);
            SpinorField exact = dirac::free_propagator(f, n_steps * dt);
            const double el = diff_l2(psi, exact);
            out << "linear_exactness = " << el << "\n";
        }
    } catch (const BlowUpError& e) {
        blew_up = true;
        out << "blowup = true\n";
        out << "blowup_time = " << e.time << "\n";
        std::cerr << e.what() << "\n";
    }
    out << "blowup = " << (blew_up ? "true" : "false") << "\n";
    return blew_up ? 3 : 0;
}

int cmd_selftest(const io::RunConfig& cfg, bool corrupt_gamma) {
    std::vector<int> sizes;
    for (double v : cfg.get_list("sizes")) sizes.push_back(int(v));
    const SelfTestReport rep = selftest(sizes, corrupt_gamma);
    std::cout << format_report(rep);
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("CSD_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) omp_set_num_threads(t);
    }

    CLI::App app{"Chern-Simons-Dirac pseudospectral simulator and estimate lab"};
    app.require_subcommand(1);

    std::string config_file, probe_name;
    bool corrupt_gamma = false;

    auto* sim = app.add_subcommand("simulate", "integrate the cubic Dirac equation and "
                                               "reconstruct the gauge along the way");
    sim->add_option("--config", config_file, "key = value config file");
    FlagSet sim_flags;
    sim_flags.add(sim, "--n", "n", "grid points per axis (power of two)");
    sim_flags.add(sim, "--length", "length", "torus side length");
    sim_flags.add(sim, "--dt", "dt", "time step");
    sim_flags.add(sim, "--T,--t-final", "t_final", "final time");
    sim_flags.add(sim, "--m,--mass", "mass", "mass parameter");
    sim_flags.add(sim, "--s", "s", "Sobolev exponent for reporting");
    sim_flags.add(sim, "--seed", "seed", "master seed");
    sim_flags.add(sim, "--outdir", "outdir", "output directory");
    sim_flags.add(sim, "--stride", "snapshot_stride", "steps between snapshots (0: endpoints only)");
    sim_flags.add(sim, "--integrator", "integrator", "exprk4 | picard");
    sim_flags.add(sim, "--picard-iters", "picard_iters", "Picard iteration count");
    sim_flags.add(sim, "--picard-steps", "picard_steps", "Picard time-lattice steps");
    sim_flags.add(sim, "--data", "data", "initial data family: random_hs | gaussian");
    sim_flags.add(sim, "--data-band-lo", "data_band_lo", "random data band, lower |k|");
    sim_flags.add(sim, "--data-band-hi", "data_band_hi", "random data band, upper |k|");
    sim_flags.add(sim, "--data-norm", "data_norm", "target H^s norm of the data");
    sim_flags.add(sim, "--theorem-regime", "theorem_regime", "reject s outside (1/4, 1)");
    sim_flags.add(sim, "--blowup-threshold", "blowup_threshold", "abort when a norm exceeds this");

    auto* prb = app.add_subcommand("probe", "randomized inequality probes");
    prb->add_option("name", probe_name, "probe name")->required();
    prb->add_option("--config", config_file, "key = value config file");
    FlagSet prb_flags;
    prb_flags.add(prb, "--n", "n", "grid points per axis");
    prb_flags.add(prb, "--length", "length", "torus side length");
    prb_flags.add(prb, "--s", "s", "Sobolev exponent");
    prb_flags.add(prb, "--a", "a", "fractional-derivative gain");
    prb_flags.add(prb, "--q", "q", "temporal exponent");
    prb_flags.add(prb, "--r", "r", "spatial exponent (inf allowed)");
    prb_flags.add(prb, "--alpha", "alpha", "product-rule shift");
    prb_flags.add(prb, "--trials", "trials", "trials per scale");
    prb_flags.add(prb, "--scales", "scales", "comma-separated dyadic scales");
    prb_flags.add(prb, "--seed", "seed", "master seed");
    prb_flags.add(prb, "--interval", "interval", "time interval |I|");
    prb_flags.add(prb, "--time-samples", "time_samples", "trapezoid subintervals");
    prb_flags.add(prb, "--outdir", "outdir", "output directory");
    prb_flags.add(prb, "--s1", "s1", "homogeneous product exponent s1");
    prb_flags.add(prb, "--s2", "s2", "homogeneous product exponent s2");
    prb_flags.add(prb, "--s3", "s3", "homogeneous product exponent s3");

    auto* cnv = app.add_subcommand("convergence", "temporal/spatial refinement study");
    cnv->add_option("--config", config_file, "key = value config file");
    FlagSet cnv_flags;
    cnv_flags.add(cnv, "--n", "n", "grid points per axis");
    cnv_flags.add(cnv, "--length", "length", "torus side length");
    cnv_flags.add(cnv, "--dt", "dt", "base time step");
    cnv_flags.add(cnv, "--T,--t-final", "t_final", "final time");
    cnv_flags.add(cnv, "--m,--mass", "mass", "mass parameter");
    cnv_flags.add(cnv, "--s", "s", "Sobolev exponent");
    cnv_flags.add(cnv, "--seed", "seed", "master seed");
    cnv_flags.add(cnv, "--outdir", "outdir", "output directory");
    cnv_flags.add(cnv, "--data", "data", "initial data family");
    cnv_flags.add(cnv, "--data-band-lo", "data_band_lo", "random data band, lower |k|");
    cnv_flags.add(cnv, "--data-band-hi", "data_band_hi", "random data band, upper |k|");
    cnv_flags.add(cnv, "--data-norm", "data_norm", "target H^s norm of the data");
    cnv_flags.add(cnv, "--theorem-regime", "theorem_regime", "reject s outside (1/4, 1)");

    auto* st = app.add_subcommand("selftest", "run every module invariant at small sizes");
    FlagSet st_flags;
    st_flags.add(st, "--sizes", "sizes", "comma-separated grid sizes");
    st->add_flag("--corrupt-gamma", corrupt_gamma,
                 "fault-injection hook: perturb a gamma matrix entry first");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(resolve("simulate", config_file, sim_flags));
        if (prb->parsed()) return cmd_probe(probe_name, resolve("probe", config_file, prb_flags));
        if (cnv->parsed()) return cmd_convergence(resolve("convergence", config_file, cnv_flags));
        if (st->parsed()) {
            io::RunConfig cfg = io::RunConfig::defaults("selftest");
            st_flags.apply(cfg);
            return cmd_selftest(cfg, corrupt_gamma);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const BlowUpError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
