// Unified command-line front end: kernel, vortex, regularize, radial, eigen,
// scaling, simulate, pipeline. Every run writes its artifacts plus a
// meta.json with the merged configuration and wall time.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sqglab/eigen_problem.hpp"
#include "sqglab/io.hpp"
#include "sqglab/kernels.hpp"
#include "sqglab/mollifier.hpp"
#include "sqglab/radial_ops.hpp"
#include "sqglab/regularize.hpp"
#include "sqglab/selfsimilar.hpp"
#include "sqglab/simulate.hpp"
#include "sqglab/special.hpp"
#include "sqglab/vortex.hpp"

using namespace sqglab;
using nlohmann::json;
using Cplx = std::complex<double>;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::string meta_path_for(const std::string& out) {
    const auto dot = out.find_last_of('.');
    return (dot == std::string::npos ? out : out.substr(0, dot)) + ".meta.json";
}

RunConfig merge_config(CLI::App* cmd, const std::string& config_path) {
    RunConfig cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const CLI::Option* opt : cmd->get_options()) {
        if (opt->count() == 0 || opt->get_name().size() < 3) continue;
        std::string name = opt->get_name();
        while (!name.empty() && name.front() == '-') name.erase(name.begin());
        if (name == "config") continue;
        if (!opt->results().empty()) cfg.set(name, opt->results().front());
    }
    return cfg;
}

// shared vortex construction from config (sigma, eps, chi default bump)
struct VortexBundle {
    AnnularVortex base;
    Mollifier moll;
    double eps;
};

VortexBundle make_bundle(const RunConfig& cfg, double sigma_default) {
    VortexBundle b{build_vortex(cfg.get_num("sigma", sigma_default)), Mollifier{},
                   0.0};
    const double cap = std::min(b.base.sigma, 1.0 - b.base.sigma) / 3.0;
    b.eps = cfg.get_num("eps", 0.5 * cap);
    return b;
}

json eigenpair_json(const EigenPair& p) {
    return json{{"z", {p.z.real(), p.z.imag()}},
                {"h", {{p.h[0].real(), p.h[0].imag()}, {p.h[1].real(), p.h[1].imag()}}},
                {"lambda", {p.lambda.real(), p.lambda.imag()}}};
}

int run_kernel(const RunConfig& cfg) {
    const int n = cfg.get_int("n", 2);
    const double alpha = cfg.get_num("alpha", 0.5);
    const double sigma = cfg.get_num("sigma", 0.9);
    const std::string form = cfg.get("form", "I");
    KernelResult r;
    if (form == "I")
        r = eval_I({n, alpha, sigma});
    else if (form == "J")
        r = eval_J({n, alpha, sigma});
    else if (form == "K")
        r = eval_K({n, alpha, sigma});
    else
        throw std::invalid_argument("kernel eval: --form must be I, J or K");
    if (r.divergent) {
        std::printf("%d,%.17g,%.17g,%s,divergent,0\n", n, alpha, sigma, form.c_str());
    } else {
        std::printf("%d,%.17g,%.17g,%s,%.17g,%.3g\n", n, alpha, sigma, form.c_str(),
                    r.value, r.abs_err);
    }
    return 0;
}

int run_vortex_scan(const RunConfig& cfg) {
    Timer timer;
    const int n = cfg.get_int("n", 2);
    const double alpha = cfg.get_num("alpha", 0.5);
    const int points = cfg.get_int("points", 2000);
    const std::string out = cfg.get("out", "scan.csv");
    std::vector<ScanPoint> pts(points);
    const double lo = 0.5, hi = 1.0 - 1e-6;
    parallel_for(points, [&](int i) {
        const double s = lo + (hi - lo) * i / (points - 1);
        pts[i] = {s, (n == 1) ? 0.0 : discriminant(n, alpha, s)};
    });
    ScanResult r;
    r.points = pts;
    std::vector<std::vector<double>> rows;
    rows.reserve(points);
    for (const auto& p : pts) rows.push_back({p.sigma, p.delta});
    write_csv(out, {"sigma", "Delta"}, rows);
    double dmin = 1e300, smin = 0;
    for (const auto& p : pts)
        if (p.delta < dmin) {
            dmin = p.delta;
            smin = p.sigma;
        }
    write_meta(meta_path_for(out), cfg,
               {{"sigma_star", std::to_string(smin)},
                {"delta_min", std::to_string(dmin)}},
               timer.seconds());
    return 0;
}

int run_vortex_eigen(const RunConfig& cfg) {
    const int n = cfg.get_int("n", 2);
    const double alpha = cfg.get_num("alpha", 0.5);
    const double sigma = cfg.get_num("sigma", 0.97);
    const StabilityMatrix m = build_matrix(build_vortex(sigma), n, alpha);
    if (!(m.discriminant < 0.0))
        throw std::runtime_error("vortex eigen: Delta >= 0 at this sigma");
    const EigenPair p = unstable_eigenpair(m, n, alpha);
    std::cout << eigenpair_json(p).dump(2) << "\n";
    return 0;
}

int run_regularize(const RunConfig& cfg) {
    Timer timer;
    const int n = cfg.get_int("n", 2);
    const double alpha = cfg.get_num("alpha", 0.5);
    const int nodes = cfg.get_int("nodes", 64);
    const std::string out = cfg.get("out", "eig.json");
    VortexBundle b = make_bundle(cfg, 0.8);
    double eps;
    if (cfg.get("eps", "auto") == "auto")
        eps = choose_eps(b.base, b.moll, n, alpha, nodes);
    else
        eps = cfg.get_num("eps", 0.01);
    const CorrectedEigenpair r =
        (alpha == 1.0) ? solve_fixed_point_sqg(b.base, b.moll, n, eps, nodes)
                       : solve_fixed_point_sub(b.base, b.moll, n, alpha, eps, nodes);
    json j{{"z", {r.z.real(), r.z.imag()}},
           {"z_eps", {r.z_eps.real(), r.z_eps.imag()}},
           {"y", {r.y.real(), r.y.imag()}},
           {"gamma", {r.gamma.real(), r.gamma.imag()}},
           {"eps", r.eps_used},
           {"iterations", r.iterations},
           {"residual", r.residual},
           {"equation_residual", r.equation_residual}};
    std::ofstream(out) << j.dump(2) << "\n";
    const std::string prof = cfg.get("profile-out", "");
    if (!prof.empty()) {
        const SmoothVortex sv(b.base, b.moll, eps);
        std::vector<std::vector<double>> rows;
        for (double rr = 0.0; rr <= sv.support_max() + 0.2; rr += 2e-3)
            rows.push_back({rr, sv.theta(rr), sv.d_theta(rr)});
        write_csv(prof, {"r", "theta_bar_eps", "d_theta_bar_eps"}, rows);
    }
    write_meta(meta_path_for(out), cfg, {{"eps_used", std::to_string(eps)}},
               timer.seconds());
    return 0;
}

int run_radial_velocity(const RunConfig& cfg) {
    Timer timer;
    const double alpha = cfg.get_num("alpha", 0.5);
    const std::string profile = cfg.get("profile", "");
    const std::string out = cfg.get("out", "vphi.csv");
    std::vector<double> rs, dth;
    if (!profile.empty()) {
        std::ifstream in(profile);
        if (!in) throw std::runtime_error("radial velocity: cannot open " + profile);
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            double r, th, dt;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &th, &dt) == 3) {
                rs.push_back(r);
                dth.push_back(dt);
            }
        }
        if (rs.size() < 8)
            throw std::runtime_error("radial velocity: profile too short");
    }
    std::vector<std::vector<double>> rows;
    if (!rs.empty()) {
        RadialGrid g;
        g.nodes = Eigen::Map<Eigen::VectorXd>(rs.data(), rs.size());
        g.weights = Eigen::VectorXd::Zero(rs.size());
        Eigen::VectorXcd vals(rs.size());
        for (std::size_t i = 0; i < rs.size(); ++i) vals[i] = dth[i];
        const RadialField f(g, vals);
        double lo = rs.front(), hi = rs.back();
        for (double R = 0.01; R <= hi + 0.5; R += 0.01) {
            const Cplx vphi =
                -apply_V_n_alpha([&](double s) { return f(s); }, lo, hi, 1, alpha, R);
            rows.push_back({R, vphi.real()});
        }
    } else {
        VortexBundle b = make_bundle(cfg, 0.8);
        const SmoothVortex sv(b.base, b.moll, b.eps);
        for (double R = 0.01; R <= sv.support_max() + 0.5; R += 0.01)
            rows.push_back({R, vortex_velocity_at(sv, alpha, R)});
    }
    write_csv(out, {"R", "vphi"}, rows);
    write_meta(meta_path_for(out), cfg, {}, timer.seconds());
    return 0;
}

int run_eigen_solve(const RunConfig& cfg) {
    Timer timer;
    const int n = cfg.get_int("n", 2);
    const double alpha = cfg.get_num("alpha", 0.5);
    const int nodes = cfg.get_int("nodes", 400);
    const std::string out = cfg.get("out", "eig_b.json");
    VortexBundle b = make_bundle(cfg, 0.8);
    const SmoothVortex sv(b.base, b.moll, b.eps);
    SelfSimilarParams q;
    q.alpha = alpha;
    q.s = cfg.get_num("s", 0.0);
    q.p = cfg.get_num("p", 2.0);
    q.a = cfg.get_num("a", default_parameter_a(alpha, q.s, q.p));
    q.b = cfg.get_num("b", 0.0);
    const double thr = 1e-3 * n * biot_savart_constant(alpha);
    const RadialEigenSolution sol = solve_mode(sv, q, n, nodes, thr);
    json j{{"unstable", sol.unstable},
           {"lambda_re", sol.lambda.real()},
           {"lambda_im", sol.lambda.imag()},
           {"residual", sol.residual},
           {"power_law_slope", sol.power_law_slope},
           {"power_law_expected", sol.power_law_expected},
           {"support_radius", sol.support_radius}};
    std::ofstream(out) << j.dump(2) << "\n";
    write_meta(meta_path_for(out), cfg, {{"eps_used", std::to_string(b.eps)}},
               timer.seconds());
    return 0;
}

int run_scaling(const RunConfig& cfg) {
    Timer timer;
    ScalingLaw law;
    law.alpha = cfg.get_num("alpha", 1.0);
    law.s = cfg.get_num("s", 0.5);
    law.p = cfg.get_num("p", 2.0);
    law.a = cfg.get_num("a", default_parameter_a(law.alpha, law.s, law.p));
    law.b = cfg.get_num("b", 0.02);
    const std::string out = cfg.get("out", "scaling.csv");
    const std::string tg = cfg.get("t-grid", "log:1e-6:1:50");
    double tlo = 1e-6, thi = 1.0;
    int tn = 50;
    if (std::sscanf(tg.c_str(), "log:%lf:%lf:%d", &tlo, &thi, &tn) != 3)
        throw std::invalid_argument("scaling: --t-grid must be log:lo:hi:count");
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < tn; ++i) {
        const double t = tlo * std::pow(thi / tlo, double(i) / (tn - 1));
        rows.push_back({t, sobolev_scaling(1.0, t, law),
                        force_time_integral(1.0, t, law)});
    }
    write_csv(out, {"t", "theta_norm_scale", "force_time_integral"}, rows);
    write_meta(meta_path_for(out), cfg,
               {{"exponent_theta", std::to_string(law.exponent_theta())},
                {"force_integrable", law.force_integrable() ? "true" : "false"}},
               timer.seconds());
    return 0;
}

RadialEigenSolution eigen_for_sim(const SmoothVortex& sv, double alpha, int n,
                                  int nodes, RadialGrid& grid_out) {
    SelfSimilarParams q;
    q.alpha = alpha;
    q.a = default_parameter_a(alpha, 0.0, 2.0);
    q.b = 0.0;
    const double thr = 1e-3 * n * biot_savart_constant(alpha);
    grid_out = make_eigen_grid(sv, nodes);
    const Eigen::MatrixXcd L = assemble_Lb(sv, q, n, grid_out);
    return leading_eigen(L, grid_out, sv, q, n, thr);
}

int run_simulate(const RunConfig& cfg, bool golovkin) {
    Timer timer;
    const int n = cfg.get_int("n", 2);
    const double alpha = cfg.get_num("alpha", 0.0);
    const int N = cfg.get_int("N", 256);
    const double L = cfg.get_num("L", 8.0);
    const double tau0 = cfg.get_num("tau0", golovkin ? -20.0 : 0.0);
    const double tau1 = cfg.get_num("tau1", golovkin ? 0.0 : 12.0);
    const std::string out = cfg.get("out", golovkin ? "golovkin.csv" : "growth.csv");
    const bool filter = cfg.get_int("filter", alpha == 1.0 ? 1 : 0) != 0;
    VortexBundle b = make_bundle(cfg, 0.8);
    const SmoothVortex sv(b.base, b.moll, b.eps);

    RadialGrid rgrid;
    const RadialEigenSolution sol =
        eigen_for_sim(sv, alpha, n, cfg.get_int("nodes", 300), rgrid);
    if (!sol.unstable) throw std::runtime_error("simulate: no unstable mode found");
    const RadialField W(rgrid, sol.W);

    auto grid = make_grid(N, L, alpha, filter);
    DiagnosticSeries series;
    if (!golovkin) {
        SpectralState base = make_state(
            grid, [&](double x, double y) { return sv.theta(std::hypot(x, y)); });
        const double eps_amp = cfg.get_num("eps", 1e-4) * l2_norm(base) * 10.0;
        series = run_linear_growth(sv, W, sol.lambda, n, std::min(eps_amp, 1e-3 * l2_norm(base)),
                                   tau0, tau1, grid);
    } else {
        // two exact solutions of the dealiased system sharing one force:
        // the mode comes from the discrete linearization itself
        const DiscreteMode mode =
            discrete_unstable_mode(sv, W, n, grid, cfg.get_num("settle", 40.0));
        series = run_golovkin_pair_discrete(sv, mode, cfg.get_num("amp", 1e-3),
                                            tau1 - tau0, grid);
    }
    std::vector<std::vector<double>> rows;
    for (const auto& r : series.rows)
        rows.push_back({r.tau, r.l2_dev, r.dev_pair, r.hamiltonian, r.e2, r.e4,
                        r.fit_rate_running});
    write_csv(out, {"tau", "l2_dev", "dev_pair", "hamiltonian", "e2", "e4",
                    "fit_rate_running"},
              rows);
    const std::string svg = cfg.get("svg", "");
    if (!svg.empty()) {
        std::vector<double> xs;
        std::vector<double> dev;
        for (const auto& r : series.rows) {
            xs.push_back(r.tau);
            dev.push_back(std::max(r.dev_pair, 1e-300));
        }
        write_svg_lines(svg, "log deviation vs tau", xs, {dev}, {"dev_pair"}, true);
    }
    write_meta(meta_path_for(out), cfg,
               {{"fitted_rate", std::to_string(series.fitted_rate)},
                {"lambda_re", std::to_string(sol.lambda.real())},
                {"lambda_im", std::to_string(sol.lambda.imag())},
                {"tracking_error_max", std::to_string(series.tracking_error_max)},
                {"hamiltonian_residual_max",
                 std::to_string(series.hamiltonian_residual_max)},
                {"filter", filter ? "on" : "off"}},
               timer.seconds());
    return 0;
}

int run_pipeline(const RunConfig& cfg) {
    Timer timer;
    const int n = cfg.get_int("n", 2);
    const double alpha = cfg.get_num("alpha", 0.5);
    const std::string out = cfg.get("out", "pipeline.json");
    json j;

    // 1. discriminant scan, sigma* restricted to the eps-admissible band
    const int points = cfg.get_int("points", 2000);
    double smin = 0, dmin = 1e300;
    std::vector<double> sig(points), del(points);
    parallel_for(points, [&](int i) {
        sig[i] = 0.5 + (1.0 - 1e-6 - 0.5) * i / (points - 1);
        del[i] = discriminant(n, alpha, sig[i]);
    });
    for (int i = 0; i < points; ++i) {
        if (sig[i] > 0.8 && sig[i] < 0.97 && del[i] < dmin) {
            dmin = del[i];
            smin = sig[i];
        }
    }
    j["scan"] = {{"sigma_star", smin}, {"delta_min", dmin}};
    if (!(dmin < 0.0)) throw std::runtime_error("pipeline: no instability window");

    // 2. eigenpair
    const AnnularVortex base = build_vortex(smin);
    const EigenPair p = unstable_eigenpair(build_matrix(base, n, alpha), n, alpha);
    j["eigenpair"] = eigenpair_json(p);

    // 3. fixed-point correction
    Mollifier moll;
    const double eps = cfg.get_num("eps", 0.01);
    const CorrectedEigenpair fp =
        (alpha == 1.0)
            ? solve_fixed_point_sqg(base, moll, n, std::min(eps, 4e-5), 48)
            : solve_fixed_point_sub(base, moll, n, alpha, eps, 48);
    j["regularize"] = {{"z_eps", {fp.z_eps.real(), fp.z_eps.imag()}},
                       {"iterations", fp.iterations},
                       {"residual", fp.residual},
                       {"eps", fp.eps_used}};

    // 4. Nystrom eigensolve at matching eps (where admissible)
    const SmoothVortex sv(base, moll, eps);
    SelfSimilarParams q;
    q.alpha = alpha;
    q.a = default_parameter_a(alpha, 0.0, 2.0);
    const double thr = 1e-3 * n * biot_savart_constant(alpha);
    const RadialEigenSolution sol = solve_mode(sv, q, n, cfg.get_int("nodes", 400), thr);
    const Cplx lam_fp = Cplx(0, -1) * double(n) * biot_savart_constant(alpha) * fp.z_eps;
    j["eigen"] = {{"lambda_re", sol.lambda.real()},
                  {"lambda_im", sol.lambda.imag()},
                  {"fp_agreement",
                   std::abs(sol.lambda - lam_fp) / std::abs(lam_fp)}};

    // 5. short simulator run at the vortex the demos use
    const AnnularVortex sim_base = build_vortex(cfg.get_num("sim-sigma", 0.8));
    const double sim_eps = cfg.get_num("sim-eps", 0.05);
    const SmoothVortex sim_sv(sim_base, moll, sim_eps);
    RadialGrid rgrid;
    const RadialEigenSolution sim_sol =
        eigen_for_sim(sim_sv, alpha, n, 300, rgrid);
    if (sim_sol.unstable) {
        auto grid = make_grid(cfg.get_int("N", 256), cfg.get_num("L", 8.0), alpha,
                              alpha > 0.0);
        SpectralState st = make_state(grid, [&](double x, double y) {
            return sim_sv.theta(std::hypot(x, y));
        });
        const RadialField W(rgrid, sim_sol.W);
        const DiagnosticSeries gr =
            run_linear_growth(sim_sv, W, sim_sol.lambda, n, 1e-3 * l2_norm(st), 0.0,
                              cfg.get_num("tau1", 10.0), grid);
        j["simulate"] = {{"fitted_rate", gr.fitted_rate},
                         {"lambda_re", sim_sol.lambda.real()},
                         {"agreement", std::abs(gr.fitted_rate - sim_sol.lambda.real()) /
                                           sim_sol.lambda.real()}};
    }
    std::ofstream(out) << j.dump(2) << "\n";
    write_meta(meta_path_for(out), cfg, {}, timer.seconds());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for unstable alpha-SQG vortices"};
    app.require_subcommand(1);

    std::string config_path;

    // kernel eval
    CLI::App* kernel = app.add_subcommand("kernel", "kernel evaluations");
    CLI::App* keval = kernel->add_subcommand("eval", "evaluate I/J/K at (n, alpha, sigma)");
    for (CLI::App* c : {keval}) {
        c->add_option("--config", config_path);
        c->add_option("--n", "frequency");
        c->add_option("--alpha", "interpolation exponent");
        c->add_option("--sigma", "radius ratio");
        c->add_option("--form", "I, J or K");
    }

    // vortex scan / eigen
    CLI::App* vortex = app.add_subcommand("vortex", "piecewise vortex analysis");
    CLI::App* vscan = vortex->add_subcommand("scan", "discriminant scan over sigma");
    CLI::App* veig = vortex->add_subcommand("eigen", "unstable 2x2 eigenpair");
    for (CLI::App* c : {vscan, veig}) {
        c->add_option("--config", config_path);
        c->add_option("--n", "");
        c->add_option("--alpha", "");
        c->add_option("--points", "");
        c->add_option("--sigma", "");
        c->add_option("--out", "");
    }

    CLI::App* reg = app.add_subcommand("regularize", "mollified fixed-point correction");
    CLI::App* rsolve = reg->add_subcommand("solve", "solve the correction at eps");
    rsolve->add_option("--config", config_path);
    for (const char* o : {"--n", "--alpha", "--sigma", "--eps", "--nodes", "--out",
                          "--profile-out"})
        rsolve->add_option(o, "");

    CLI::App* radial = app.add_subcommand("radial", "radial Biot-Savart machinery");
    CLI::App* rvel = radial->add_subcommand("velocity", "angular velocity of a profile");
    rvel->add_option("--config", config_path);
    for (const char* o : {"--alpha", "--profile", "--out", "--sigma", "--eps"})
        rvel->add_option(o, "");

    CLI::App* eig = app.add_subcommand("eigen", "self-similar stability eigensolve");
    CLI::App* esolve = eig->add_subcommand("solve", "leading eigenpair of L_b");
    esolve->add_option("--config", config_path);
    for (const char* o : {"--alpha", "--n", "--b", "--a", "--s", "--p", "--nodes",
                          "--sigma", "--eps", "--out"})
        esolve->add_option(o, "");

    CLI::App* scaling = app.add_subcommand("scaling", "self-similar scaling laws");
    CLI::App* stable = scaling->add_subcommand("table", "norm scaling over a t-grid");
    stable->add_option("--config", config_path);
    for (const char* o : {"--alpha", "--s", "--p", "--a", "--b", "--t-grid", "--out"})
        stable->add_option(o, "");

    CLI::App* sim = app.add_subcommand("simulate", "pseudo-spectral demonstrations");
    CLI::App* sgrowth = sim->add_subcommand("growth", "linear growth of the unstable mode");
    CLI::App* sgolov = sim->add_subcommand("golovkin", "two-solution divergence demo");
    for (CLI::App* c : {sgrowth, sgolov}) {
        c->add_option("--config", config_path);
        for (const char* o : {"--alpha", "--n", "--N", "--L", "--eps", "--tau0",
                              "--tau1", "--out", "--svg", "--sigma", "--nodes",
                              "--filter", "--settle", "--amp"})
            c->add_option(o, "");
    }

    CLI::App* pipe = app.add_subcommand("pipeline", "chained end-to-end run");
    CLI::App* pfull = pipe->add_subcommand("full", "scan -> eigenpair -> regularize -> eigen -> simulate");
    pfull->add_option("--config", config_path);
    for (const char* o : {"--alpha", "--n", "--eps", "--points", "--nodes", "--N",
                          "--L", "--tau1", "--sim-sigma", "--sim-eps", "--out"})
        pfull->add_option(o, "");

    CLI11_PARSE(app, argc, argv);

    const auto dispatch = [&](CLI::App* cmd) -> int {
        const RunConfig cfg = merge_config(cmd, config_path);
        if (keval->parsed()) return run_kernel(cfg);
        if (vscan->parsed()) return run_vortex_scan(cfg);
        if (veig->parsed()) return run_vortex_eigen(cfg);
        if (rsolve->parsed()) return run_regularize(cfg);
        if (rvel->parsed()) return run_radial_velocity(cfg);
        if (esolve->parsed()) return run_eigen_solve(cfg);
        if (stable->parsed()) return run_scaling(cfg);
        if (sgrowth->parsed()) return run_simulate(cfg, false);
        if (sgolov->parsed()) return run_simulate(cfg, true);
        if (pfull->parsed()) return run_pipeline(cfg);
        std::cerr << "no subcommand selected\n";
        return 2;
    };

    CLI::App* active = nullptr;
    for (CLI::App* c : {keval, vscan, veig, rsolve, rvel, esolve, stable, sgrowth,
                        sgolov, pfull})
        if (c->parsed()) active = c;
    if (!active) {
        std::cerr << "no subcommand selected\n";
        return 2;
    }

    try {
        return dispatch(active);
    } catch (const std::domain_error& e) {
        // precondition violations are configuration errors
        json err{{"error", "config_validation"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        json err{{"error", "config_validation"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        json err{{"error", "module_error"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
