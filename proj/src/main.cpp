// Command-line front end for the transonic nozzle solver suite.
//
// Exit codes: 0 success, 2 configuration error, 3 convergence failure,
// 4 certificate failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "transonic/config.hpp"
#include "transonic/fixed_point.hpp"
#include "transonic/io.hpp"
#include "transonic/manufactured.hpp"

namespace fs = std::filesystem;
using namespace transonic;

namespace {

int thread_cap() {
    if (const char* env = std::getenv("TOOL_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Session {
    RunConfig cfg;
    fs::path out;
    std::uint64_t seed = 12345;

    void prepare() {
        out = cfg.out_dir;
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec) throw IOError("cannot create output directory: " + out.string());
    }

    BackgroundFlow1D background() const {
        return solve_background(cfg.gas, cfg.make_force(), cfg.M_x1);
    }

    std::shared_ptr<const RadialBasis> basis() const {
        return std::make_shared<const RadialBasis>(build_basis(cfg.N_modes, cfg.Q_nodes));
    }

    FixedPointParams fp_params() const {
        FixedPointParams p;
        p.delta0 = cfg.delta0_override;
        p.tol_fp = cfg.tol_fp;
        p.max_iter = cfg.max_iter;
        p.damping = cfg.damping;
        p.schedule = cfg.sigma;
        return p;
    }
};

ordered_json background_json(const BackgroundFlow1D& flow, const MultiplierCertificate& mc) {
    ordered_json j;
    j["J"] = flow.J;
    j["B0"] = flow.B0;
    j["c_star"] = flow.c_star;
    j["classification"] = flow.classification.name();
    j["predicted_exponent"] = flow.classification.predicted_exponent;
    j["sonic_slope"] = flow.classification.leading_coefficient;
    ordered_json m;
    m["d0"] = mc.d0;
    m["kappa_star"] = mc.kappa_star;
    m["sign_margins"] = mc.sign_margins;
    m["shift_margins"] = mc.shift_margins;
    j["multiplier_certificate"] = m;
    return j;
}

void emit_background_plots(const Session& s, const BackgroundFlow1D& flow) {
    if (!wants(s.cfg.formats, "svg")) return;
    std::vector<double> xs(flow.grid.n), mach(flow.grid.n);
    for (int i = 0; i < flow.grid.n; ++i) {
        xs[i] = flow.grid.x(i);
        mach[i] = flow.u[i] / std::sqrt(flow.c2[i]);
    }
    write_text_file((s.out / "background_u.svg").string(),
                    svg_line_plot("background velocity", "x1", "u", {{"u", "#1f77b4", xs, flow.u}}));
    write_text_file((s.out / "background_mach.svg").string(),
                    svg_line_plot("background Mach number", "x1", "Mach",
                                  {{"Mach", "#d62728", xs, mach}}));
}

int cmd_background(Session& s) {
    const BackgroundFlow1D flow = s.background();
    const MultiplierCertificate mc = verify_multiplier(flow);
    emit_table(s.out, "background", background_table(flow), s.cfg.formats);
    if (wants(s.cfg.formats, "json"))
        write_json_file((s.out / "report.json").string(), background_json(flow, mc));
    emit_background_plots(s, flow);
    std::printf("background: M=%d c_star=%.12f classification=%s d0=%.2f\n", flow.grid.n,
                flow.c_star, flow.classification.name().c_str(), mc.d0);
    return 0;
}

int cmd_basis(Session& s) {
    const auto B = s.basis();
    emit_table(s.out, "basis", basis_table(*B), s.cfg.formats);
    double gram_dev = 0.0;
    const int N = B->N, Q = B->Q();
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
            double g = 0.0;
            for (int q = 0; q < Q; ++q)
                g += B->quad.w[q] * B->b[static_cast<std::size_t>(j) * Q + q] *
                     B->b[static_cast<std::size_t>(k) * Q + q];
            gram_dev = std::max(gram_dev, std::abs(g - (j == k ? 1.0 : 0.0)));
        }
    if (wants(s.cfg.formats, "json")) {
        ordered_json j;
        j["N"] = N;
        j["Q"] = Q;
        j["lambda"] = B->lambda;
        j["gram_deviation"] = gram_dev;
        write_json_file((s.out / "report.json").string(), j);
    }
    std::printf("basis: N=%d Q=%d sqrt(lambda_2)=%.10f gram_dev=%.3e\n", N, Q,
                std::sqrt(B->lambda[1]), gram_dev);
    return 0;
}

int cmd_linear(Session& s) {
    const BackgroundFlow1D flow = s.background();
    const auto B = s.basis();
    const ManufacturedCase mc = manufactured_case(flow, B);
    const MultiplierCertificate mult = verify_multiplier(flow);
    const auto [psi, cert] = solve_linear(mc.co, s.cfg.sigma, mult.d0);
    const double err = manufactured_error(psi, mc);
    if (wants(s.cfg.formats, "json")) {
        ordered_json j;
        j["M"] = flow.grid.n;
        j["N"] = B->N;
        j["manufactured_l2r_error"] = err;
        j["certificate"] = certificate_json(cert);
        write_json_file((s.out / "linear_solve.json").string(), j);
    }
    std::printf("linear: M=%d err=%.3e converged=%d rejected=%d energy_ratio=%.4g\n", flow.grid.n,
                err, static_cast<int>(cert.converged), cert.rejected, cert.energy_ratio);
    if (!cert.converged)
        throw NoSigmaConvergence("linear: dissipation schedule did not converge");
    return 0;
}

int cmd_solve(Session& s) {
    const BackgroundFlow1D flow = s.background();
    const auto B = s.basis();
    const InletData inlet = make_inlet(s.cfg.eps, B, s.cfg.beta0, s.cfg.inlet_amplitude);
    const auto [psi1, rep] = fixed_point_solve(inlet, flow, s.fp_params());
    const SonicFront front = sonic_front(psi1, flow);
    const ResidualReport res = nonlinear_residual(psi1, flow);
    const NormReport norms = weighted_norms(psi1, 4);

    emit_table(s.out, "solution", solution_table(psi1, flow), s.cfg.formats);
    emit_table(s.out, "front", front_table(front), s.cfg.formats);
    emit_table(s.out, "norms", norms_table(norms), s.cfg.formats);
    if (wants(s.cfg.formats, "json")) {
        ordered_json j;
        j["fixed_point"] = fixed_point_json(rep);
        j["perturbation_norms"] = norms_json(norms);
        ordered_json fj;
        fj["c1_norm"] = front.c1_norm;
        j["sonic_front"] = fj;
        ordered_json rj;
        rj["l2r"] = res.l2r;
        rj["max"] = res.max;
        j["nonlinear_residual"] = rj;
        write_json_file((s.out / "report.json").string(), j);
    }
    if (wants(s.cfg.formats, "svg")) {
        emit_background_plots(s, flow);
        write_text_file((s.out / "front.svg").string(),
                        svg_line_plot("sonic front", "r", "xi",
                                      {{"xi", "#2ca02c", front.r, front.xi}}));
    }
    std::printf("solve: eps=%.3g iterations=%d max_ratio=%.3f |psi1|_H2r=%.4e front_c1=%.4e "
                "residual_l2r=%.3e\n",
                rep.eps, rep.iterations, rep.max_ratio, norms.h2r, front.c1_norm, res.l2r);
    return 0;
}

int cmd_sweep(Session& s) {
    const BackgroundFlow1D flow = s.background();
    const auto B = s.basis();
    const InletData inlet = make_inlet(s.cfg.eps, B, s.cfg.beta0, s.cfg.inlet_amplitude);
    const std::vector<double> eps_list = {s.cfg.eps, s.cfg.eps / 2.0, s.cfg.eps / 4.0};

    // entries are independent; run them in a thread batch capped by TOOL_THREADS
    const int n = static_cast<int>(eps_list.size());
    const int cap = std::min(thread_cap(), n);
    ScalingStudy st;
    st.rows.resize(n);
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (int t = 0; t < cap; ++t)
        pool.emplace_back([&, t] {
            for (int k = t; k < n; k += cap) {
                try {
                    InletData in = inlet;
                    in.eps = eps_list[k];
                    const auto [psi1, rep] = fixed_point_solve(in, flow, s.fp_params());
                    ScalingRow row;
                    row.eps = in.eps;
                    const NormReport nr = weighted_norms(psi1, 4);
                    row.h2 = nr.h2r;
                    row.h4 = nr.h4r;
                    row.iterations = rep.iterations;
                    row.max_ratio = rep.max_ratio;
                    row.c1_norm = sonic_front(psi1, flow).c1_norm;
                    st.rows[k] = row;
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            }
        });
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<double> fe, fh, fc;
    for (const ScalingRow& r : st.rows)
        if (r.eps > 0.0 && r.h2 > 0.0 && r.c1_norm > 0.0) {
            fe.push_back(r.eps);
            fh.push_back(r.h2);
            fc.push_back(r.c1_norm);
        }
    if (fe.size() >= 2) {
        st.slope_h2 = transonic::detail::loglog_slope(fe, fh);
        st.slope_front = transonic::detail::loglog_slope(fe, fc);
    }

    Table t;
    t.headers = {"eps", "h2r", "h4r", "front_c1", "iterations", "max_ratio"};
    t.cols.resize(6);
    for (const ScalingRow& r : st.rows) {
        t.cols[0].push_back(r.eps);
        t.cols[1].push_back(r.h2);
        t.cols[2].push_back(r.h4);
        t.cols[3].push_back(r.c1_norm);
        t.cols[4].push_back(r.iterations);
        t.cols[5].push_back(r.max_ratio);
    }
    emit_table(s.out, "sweep", t, s.cfg.formats);
    if (wants(s.cfg.formats, "json")) {
        ordered_json j;
        j["eps"] = eps_list;
        j["slope_h2r"] = st.slope_h2;
        j["slope_front_c1"] = st.slope_front;
        write_json_file((s.out / "report.json").string(), j);
    }
    std::printf("sweep: slope_h2r=%.4f slope_front_c1=%.4f\n", st.slope_h2, st.slope_front);
    return 0;
}

int cmd_verify(Session& s) {
    struct Row {
        std::string name;
        bool pass;
        std::string detail;
    };
    std::vector<Row> rows;
    auto add = [&rows](const std::string& name, bool pass, const std::string& detail) {
        rows.push_back({name, pass, detail});
    };
    char buf[160];

    const BackgroundFlow1D flow = s.background();
    const MultiplierCertificate mc = verify_multiplier(flow);
    double sign_min = 1e300, shift_min = 1e300;
    for (double v : mc.sign_margins) sign_min = std::min(sign_min, v);
    for (double v : mc.shift_margins) shift_min = std::min(shift_min, v);
    std::snprintf(buf, sizeof(buf), "min margins %.3f / %.3f at d0=%.2f", sign_min, shift_min,
                  mc.d0);
    add("multiplier coercivity", sign_min > 0.0 && shift_min >= 4.0, buf);

    const auto B = s.basis();
    double gram_dev = 0.0;
    for (int j = 0; j < B->N; ++j)
        for (int k = 0; k < B->N; ++k) {
            double g = 0.0;
            for (int q = 0; q < B->Q(); ++q)
                g += B->quad.w[q] * B->b[static_cast<std::size_t>(j) * B->Q() + q] *
                     B->b[static_cast<std::size_t>(k) * B->Q() + q];
            gram_dev = std::max(gram_dev, std::abs(g - (j == k ? 1.0 : 0.0)));
        }
    std::snprintf(buf, sizeof(buf), "max deviation %.3e", gram_dev);
    add("basis orthonormality", gram_dev <= 1e-10, buf);

    // random band-limited fields for the norm identities
    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Grid1D grid(s.cfg.gas.L0, s.cfg.gas.L1, s.cfg.M_x1);
    auto random_field = [&] {
        Field2D f(grid, B);
        for (int j = 0; j < B->N; ++j) {
            const double a0 = gauss(rng), b0 = gauss(rng), k = 1.0 + (j % 3);
            const double scale = 1.0 / ((1.0 + B->lambda[j]) * (1.0 + B->lambda[j]));
            for (int i = 0; i < grid.n; ++i) {
                const double x = grid.x(i);
                f.a(i, j) = scale * (a0 * std::cos(k * x) + b0 * std::sin(k * x));
            }
        }
        return f;
    };

    double worst_eq = 0.0;
    for (int t = 0; t < 5; ++t) {
        const Field2D f = random_field();
        for (int k = 0; k <= 2; ++k) {
            const EquivalenceCheck eq = norm_equivalence_check(f, k);
            worst_eq = std::max(worst_eq, std::abs(eq.ratio - 1.0));
        }
    }
    std::snprintf(buf, sizeof(buf), "max |ratio - 1| = %.3e over 5 fields, k <= 2", worst_eq);
    add("norm equivalence", worst_eq <= 1e-8, buf);

    double worst_alg = 0.0, worst_linf = 0.0;
    for (int t = 0; t < 5; ++t) {
        const Field2D f = random_field(), g = random_field();
        worst_alg = std::max(worst_alg, algebra_check(f, g, 2).ratio);
        Field2D fz = f;
        for (int i = 0; i < grid.n; ++i) {
            double axis = 0.0;
            for (int j = 0; j < B->N; ++j) axis += f.a(i, j) * B->value_at0(j);
            for (int j = 0; j < B->N; ++j)
                fz.a(i, j) = f.a(i, j) - axis * (j == 0 ? 1.0 / B->value_at0(0) : 0.0);
        }
        worst_linf = std::max(worst_linf, linf_bound_check(fz).ratio);
    }
    std::snprintf(buf, sizeof(buf), "algebra ratio <= %.3f, sup-bound ratio <= %.3f", worst_alg,
                  worst_linf);
    add("algebra and sup bounds finite", std::isfinite(worst_alg) && std::isfinite(worst_linf) &&
                                             worst_alg > 0.0,
        buf);

    const InletData inlet = make_inlet(s.cfg.eps, B, s.cfg.beta0, s.cfg.inlet_amplitude);
    const Psi0 p0 = build_psi0(inlet, flow);
    const Field2D zero(flow.grid, B);
    const CoefficientSet co = coefficients_from_state(zero, p0, s.cfg.eps, flow);
    std::snprintf(buf, sizeof(buf), "boundary compatibility deviation within 1e-6: %s",
                  co.compat.ok ? "yes" : "no");
    add("coefficient compatibilities", co.compat.ok, buf);

    bool all = true;
    for (const Row& r : rows) {
        std::printf("%-28s %s  (%s)\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                    r.detail.c_str());
        all = all && r.pass;
    }
    if (!all) throw NoCertificate("verify: at least one invariant suite failed");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"axisymmetric transonic nozzle flow solver"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    double eps_override = -1.0;
    std::uint64_t seed = 12345;

    std::vector<CLI::App*> subs;
    for (const char* name : {"background", "basis", "linear", "solve", "sweep", "verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "path to the run configuration")->required();
        sub->add_option("--out", out_override, "output directory override");
        sub->add_option("--eps", eps_override, "perturbation size override");
        sub->add_option("--seed", seed, "seed for randomized verification suites");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        Session s;
        s.cfg = parse_config(read_file(config_path));
        if (!out_override.empty()) s.cfg.out_dir = out_override;
        if (eps_override >= 0.0) s.cfg.eps = eps_override;
        s.seed = seed;
        s.prepare();

        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "background") return cmd_background(s);
        if (name == "basis") return cmd_basis(s);
        if (name == "linear") return cmd_linear(s);
        if (name == "solve") return cmd_solve(s);
        if (name == "sweep") return cmd_sweep(s);
        if (name == "verify") return cmd_verify(s);
        std::fprintf(stderr, "unknown subcommand\n");
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "convergence failure: %s\n", e.what());
        return 3;
    } catch (const CertificateError& e) {
        std::fprintf(stderr, "certificate failure: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
