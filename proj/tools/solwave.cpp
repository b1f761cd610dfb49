// solwave: pseudo-spectral workbench for solitary waves of the nonlocal
// derivative NLS equation. Subcommands: solve | verify | evolve | sweep |
// selftest.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "solwave/evolve.hpp"
#include "solwave/field.hpp"
#include "solwave/groundstate.hpp"
#include "solwave/params.hpp"
#include "solwave/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace solwave;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitBlocked = 3;
constexpr int kExitNoConvergence = 4;
constexpr int kExitIdentity = 5;
constexpr int kExitAllFailed = 6;

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct CommonOpts {
    std::size_t n = 1u << 14;
    double L = 128.0 * std::numbers::pi;
    std::string out = ".";
    std::string config;

    PhysicalParams phys;
    // reduced-coefficient overrides
    std::optional<double> A_over, B_over, nu_over, gamma_over;

    void add_grid_flags(CLI::App* app) {
        app->add_option("--n", n, "grid points (even); default 2^14");
        app->add_option("--L", L,
                        "half box length; default 128*pi (1/x tails need large boxes; "
                        "exact-solution verification is best at --n 32768)");
        app->add_option("--out", out, "output directory (SOLWAVE_OUT overrides)");
    }
    void add_param_flags(CLI::App* app) {
        app->add_option("--config", config, "flat key=value parameter file");
        app->add_option("--b", phys.b, "cubic coefficient b");
        app->add_option("--alpha", phys.alpha, "derivative coefficient alpha");
        app->add_option("--beta", phys.beta, "derivative coefficient beta");
        app->add_option("--gamma", phys.gamma, "nonlocal coefficient gamma");
        app->add_option("--omega", phys.omega, "frequency omega");
        app->add_option("--c", phys.c, "wave speed c");
        app->add_option("--A", A_over, "override reduced A");
        app->add_option("--B", B_over, "override reduced B");
        app->add_option("--nu", nu_over, "override reduced nu");
    }

    // precedence: CLI flag > config file > default
    void resolve(CLI::App* app) {
        if (!config.empty()) {
            PhysicalParams file = params_from_config_file(config);
            auto pick = [&](const char* flag, double& slot, double fileval) {
                if (app->count(flag) == 0) slot = fileval;
            };
            pick("--b", phys.b, file.b);
            pick("--alpha", phys.alpha, file.alpha);
            pick("--beta", phys.beta, file.beta);
            pick("--gamma", phys.gamma, file.gamma);
            pick("--omega", phys.omega, file.omega);
            pick("--c", phys.c, file.c);
        }
        if (const char* env = std::getenv("SOLWAVE_OUT")) out = env;
    }

    ReducedParams reduced() const {
        ReducedParams r = reduce(phys);
        if (A_over) r.A = *A_over;
        if (B_over) r.B = *B_over;
        if (nu_over) r.nu = *nu_over;
        if (gamma_over) r.gamma = *gamma_over;
        return r;
    }

    std::string config_hash() const {
        if (config.empty()) return fnv1a_hex("");
        std::ifstream is(config);
        std::stringstream ss;
        ss << is.rdbuf();
        return fnv1a_hex(ss.str());
    }
};

json params_json(const PhysicalParams& p, const ReducedParams& r) {
    return json{{"physical",
                 {{"b", p.b}, {"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma},
                  {"omega", p.omega}, {"c", p.c}}},
                {"reduced",
                 {{"A", r.A}, {"B", r.B}, {"G", r.G}, {"nu", r.nu}, {"gamma", r.gamma}}}};
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << j.dump(2) << "\n";
}

json make_manifest(const std::string& subcommand, const CommonOpts& opt,
                   const ReducedParams& r, const std::vector<std::string>& outputs,
                   double wall_ms) {
    json m;
    m["subcommand"] = subcommand;
    m["params"] = params_json(opt.phys, r);
    m["grid"] = {{"n", opt.n}, {"L", opt.L}};
    m["config_hash"] = opt.config_hash();
    m["outputs"] = outputs;
    m["timings"] = {{"wall_ms", wall_ms}};
    m["timestamp"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    return m;
}

struct SolveOutcome {
    int exit_code = 0;
    std::string summary;
    json manifest;
};

// Shared solve core used by cmd_solve and sweep workers.
SolveOutcome run_solve(const CommonOpts& opt, const std::string& problem, bool force,
                       double q, double a1, double a2, double tol,
                       std::size_t max_iters, const fs::path& outdir) {
    SolveOutcome out;
    const auto t0 = std::chrono::steady_clock::now();
    ReducedParams r = opt.reduced();

    auto screen = nonexistence_screen(r);
    const bool wants_nehari =
        problem == "auto" || problem == "subcritical" || problem == "critical" ||
        problem == "petviashvili";
    if (!screen.admissible && wants_nehari && !force) {
        out.exit_code = kExitBlocked;
        out.summary = "blocked: " + screen.reason + " (use --force to attempt anyway)";
        return out;
    }

    std::string chosen = problem;
    if (chosen == "auto") {
        for (const auto& reg : classify(r)) {
            switch (reg.tag) {
                case RegimeTag::SubcriticalNehari: chosen = "subcritical"; break;
                case RegimeTag::CriticalNehari: chosen = "critical"; break;
                case RegimeTag::FixedMeanFlow: chosen = "meanflow"; break;
                case RegimeTag::FixedQuartic: chosen = "quartic"; break;
                default: continue;
            }
            break;
        }
        if (chosen == "auto") {
            out.exit_code = kExitBlocked;
            out.summary = "no admissible problem for this sign pattern";
            return out;
        }
    }

    SolveConfig cfg;
    cfg.grid = make_grid(opt.n, opt.L);
    cfg.tol_residual = tol;
    cfg.max_iters = max_iters;

    GroundState gs;
    try {
        if (chosen == "subcritical") gs = solve_nehari_subcritical(r, cfg);
        else if (chosen == "critical") gs = solve_nehari_critical(r, cfg);
        else if (chosen == "petviashvili") gs = petviashvili_solve(r, cfg);
        else if (chosen == "meanflow") gs = solve_fixed_meanflow(q, a1, a2, r.nu, cfg);
        else if (chosen == "quartic") gs = solve_fixed_quartic(q, r.B, r.gamma, cfg);
        else {
            out.exit_code = kExitParse;
            out.summary = "unknown problem: " + chosen;
            return out;
        }
    } catch (const NoConvergenceError& e) {
        out.exit_code = kExitNoConvergence;
        out.summary = std::string("no convergence: ") + e.what();
        return out;
    } catch (const std::exception& e) {
        out.exit_code = kExitNoConvergence;
        out.summary = std::string("solve failed: ") + e.what();
        return out;
    }

    fs::create_directories(outdir);
    const fs::path csv = outdir / "psi.csv";
    const fs::path gsjson = outdir / "groundstate.json";
    write_field_csv(gs.psi, csv.string());
    write_json(groundstate_to_json(gs, csv.filename().string()), gsjson);

    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    out.manifest = make_manifest("solve", opt, r,
                                 {csv.filename().string(), gsjson.filename().string()},
                                 ms);
    out.manifest["problem"] = chosen;
    write_json(out.manifest, outdir / "manifest.json");

    char line[256];
    std::snprintf(line, sizeof(line),
                  "%s: E=%.6g K=%.3g Q4=%.6g mu=%.6g residual=%.3g iters=%zu",
                  gs.regime.c_str(), gs.values.E, gs.values.K, gs.values.Q_quartic,
                  gs.mu, gs.residual, gs.iterations);
    out.summary = line;
    return out;
}

std::map<std::string, double> parse_inline_kv(const std::string& s) {
    std::map<std::string, double> kv;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("expected key=value, got: " + item);
        kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return kv;
}

// sweep axis: "name=v1,v2,v3" or "name=start:stop:step"
struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

SweepAxis parse_axis(const std::string& s) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw std::runtime_error("axis needs name=values: " + s);
    SweepAxis ax;
    ax.name = s.substr(0, eq);
    const std::string rhs = s.substr(eq + 1);
    if (rhs.find(':') != std::string::npos) {
        double start, stop, step;
        char c1, c2;
        std::stringstream ss(rhs);
        if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
            step == 0.0)
            throw std::runtime_error("bad range axis: " + s);
        const int nsteps = static_cast<int>(std::floor((stop - start) / step + 1e-9));
        for (int i = 0; i <= nsteps; ++i) ax.values.push_back(start + i * step);
    } else {
        std::stringstream ss(rhs);
        std::string item;
        while (std::getline(ss, item, ',')) ax.values.push_back(std::stod(item));
    }
    if (ax.values.empty()) throw std::runtime_error("empty axis: " + s);
    return ax;
}

void set_param(PhysicalParams& p, const std::string& name, double v) {
    if (name == "b") p.b = v;
    else if (name == "alpha") p.alpha = v;
    else if (name == "beta") p.beta = v;
    else if (name == "gamma") p.gamma = v;
    else if (name == "omega") p.omega = v;
    else if (name == "c") p.c = v;
    else throw std::runtime_error("unknown sweep parameter: " + name);
}

int cmd_selftest() {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    auto g = make_grid(1u << 10, 32.0 * std::numbers::pi);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> dist;
    Field f(g);
    for (auto& z : f.v) z = cplx(dist(rng), dist(rng));
    f = dealias(f);

    Field hf = hilbert(f);
    check("hilbert skew-adjoint", std::abs(inner_real(hf, f) + inner_real(f, hf)) < 1e-10);
    Field zm = f;  // zero-mean copy
    {
        auto c = to_spectral(zm);
        c[0] = 0.0;
        zm = from_spectral(g, std::move(c));
    }
    check("H^2 = -I on zero mean", norm_l2(hilbert(hilbert(zm)) + zm) < 1e-10 * norm_l2(zm));
    check("parseval", std::abs(inner(f, f).real() - inner_spectral(f, f).real()) <
                          1e-10 * inner(f, f).real());

    Field rho = density(f);
    double lhs = inner_real(nonlocal_deriv(rho), rho);
    Field half = frac_derivative(dealias(rho), 0.5);
    check("|D|^{1/2} factorization",
          std::abs(lhs - inner_real(half, half)) < 1e-8 * std::max(1.0, lhs));

    // small sech solve against the closed form
    try {
        SolveConfig cfg;
        cfg.grid = make_grid(1u << 11, 16.0 * std::numbers::pi);
        cfg.tol_residual = 1e-9;
        ReducedParams r;
        r.nu = -1.0;
        r.A = -1.0;
        auto gs = solve_nehari_subcritical(r, cfg);
        double err = 0.0;
        for (std::size_t i = 0; i < gs.psi.size(); ++i)
            err = std::max(err, std::abs(gs.psi.v[i].real() -
                                         std::sqrt(2.0) / std::cosh(cfg.grid->x[i])));
        check("sech ground state", err < 1e-5);
    } catch (const std::exception& e) {
        std::cout << "FAIL sech ground state (" << e.what() << ")\n";
        ++failures;
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solwave: solitary waves of the nonlocal derivative NLS"};
    app.require_subcommand(1);

    CommonOpts opt;

    // --- solve ---
    auto* solve = app.add_subcommand("solve", "compute a ground-state profile");
    std::string problem = "auto";
    bool force = false;
    double q = 1.0, a1 = 1.0, a2 = 1.0, tol = 1e-9;
    std::size_t max_iters = 20000;
    solve->add_option("--problem", problem,
                      "auto|subcritical|critical|meanflow|quartic|petviashvili");
    solve->add_flag("--force", force, "attempt solve in a blocked sign regime");
    solve->add_option("--q", q, "constraint level for meanflow/quartic problems");
    solve->add_option("--alpha1", a1, "meanflow multiplier weight alpha1");
    solve->add_option("--alpha2", a2, "meanflow multiplier weight alpha2");
    solve->add_option("--tol", tol, "residual tolerance");
    solve->add_option("--max-iters", max_iters, "iteration cap");
    opt.add_grid_flags(solve);
    opt.add_param_flags(solve);

    // --- verify ---
    auto* verify = app.add_subcommand("verify", "audit a profile against the identities");
    std::string exact_spec, field_path;
    double vtol = 5e-3;
    verify->add_option("--exact", exact_spec,
                       "audit the closed-form profile, e.g. a=1,x0=0,gamma=-1");
    verify->add_option("--field", field_path, "audit a profile CSV (x,re,im)");
    verify->add_option("--tol", vtol, "normalized residual tolerance");
    opt.add_grid_flags(verify);
    opt.add_param_flags(verify);

    // --- evolve ---
    auto* evolve = app.add_subcommand("evolve", "time-evolve the full equation");
    std::string efield;
    double T = 1.0, dt = 0.0;
    std::size_t stride = 16;
    bool diagnostic = false;
    evolve->add_option("--field", efield, "initial profile CSV (reconstructed via gauge)");
    evolve->add_option("--T", T, "final time");
    evolve->add_option("--dt", dt, "time step (default 0.4/max k^2)");
    evolve->add_option("--stride", stride, "trace sampling stride");
    evolve->add_flag("--diagnostic", diagnostic,
                     "tolerate non-periodic reconstruction phases (flagged, not fatal)");
    opt.add_grid_flags(evolve);
    opt.add_param_flags(evolve);

    // --- sweep ---
    auto* sweep = app.add_subcommand("sweep", "cartesian parameter sweep of solves");
    std::vector<std::string> axes_spec;
    std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
    sweep->add_option("--axis", axes_spec,
                      "sweep axis, name=v1,v2,... or name=start:stop:step")
        ->required();
    sweep->add_option("--jobs", jobs, "worker pool size");
    sweep->add_option("--problem", problem,
                      "auto|subcritical|critical|meanflow|quartic|petviashvili");
    sweep->add_option("--q", q, "constraint level for meanflow/quartic problems");
    sweep->add_option("--tol", tol, "residual tolerance");
    sweep->add_option("--max-iters", max_iters, "iteration cap");
    opt.add_grid_flags(sweep);
    opt.add_param_flags(sweep);

    // --- selftest ---
    auto* selftest = app.add_subcommand("selftest", "fast internal consistency checks");
    selftest->add_option("--out", opt.out, "unused; accepted for uniformity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        opt.resolve(sub);
        const fs::path outdir = opt.out;

        if (sub == solve) {
            auto res = run_solve(opt, problem, force, q, a1, a2, tol, max_iters, outdir);
            std::cout << res.summary << "\n";
            return res.exit_code;
        }

        if (sub == verify) {
            const auto t0 = std::chrono::steady_clock::now();
            Field psi;
            ReducedParams r;
            if (!exact_spec.empty()) {
                auto kv = parse_inline_kv(exact_spec);
                auto grid = make_grid(opt.n, opt.L);
                auto [p, rr] = exact_solution(grid, kv.count("a") ? kv["a"] : 1.0,
                                              kv.count("x0") ? kv["x0"] : 0.0,
                                              kv.count("gamma") ? kv["gamma"] : -1.0);
                psi = std::move(p);
                r = rr;
            } else if (!field_path.empty()) {
                psi = read_field_csv(field_path);
                r = opt.reduced();
            } else {
                std::cerr << "verify needs --exact or --field\n";
                return kExitParse;
            }
            auto el = el_residual(psi, r);
            auto poh = pohozaev_check(psi, r);
            const double kzero = nehari_zero_check(psi, r);
            const double scale =
                std::max(1.0, lp_power_sum(derivative(psi), 2) +
                                   (1.0 + std::abs(r.nu)) * lp_power_sum(psi, 2));
            const bool ok = el.normalized <= vtol &&
                            poh.id1_residual <= vtol * scale &&
                            poh.id2_residual <= vtol * scale && kzero <= vtol * scale;
            json rep;
            rep["el_residual"] = {{"raw", el.raw}, {"normalized", el.normalized}};
            rep["pohozaev"] = poh;
            rep["nehari_K"] = kzero;
            rep["tolerance"] = vtol;
            rep["pass"] = ok;
            fs::create_directories(outdir);
            write_json(rep, outdir / "verify.json");
            const double ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
            write_json(make_manifest("verify", opt, r, {"verify.json"}, ms),
                       outdir / "manifest.json");
            std::cout << (ok ? "verify: pass" : "verify: FAIL")
                      << " (normalized residual " << el.normalized << ")\n";
            return ok ? 0 : kExitIdentity;
        }

        if (sub == evolve) {
            const auto t0 = std::chrono::steady_clock::now();
            ReducedParams r = opt.reduced();
            Field u0;
            if (!efield.empty()) {
                Field psi = read_field_csv(efield);
                u0 = reconstruct_traveling_wave(psi, opt.phys, 0.0, diagnostic).u;
            } else {
                std::cerr << "evolve needs --field\n";
                return kExitParse;
            }
            EvolveConfig cfg;
            cfg.p = opt.phys;
            cfg.dt = dt;
            cfg.t_final = T;
            cfg.stride = stride;
            fs::create_directories(outdir);
            EvolutionTrace tr;
            bool blowup = false;
            double t_blow = 0.0;
            try {
                tr = run(u0, cfg);
            } catch (const NonFiniteError& e) {
                tr = e.partial;
                blowup = true;
                t_blow = e.t_blowup;
            }
            write_trace_csv(tr, (outdir / "trace.csv").string());
            const double ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
            json m = make_manifest("evolve", opt, r, {"trace.csv"}, ms);
            if (blowup) m["blowup_time"] = t_blow;
            write_json(m, outdir / "manifest.json");
            if (blowup)
                std::cout << "evolve: finite-time blow-up detected at t = " << t_blow
                          << "\n";
            else
                std::cout << "evolve: final drift " << tr.drift.back() << "\n";
            return 0;
        }

        if (sub == sweep) {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<SweepAxis> axes;
            for (const auto& s : axes_spec) axes.push_back(parse_axis(s));
            std::vector<std::vector<double>> points;  // cartesian product
            points.push_back({});
            for (const auto& ax : axes) {
                std::vector<std::vector<double>> next;
                for (const auto& p : points)
                    for (double v : ax.values) {
                        auto q2 = p;
                        q2.push_back(v);
                        next.push_back(std::move(q2));
                    }
                points = std::move(next);
            }

            fs::create_directories(outdir);
            std::vector<json> entries(points.size());
            std::atomic<std::size_t> next_idx{0};
            std::atomic<std::size_t> succeeded{0};
            auto worker = [&]() {
                for (;;) {
                    const std::size_t i = next_idx.fetch_add(1);
                    if (i >= points.size()) return;
                    CommonOpts local = opt;
                    for (std::size_t a = 0; a < axes.size(); ++a)
                        set_param(local.phys, axes[a].name, points[i][a]);
                    const fs::path pdir = outdir / ("point_" + std::to_string(i));
                    json entry;
                    entry["index"] = i;
                    for (std::size_t a = 0; a < axes.size(); ++a)
                        entry["params"][axes[a].name] = points[i][a];
                    entry["dir"] = pdir.filename().string();
                    ReducedParams lr = local.reduced();
                    auto screen = nonexistence_screen(lr);
                    if (!screen.admissible) {
                        entry["status"] = "blocked";
                        entry["reason"] = screen.reason;
                    } else {
                        auto res = run_solve(local, problem, false, q, 1.0, 1.0, tol,
                                             max_iters, pdir);
                        entry["status"] = res.exit_code == 0 ? "ok" : "failed";
                        entry["summary"] = res.summary;
                        if (res.exit_code == 0) succeeded.fetch_add(1);
                    }
                    entries[i] = std::move(entry);
                }
            };
            std::vector<std::thread> pool;
            for (std::size_t j = 0; j < std::min<std::size_t>(jobs, points.size()); ++j)
                pool.emplace_back(worker);
            for (auto& th : pool) th.join();

            json index;
            index["points"] = entries;
            index["succeeded"] = succeeded.load();
            index["total"] = points.size();
            const double ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
            index["manifest"] = make_manifest("sweep", opt, opt.reduced(),
                                              {"index.json"}, ms);
            write_json(index, outdir / "index.json");
            std::cout << "sweep: " << succeeded.load() << "/" << points.size()
                      << " points succeeded\n";
            return succeeded.load() > 0 ? 0 : kExitAllFailed;
        }

        if (sub == selftest) return cmd_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
