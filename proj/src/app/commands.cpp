#include "debtcrit/app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "debtcrit/critical.hpp"
#include "debtcrit/fractional.hpp"
#include "debtcrit/maturity_mix.hpp"
#include "debtcrit/parastat.hpp"
#include "debtcrit/portfolio.hpp"

namespace debtcrit::app {

namespace {

constexpr const char* kModule = "cli";

bool positive(double x) {
    return x > 0.0 && std::isfinite(x);
}

// Runs one pipeline stage. Model and solver failures are recorded in the
// report and the stage reports false; input errors propagate.
template <class F>
bool stage(CommandResult& r, const char* name, F&& f, bool affects_exit = true) {
    try {
        f();
        return true;
    } catch (const Error& e) {
        const int code = exit_code_for(e.kind());
        if (code == kExitInput) throw;
        warn(&r.warnings, WarningCode::ModelStageFailed, e.module(),
             std::string(name) + ": " + std::string(to_string(e.kind())) + ": " + e.what());
        if (affects_exit) {
            r.exit_code = std::max(r.exit_code, code);
            if (r.error.empty()) r.error = std::string(to_string(e.kind())) + " [" + e.module() + "]: " + e.what();
        }
        return false;
    }
}

template <class F>
CommandResult guarded(F&& body) {
    CommandResult r;
    r.report = empty_report();
    try {
        body(r);
    } catch (const Error& e) {
        CommandResult failed;
        failed.exit_code = exit_code_for(e.kind());
        failed.error = std::string(to_string(e.kind())) + " [" + e.module() + "]: " + e.what();
        failed.warnings = std::move(r.warnings);
        if (failed.exit_code == kExitInput) return failed;
        // A model failure before any stage wrapper still yields a partial report.
        warn(&failed.warnings, WarningCode::ModelStageFailed, e.module(), failed.error);
        failed.report = std::move(r.report);
        failed.report["warnings"] = to_json(failed.warnings);
        return failed;
    }
    r.report["warnings"] = to_json(r.warnings);
    return r;
}

Json config_json(const AnalysisConfig& cfg) {
    return Json{{"dimension", cfg.dimension},
                {"tol", cfg.tol},
                {"max_iter", cfg.max_iter},
                {"rtol_verdict", cfg.rtol_verdict},
                {"grid_resolution", cfg.grid_resolution}};
}

Json critical_report_json(const CriticalReport& c) {
    return Json{{"V", c.V},
                {"sigma0_entropy", c.sigma0_entropy},
                {"sigma0_leading", c.sigma0_leading},
                {"sigma0_chempot", c.sigma0_chempot},
                {"coincidence_gap", c.coincidence_gap},
                {"K_const", c.K_const}};
}

void append(Warnings& into, const Warnings& from) {
    into.insert(into.end(), from.begin(), from.end());
}

void set_verdict(CommandResult& r, double sigma, double sigma0, const AnalysisConfig& cfg) {
    stage(r, "verdict", [&] {
        r.report["verdict"] = std::string(to_string(solvency_verdict(sigma, sigma0, cfg.rtol_verdict)));
    });
}

void analyze_integer(CommandResult& r, const NormalizedPortfolio& np, const AnalysisConfig& cfg) {
    const SolveConfig scfg = cfg.solve_config();
    if (np.k < 2) {
        stage(r, "fit", [] {
            throw Error(ErrorKind::DomainError, "parastat-core", "a single-slot portfolio has no parastatistic fit");
        });
        return;
    }

    FitResult fit;
    const bool fitted = stage(r, "fit", [&] { fit = fit_params(np.sigma, np.E, np.k, scfg); });
    if (fitted) {
        r.report["fit"] = Json{{"b", fit.params.b},
                               {"kappa", fit.params.kappa},
                               {"B", fit.B},
                               {"V", fit.params.velocity()},
                               {"sigma_model", fit.sigma},
                               {"E_model", fit.E},
                               {"sigma_residual", fit.sigma_residual},
                               {"E_residual", fit.E_residual},
                               {"iterations", fit.iterations}};
    }

    Json critical = Json::object();
    critical["aggregate"] = nullptr;
    // The aggregate velocity is a side estimate; its failure does not fail the run.
    stage(
        r, "aggregate velocity",
        [&] {
            const auto agg = critical_from_aggregates(np.E, np.sigma, np.k);
            critical["aggregate"] = Json{{"V", agg.V}, {"sigma0", agg.sigma0}};
        },
        false);

    if (!fitted) {
        r.report["critical"] = critical;
        return;
    }
    CriticalReport rep;
    const bool ok = stage(r, "critical", [&] { rep = critical_report(np.sigma, np.k, fit.params.velocity(), scfg,
                                                                     cfg.rtol_verdict); });
    if (!ok) {
        r.report["critical"] = critical;
        return;
    }
    append(r.warnings, rep.warnings);
    Json methods = critical_report_json(rep);
    methods["V_source"] = "fit";
    methods["aggregate"] = critical["aggregate"];
    r.report["critical"] = methods;
    r.report["verdict"] = std::string(to_string(rep.verdict));
}

void analyze_fractional(CommandResult& r, const NormalizedPortfolio& np, const AnalysisConfig& cfg) {
    Dimension dim = Dimension::from_alpha(0.75);
    if (!stage(r, "dimension", [&] { dim = Dimension::from_d(cfg.dimension); })) return;
    const double alpha = dim.alpha();

    EnergyLaw law;
    if (!stage(r, "energy law", [&] { law = energy_law_from_energy(np.E, alpha); })) return;
    Json critical{{"alpha", alpha},   {"d", dim.d()}, {"f_alpha", law.f_alpha},
                  {"V", law.V},       {"V_source", "energy_law"},
                  {"sigma0_fractional", critical_sigma_frac(alpha, law.V)}};
    critical["numeric"] = nullptr;
    if (np.k >= 2) {
        stage(r, "fractional quadrature", [&] {
            const auto fc = sigma0_frac_numeric(alpha, 1.0 / law.V, np.k, cfg.solve_config(), &r.warnings);
            critical["numeric"] = Json{{"sigma0", fc.sigma0},     {"B0", fc.B0},         {"sigma01", fc.sigma01},
                                       {"sigma02", fc.sigma02},   {"expansion", fc.expansion},
                                       {"leading", fc.leading},   {"iterations", fc.iterations}};
        });
    }
    r.report["critical"] = critical;
    set_verdict(r, np.sigma, critical["sigma0_fractional"].get<double>(), cfg);
}

}  // namespace

void AnalysisConfig::validate() const {
    const bool integer_dim = dimension == 2.0;
    const bool fractional_dim = dimension >= 1.0 && dimension < 2.0;
    if (!integer_dim && !fractional_dim) {
        throw Error(ErrorKind::InvalidArgument, kModule, "--dimension must be 2 or lie in [1, 2)");
    }
    if (!positive(tol) || max_iter < 1 || !(rtol_verdict >= 0.0) || grid_resolution < 1 || jobs < 1) {
        throw Error(ErrorKind::InvalidArgument, kModule,
                    "tolerances must be positive and --max-iter, --grid-resolution, --jobs at least 1");
    }
}

SolveConfig AnalysisConfig::solve_config() const {
    SolveConfig s;
    s.tol = tol;
    s.max_iter = max_iter;
    return s;
}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::EmptyPortfolio:
        case ErrorKind::NonPositiveAmount:
        case ErrorKind::NonPositiveDuration:
        case ErrorKind::ParseError:
        case ErrorKind::InvalidArgument:
        case ErrorKind::Io:
        case ErrorKind::EmptyTrajectory:
            return kExitInput;
        case ErrorKind::NoConvergence:
        case ErrorKind::QuadratureFailure:
            return kExitSolver;
        case ErrorKind::NumericalOverflow:
        case ErrorKind::NoRoot:
        case ErrorKind::InfeasibleAggregates:
        case ErrorKind::NonPositiveVelocity:
        case ErrorKind::DomainError:
            return kExitModel;
    }
    return kExitModel;
}

CommandResult run_analyze(const std::string& csv_path, const AnalysisConfig& cfg) {
    return guarded([&](CommandResult& r) {
        cfg.validate();
        const auto records = load_debts_csv(csv_path);
        const auto np = normalize(records, cfg.grid_resolution);
        r.report["input"] = Json{{"command", "analyze"}, {"path", csv_path}, {"config", config_json(cfg)}};
        r.report["normalized"] = Json{{"k", np.k},         {"s_hat", np.s_hat}, {"sigma", np.sigma},
                                      {"E", np.E},         {"E1", np.E1},       {"record_count", np.record_count}};
        if (np.k < 10) {
            warn(&r.warnings, WarningCode::SmallK, kModule,
                 "k = " + std::to_string(np.k) + " < 10; the model assumes many creditors");
        }
        if (cfg.dimension == 2.0) {
            analyze_integer(r, np, cfg);
        } else {
            analyze_fractional(r, np, cfg);
        }
    });
}

std::vector<CommandResult> run_analyze_batch(const std::vector<std::string>& csv_paths, const AnalysisConfig& cfg) {
    std::vector<CommandResult> out;
    out.reserve(csv_paths.size());
    const std::size_t jobs = static_cast<std::size_t>(std::max(cfg.jobs, 1));
    for (std::size_t start = 0; start < csv_paths.size(); start += jobs) {
        const std::size_t end = std::min(csv_paths.size(), start + jobs);
        std::vector<std::future<CommandResult>> wave;
        for (std::size_t i = start; i < end; ++i) {
            wave.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                      [&, i] { return run_analyze(csv_paths[i], cfg); }));
        }
        for (auto& f : wave) out.push_back(f.get());
    }
    return out;
}

CommandResult run_critical(double E, double sigma, std::int64_t k, const AnalysisConfig& cfg) {
    return guarded([&](CommandResult& r) {
        cfg.validate();
        if (!std::isfinite(E) || !positive(sigma) || k < 2) {
            throw Error(ErrorKind::InvalidArgument, kModule, "critical needs finite E, sigma > 0 and k >= 2");
        }
        r.report["input"] = Json{{"command", "critical"}, {"E", E}, {"sigma", sigma}, {"k", k},
                                 {"config", config_json(cfg)}};
        AggregateCritical agg;
        if (!stage(r, "aggregate velocity", [&] { agg = critical_from_aggregates(E, sigma, k); })) return;
        CriticalReport rep;
        if (!stage(r, "critical", [&] { rep = critical_report(sigma, k, agg.V, cfg.solve_config(), cfg.rtol_verdict); }))
            return;
        append(r.warnings, rep.warnings);
        Json critical = critical_report_json(rep);
        critical["V_source"] = "aggregate";
        critical["aggregate"] = Json{{"V", agg.V}, {"sigma0", agg.sigma0}};
        r.report["critical"] = critical;
        r.report["verdict"] = std::string(to_string(rep.verdict));
    });
}

CommandResult run_fractional(const FractionalArgs& args, const AnalysisConfig& cfg) {
    return guarded([&](CommandResult& r) {
        cfg.validate();
        if (args.alpha && args.d) {
            throw Error(ErrorKind::InvalidArgument, kModule, "give --alpha or --d, not both");
        }
        if (args.E.has_value() == args.V.has_value()) {
            throw Error(ErrorKind::InvalidArgument, kModule, "give exactly one of --E and --V");
        }
        if (args.k && *args.k < 2) {
            throw Error(ErrorKind::InvalidArgument, kModule, "--k must be at least 2");
        }
        const bool sweep = args.alpha_lo || args.alpha_hi;
        if (sweep && !(args.alpha_lo && args.alpha_hi && positive(args.alpha_step) && *args.alpha_lo <= *args.alpha_hi)) {
            throw Error(ErrorKind::InvalidArgument, kModule, "--alpha-range needs lo <= hi and a positive step");
        }
        if (!args.alpha && !args.d && !sweep && cfg.dimension == 2.0) {
            throw Error(ErrorKind::InvalidArgument, kModule, "give --alpha, --d or a fractional --dimension");
        }

        Json input{{"command", "fractional"}, {"config", config_json(cfg)}};
        if (args.alpha) input["alpha"] = *args.alpha;
        if (args.d) input["d"] = *args.d;
        if (args.E) input["E"] = *args.E;
        if (args.V) input["V"] = *args.V;
        if (args.k) input["k"] = *args.k;
        if (args.sigma) input["sigma"] = *args.sigma;
        if (sweep) input["alpha_range"] = Json{{"lo", *args.alpha_lo}, {"hi", *args.alpha_hi}, {"step", args.alpha_step}};
        r.report["input"] = input;

        Json critical = Json::object();
        const bool single = args.alpha || args.d || !sweep;
        if (single) {
            const Dimension dim = args.alpha ? Dimension::from_alpha(*args.alpha)
                                             : Dimension::from_d(args.d ? *args.d : cfg.dimension);
            const double alpha = dim.alpha();
            double V = 0.0;
            double E = 0.0;
            const double f = f_alpha(alpha);
            if (args.V) {
                if (!positive(*args.V)) throw Error(ErrorKind::InvalidArgument, kModule, "--V must be positive");
                V = *args.V;
                E = f * std::pow(V, 1.0 + alpha);
            } else {
                V = velocity_from_energy(*args.E, alpha);
                E = *args.E;
            }
            critical = Json{{"alpha", alpha}, {"d", dim.d()}, {"f_alpha", f}, {"V", V}, {"E", E},
                            {"sigma0_fractional", critical_sigma_frac(alpha, V)}};
            if (args.k) {
                critical["numeric"] = nullptr;
                stage(r, "fractional quadrature", [&] {
                    const auto fc = sigma0_frac_numeric(alpha, 1.0 / V, *args.k, cfg.solve_config(), &r.warnings);
                    critical["numeric"] = Json{{"sigma0", fc.sigma0},   {"B0", fc.B0},
                                               {"sigma01", fc.sigma01}, {"sigma02", fc.sigma02},
                                               {"expansion", fc.expansion}, {"leading", fc.leading},
                                               {"iterations", fc.iterations}};
                });
            }
        }
        if (sweep) {
            Json rows = Json::array();
            const double span = *args.alpha_hi - *args.alpha_lo;
            const auto count = static_cast<std::int64_t>(std::floor(span / args.alpha_step + 1e-9)) + 1;
            for (std::int64_t i = 0; i < count; ++i) {
                const double alpha = *args.alpha_lo + static_cast<double>(i) * args.alpha_step;
                const double a = Dimension::from_alpha(alpha).alpha();
                const double f = f_alpha(a);
                const double V = args.V ? *args.V : velocity_from_energy(*args.E, a);
                rows.push_back(Json{{"alpha", a}, {"f_alpha", f}, {"V", V}, {"sigma0", critical_sigma_frac(a, V)}});
            }
            critical["sweep"] = rows;
        }
        r.report["critical"] = critical;
        if (args.sigma && critical.contains("sigma0_fractional")) {
            set_verdict(r, *args.sigma, critical["sigma0_fractional"].get<double>(), cfg);
        }
    });
}

CommandResult run_mix(const MixArgs& args, const AnalysisConfig& cfg) {
    return guarded([&](CommandResult& r) {
        cfg.validate();
        MixedPortfolio p{args.m, args.n, args.s1, args.s2, args.L1, args.L2};
        p.validate();
        if (args.V && !positive(*args.V)) {
            throw Error(ErrorKind::InvalidArgument, kModule, "--V must be positive");
        }
        Json input{{"command", "mix"}, {"m", p.m},   {"n", p.n},   {"s1", p.s1},
                   {"s2", p.s2},       {"L1", p.L1}, {"L2", p.L2}, {"config", config_json(cfg)}};
        if (args.V) input["V"] = *args.V;
        r.report["input"] = input;

        const auto agg = mixed_aggregates(p);
        r.report["normalized"] = Json{{"k", p.k()}, {"sigma", agg.sigma}, {"E", agg.E}};

        const auto sd = short_dominant_approx(p, &r.warnings);
        Json critical{{"short_dominant", Json{{"V", sd.V}, {"sigma0", sd.sigma0}, {"validity", sd.validity}}}};
        critical["aggregate_path"] = nullptr;
        stage(
            r, "aggregate path",
            [&] {
                const auto ap = aggregate_path(p);
                critical["aggregate_path"] = Json{{"V", ap.V}, {"sigma0", ap.sigma0}};
            },
            false);
        double sigma0 = sd.sigma0;
        if (args.V) {
            if (p.k() < 2) throw Error(ErrorKind::InvalidArgument, kModule, "a critical value needs m + n >= 2");
            sigma0 = mixed_critical(p.m, p.n, *args.V, &r.warnings);
            critical["given_V"] = Json{{"V", *args.V}, {"sigma0", sigma0}};
        }
        r.report["critical"] = critical;
        if (sigma0 > 0.0) set_verdict(r, agg.sigma, sigma0, cfg);
    });
}

std::string render(const Json& report, OutputFormat format) {
    return format == OutputFormat::Json ? to_canonical_json(report) : to_text(report);
}

}  // namespace debtcrit::app
