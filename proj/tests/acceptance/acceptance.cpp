// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
//
//   acceptance [--criterion N] --cli PATH --golden DIR --data DIR
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <CLI11.hpp>

#include "debtcrit/app/commands.hpp"
#include "debtcrit/app/report.hpp"
#include "debtcrit/asymptotics.hpp"
#include "debtcrit/critical.hpp"
#include "debtcrit/fractional.hpp"
#include "debtcrit/maturity_mix.hpp"
#include "debtcrit/parastat.hpp"
#include "debtcrit/portfolio.hpp"

namespace fs = std::filesystem;
using namespace debtcrit;

namespace {

struct Paths {
    std::string cli;
    std::string golden;
    std::string data;
};

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome(const Paths&)> run;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double rel(double a, double b) {
    return std::abs(a - b) / std::abs(b);
}

SolveConfig tight(double tol = 1e-13) {
    SolveConfig c;
    c.tol = tol;
    c.max_iter = 200000;
    return c;
}

// 1: |sigma0 chempot - sigma0 entropy| / V <= 5/k^2.
Outcome two_method_coincidence(const Paths&) {
    Outcome o{true, ""};
    double worst = 0.0;
    for (std::int64_t k : {100, 1000, 10000}) {
        for (double V : {1.0, 10.0, 100.0}) {
            const double gap = std::abs(critical_sigma_chempot(k, V, tight(1e-14)) - critical_sigma_entropy(k, V)) / V;
            const double bound = 5.0 / (static_cast<double>(k) * static_cast<double>(k));
            worst = std::max(worst, gap / bound);
            if (!(gap <= bound)) o.pass = false;
        }
    }
    o.detail = "worst gap / bound = " + fmt("%.3g", worst);
    return o;
}

// 2: at kappa = 1, best deviation of the closed-form sigma from the exact sum
// over b giving exact B in [1, 3]; <= 10% at k = 100 and falling in k.
Outcome exact_vs_asymptotic(const Paths&) {
    std::vector<double> best;
    std::vector<double> small_b;
    std::string detail;
    for (std::int64_t k : {100, 1000, 10000}) {
        double dev = std::numeric_limits<double>::infinity();
        double at_b = 0.0;
        double at_B = 0.0;
        for (int i = 0; i <= 40; ++i) {
            const double b = std::pow(10.0, -4.0 + 4.0 * i / 40.0);
            const ParastatParams p{b, 1.0, k};
            const auto s = solve_sigma(p, tight(1e-12));
            if (s.frozen) continue;
            const double B = p.B(s.sigma);
            if (B < 1.0 || B > 3.0) continue;
            const double d = rel(sigma_asym(b, 1.0, k, tight()), s.sigma);
            if (d < dev) {
                dev = d;
                at_b = b;
                at_B = B;
            }
        }
        best.push_back(dev);
        const ParastatParams tiny{1e-6, 1.0, k};
        small_b.push_back(rel(sigma_asym(tiny.b, 1.0, k, tight()), solve_sigma(tiny, tight(1e-12)).sigma));
        detail += "k=" + std::to_string(k) + ": " + fmt("%.3g", dev) + " (b=" + fmt("%.3g", at_b) + ", B=" +
                  fmt("%.3g", at_B) + "); ";
    }
    const bool pass = best[0] <= 0.10 && best[1] < best[0] && best[2] < best[1];
    detail += "at b=1e-6 (B outside [1,3]): " + fmt("%.3g", small_b[0]) + ", " + fmt("%.3g", small_b[1]) + ", " +
              fmt("%.3g", small_b[2]);
    return {pass, detail};
}

// 3: forward model then fit on 20 random points with B in [1, 5].
Outcome fit_round_trip(const Paths&) {
    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int accepted = 0;
    int failures = 0;
    double worst = 0.0;
    while (accepted < 20) {
        const auto k = static_cast<std::int64_t>(std::round(std::pow(10.0, 2.0 + 2.0 * u01(rng))));
        const double kappa = std::pow(10.0, -0.5 + 1.5 * u01(rng));
        const double b = std::pow(10.0, -4.0 + 3.0 * u01(rng));
        const ParastatParams p{b, kappa, k};
        const auto f = forward_model(p, tight());
        const double B = p.B(f.sigma);
        if (f.sigma <= 0.0 || B < 1.0 || B > 5.0) continue;
        ++accepted;
        try {
            const auto fit = fit_params(f.sigma, f.E, k, SolveConfig{});
            const double err = std::max(rel(fit.params.b, b), rel(fit.params.kappa, kappa));
            worst = std::max(worst, err);
            if (!(err <= 1e-6)) ++failures;
        } catch (const Error&) {
            ++failures;
            worst = std::numeric_limits<double>::infinity();
        }
    }
    return {failures == 0, std::to_string(failures) + " of 20 missed; worst relative error " + fmt("%.3g", worst)};
}

// 4: E = (k + 1) sigma - E1 on 1000 random portfolios.
Outcome payoff_identity(const Paths&) {
    std::mt19937_64 rng(271828);
    std::uniform_int_distribution<int> count(1, 200);
    std::uniform_real_distribution<double> amount(1e-3, 1e6);
    std::uniform_real_distribution<double> duration(0.1, 365.0);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        std::vector<DebtRecord> debts(static_cast<std::size_t>(count(rng)));
        for (std::size_t i = 0; i < debts.size(); ++i) {
            debts[i] = {"d" + std::to_string(i), amount(rng), duration(rng)};
        }
        const auto p = normalize(debts);
        worst = std::max(worst, rel(static_cast<double>(p.k + 1) * p.sigma - p.E1, p.E));
    }
    return {worst <= 1e-12, "worst relative error " + fmt("%.3g", worst)};
}

// 5: Gamma, zeta and f(alpha) spot values, f increasing on [0.1, 1.69].
Outcome special_functions(const Paths&) {
    const double pi = std::acos(-1.0);
    const std::array<double, 5> errs{std::abs(gamma_fn(1.0) - 1.0), std::abs(gamma_fn(0.5) - std::sqrt(pi)),
                                     std::abs(zeta_fn(2.0) - pi * pi / 6.0),
                                     std::abs(zeta_fn(4.0) - std::pow(pi, 4) / 90.0),
                                     std::abs(f_alpha(1.0) - pi * pi / 6.0)};
    const double worst = *std::max_element(errs.begin(), errs.end());
    bool monotone = true;
    double prev = f_alpha(0.1);
    for (int i = 11; i <= 169; ++i) {
        const double cur = f_alpha(i / 100.0);
        monotone = monotone && cur > prev;
        prev = cur;
    }
    return {worst <= 1e-10 && monotone,
            "worst spot error " + fmt("%.3g", worst) + "; f increasing: " + (monotone ? "yes" : "no")};
}

// 6: alpha = 0.5, b = 1: quadrature vs two-term expansion at k = 1e6 within 1%,
// and deviation from the leading term falling over k = 1e4, 1e6, 1e8.
Outcome fractional_critical(const Paths&) {
    const auto mid = sigma0_frac_numeric(0.5, 1.0, 1000000, tight());
    const double dev = rel(mid.expansion, mid.sigma0);
    std::vector<double> lead;
    for (std::int64_t k : {10000, 1000000, 100000000}) {
        const auto r = sigma0_frac_numeric(0.5, 1.0, k, tight());
        lead.push_back(rel(r.leading, r.sigma0));
    }
    const bool falling = lead[1] < lead[0] && lead[2] < lead[1];
    return {dev <= 0.01 && falling,
            "quadrature " + fmt("%.10g", mid.sigma0) + " vs expansion " + fmt("%.10g", mid.expansion) +
                " (deviation " + fmt("%.3g", dev) + "); leading-term deviation " + fmt("%.4g", lead[0]) + ", " +
                fmt("%.4g", lead[1]) + ", " + fmt("%.4g", lead[2])};
}

// 7: at fixed E, sigma0 rises and V falls with alpha over [0.55, 0.95].
Outcome fractional_directions(const Paths&) {
    bool pass = true;
    std::string detail;
    for (double E : {10.0, 100.0, 1000.0}) {
        double prev_s = -1.0;
        double prev_V = std::numeric_limits<double>::infinity();
        bool ok = true;
        for (int i = 0; i <= 8; ++i) {
            const double alpha = 0.55 + 0.05 * i;
            const double V = velocity_from_energy(E, alpha);
            const double s = critical_sigma_frac(alpha, V);
            ok = ok && s > prev_s && V < prev_V;
            prev_s = s;
            prev_V = V;
        }
        pass = pass && ok;
        detail += "E=" + fmt("%g", E) + (ok ? " ok; " : " violated; ");
    }
    return {pass, detail};
}

// 8: short-dominant estimate vs aggregate velocity path.
Outcome maturity_mix_two_path(const Paths&) {
    std::string detail;
    bool pass = true;
    const MixedPortfolio base{10000, 10, 1.0, 1.0, 1.0, 100.0};
    const auto approx = short_dominant_approx(base);
    try {
        const auto exact = aggregate_path(base);
        const double dev = rel(approx.sigma0, exact.sigma0);
        pass = dev <= 0.05;
        detail += "deviation at m=1e4, n=10: " + fmt("%.3g", dev) + "; ";
    } catch (const Error& e) {
        pass = false;
        detail += "m=1e4, n=10: aggregate path failed (" + std::string(e.what()) + "); ";
    }
    int grid_fail = 0;
    for (int i = 0; i < 10; ++i) {
        const std::int64_t n = 1 + i;
        const MixedPortfolio p{100 * n * (1 + i), n, 1.0, 1.0, 1.0, 100.0 * (1 + i)};
        const auto a = short_dominant_approx(p);
        try {
            const auto ex = aggregate_path(p);
            if (!(rel(a.sigma0, ex.sigma0) <= 3.0 * a.validity)) ++grid_fail;
        } catch (const Error&) {
            ++grid_fail;
        }
    }
    pass = pass && grid_fail == 0;
    detail += "dominance grid: " + std::to_string(grid_fail) + " of 10 outside 3 (n/m + L1/L2)";
    return {pass, detail};
}

// 9: verdicts and normalized aggregates survive rescaling and shuffling.
Outcome normalization_invariance(const Paths&) {
    std::mt19937_64 rng(161803);
    std::uniform_real_distribution<double> amount(1.0, 3.0);
    std::uniform_int_distribution<int> reverse(80, 100);
    std::vector<DebtRecord> debts;
    for (int i = 0; i < 51; ++i) {
        debts.push_back({"d" + std::to_string(i), amount(rng), 100.0 / reverse(rng)});
    }
    debts.push_back({"long", amount(rng), 100.0});
    debts.push_back({"short", amount(rng), 1.0});

    const auto dir = fs::temp_directory_path() / "debtcrit_acceptance";
    fs::create_directories(dir);
    auto write = [&](const std::vector<DebtRecord>& ds, const std::string& name) {
        const auto path = dir / name;
        std::ofstream out(path);
        out << "id,amount,duration\n";
        out.precision(17);
        for (const auto& d : ds) out << d.id << "," << d.amount << "," << d.duration << "\n";
        return path.string();
    };

    const auto reference = app::run_analyze(write(debts, "base.csv"), app::AnalysisConfig{});
    if (reference.report.is_null() || reference.report["verdict"].is_null()) {
        return {false, "reference portfolio did not produce a verdict: " + reference.error};
    }
    const auto& ref_norm = reference.report["normalized"];
    int mismatches = 0;
    int runs = 0;
    for (double c : {1e-6, 1.0, 1e9}) {
        for (int shuffle = 0; shuffle < 3; ++shuffle) {
            auto variant = debts;
            for (auto& d : variant) d.amount *= c;
            if (shuffle) std::shuffle(variant.begin(), variant.end(), rng);
            const auto r = app::run_analyze(write(variant, "variant.csv"), app::AnalysisConfig{});
            ++runs;
            bool same = !r.report.is_null() && r.report["verdict"] == reference.report["verdict"];
            for (const char* key : {"sigma", "E", "E1"}) {
                same = same && rel(r.report["normalized"][key].get<double>(), ref_norm[key].get<double>()) <= 1e-12;
            }
            same = same && r.report["normalized"]["k"] == ref_norm["k"];
            if (!same) ++mismatches;
        }
    }
    return {mismatches == 0, std::to_string(mismatches) + " of " + std::to_string(runs) +
                                 " variants differ; reference verdict " +
                                 reference.report["verdict"].get<std::string>()};
}

// 10: argmax of the entropy over B in [1, 2 ln k] with kappa = k e^{-B}.
Outcome entropy_argmax(const Paths&) {
    bool pass = true;
    std::string detail;
    constexpr double step = 1e-3;
    for (std::int64_t k : {100, 1000}) {
        const double kd = static_cast<double>(k);
        const double hi = 2.0 * std::log(kd);
        double best_B = 1.0;
        double best_S = -std::numeric_limits<double>::infinity();
        const int n = static_cast<int>(std::floor((hi - 1.0) / step));
        for (int i = 0; i <= n; ++i) {
            const double B = 1.0 + i * step;
            const double S = entropy(1.0, k, B, kd * std::exp(-B));
            if (S > best_S) {
                best_S = S;
                best_B = B;
            }
        }
        const double target = std::log(kd) - 1.0 / kd;
        const bool ok = std::abs(best_B - target) <= step;
        pass = pass && ok;
        detail += "k=" + std::to_string(k) + ": argmax " + fmt("%.3f", best_B) + " vs " + fmt("%.3f", target) + "; ";
    }
    return {pass, detail};
}

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run_cli(const std::string& cwd, const std::string& cmd) {
    CliRun r;
    const std::string full = "cd '" + cwd + "' && " + cmd + " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 11: golden JSON reports and the exit-code contract.
Outcome cli_contract(const Paths& paths) {
    const std::string cli = "'" + paths.cli + "'";
    struct Golden {
        const char* file;
        std::string args;
        int code;
    };
    const std::vector<Golden> goldens{
        {"critical.json", "--format json critical --E 2000 --sigma 10 --k 100", 0},
        {"fractional.json", "--format json fractional --alpha 0.75 --V 4", 0},
        {"mix.json", "--format json mix --m 10000 --n 10 --s1 1 --s2 1 --L1 1 --L2 100", 0},
        {"analyze_example3.json", "--format json analyze example3.csv", 3},
    };
    std::string detail;
    bool pass = true;
    for (const auto& g : goldens) {
        const auto r = run_cli(paths.data, cli + " " + g.args);
        const bool same = r.out == slurp(paths.golden + "/" + g.file);
        bool round_trip = false;
        try {
            round_trip = app::to_canonical_json(app::Json::parse(r.out)) == r.out;
        } catch (const std::exception&) {
        }
        const bool ok = same && round_trip && r.code == g.code;
        pass = pass && ok;
        if (!ok) detail += std::string(g.file) + " mismatch (exit " + std::to_string(r.code) + "); ";
    }

    // Values the golden files must carry, checked independently of them.
    const auto crit = app::Json::parse(run_cli(paths.data, cli + " --format json critical --E 2000 --sigma 10 --k 100").out,
                                       nullptr, false);
    const bool values = crit.is_object() && crit["critical"]["V"] == 10.0 &&
                        std::abs(crit["critical"]["sigma0_leading"].get<double>() - 46.052) < 5e-4 &&
                        crit["verdict"] == "Solvent";
    if (!values) detail += "critical golden values off; ";
    pass = pass && values;

    const auto empty = fs::temp_directory_path() / "debtcrit_empty.csv";
    std::ofstream(empty).close();
    const auto negative = fs::temp_directory_path() / "debtcrit_negative.csv";
    std::ofstream(negative) << "id,amount,duration\na,1,1\nb,2,2\nc,-5,3\n";
    const std::vector<std::pair<std::string, int>> codes{
        {"critical --E 2000 --sigma 10 --k 100", 0},
        {"analyze '" + empty.string() + "'", 2},
        {"analyze '" + negative.string() + "'", 2},
        {"critical --E 2000 --sigma 10", 2},
        {"critical --E 1000 --sigma 10 --k 100", 3},
        {"fractional --alpha 1 --V 4", 3},
        {"--max-iter 1 critical --E 2000 --sigma 10 --k 100", 4},
    };
    int code_fail = 0;
    for (const auto& [args, code] : codes) {
        const auto r = run_cli(paths.data, cli + " " + args);
        if (r.code != code) {
            ++code_fail;
            detail += "'" + args + "' exited " + std::to_string(r.code) + " not " + std::to_string(code) + "; ";
        }
    }
    pass = pass && code_fail == 0;
    if (detail.empty()) detail = std::to_string(goldens.size()) + " golden reports and " +
                                 std::to_string(codes.size()) + " exit codes match";
    return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    Paths paths;
    app.add_option("--criterion", only, "Run a single criterion (1-11)");
    app.add_option("--cli", paths.cli, "Path to the debtcrit executable")->required();
    app.add_option("--golden", paths.golden, "Golden report directory")->required();
    app.add_option("--data", paths.data, "Test data directory")->required();
    CLI11_PARSE(app, argc, argv);
    paths.cli = fs::absolute(paths.cli).string();

    const std::vector<Criterion> criteria{
        {1, "two-method coincidence", 10, two_method_coincidence},
        {2, "exact vs asymptotic convergence", 30, exact_vs_asymptotic},
        {3, "parameter fit round trip", 60, fit_round_trip},
        {4, "payoff identity", 5, payoff_identity},
        {5, "special functions", 5, special_functions},
        {6, "fractional critical value", 30, fractional_critical},
        {7, "fractional directional claims", 5, fractional_directions},
        {8, "maturity-mix two-path consistency", 5, maturity_mix_two_path},
        {9, "scale and permutation invariance", 5, normalization_invariance},
        {10, "entropy argmax", 10, entropy_argmax},
        {11, "CLI contract", 5, cli_contract},
    };

    bool all = true;
    bool matched = false;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        matched = true;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run(paths);
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.pass && in_time;
        all = all && pass;
        std::cout << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail << " ("
                  << fmt("%.2f", secs) << " s of " << fmt("%g", c.budget_s) << " s"
                  << (in_time ? "" : ", over budget") << ")\n";
    }
    if (!matched) {
        std::cerr << "no criterion " << only << "\n";
        return 2;
    }
    return all ? 0 : 1;
}
