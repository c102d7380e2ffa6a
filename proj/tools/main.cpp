#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "debtcrit/app/commands.hpp"

namespace {

using namespace debtcrit;
using namespace debtcrit::app;

void emit(const CommandResult& r, OutputFormat format) {
    for (const auto& w : r.warnings) {
        std::cerr << "warning: [" << w.module << "] " << to_string(w.code) << ": " << w.message << "\n";
    }
    if (!r.error.empty()) {
        std::cerr << "error: " << r.error << "\n";
    }
    if (!r.report.is_null()) {
        std::cout << render(r.report, format);
    }
}

// "lo:hi" or "lo:hi:step"
bool parse_range(const std::string& s, FractionalArgs& args) {
    std::vector<double> parts;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t next = s.find(':', pos);
        const std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(tok, &used));
            if (used != tok.size()) return false;
        } catch (const std::exception&) {
            return false;
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) return false;
    args.alpha_lo = parts[0];
    args.alpha_hi = parts[1];
    if (parts.size() == 3) args.alpha_step = parts[2];
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Critical debt of a portfolio with many creditors"};
    app.require_subcommand(1);
    app.fallthrough();

    AnalysisConfig cfg;
    std::string format = "text";
    app.add_option("--dimension", cfg.dimension, "Economic dimension d: 2, or fractional in [1, 2)");
    app.add_option("--tol", cfg.tol, "Solver tolerance");
    app.add_option("--max-iter", cfg.max_iter, "Solver iteration budget");
    app.add_option("--rtol", cfg.rtol_verdict, "Relative band around sigma0 reported as Indeterminate");
    app.add_option("--grid-resolution", cfg.grid_resolution, "Reverse-duration grid refinement");
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--jobs", cfg.jobs, "Files analyzed in parallel");

    auto* analyze = app.add_subcommand("analyze", "Normalize CSV portfolios, fit the model, compute sigma0");
    std::vector<std::string> files;
    analyze->add_option("files", files, "CSV files with header id,amount,duration")->required();

    auto* critical = app.add_subcommand("critical", "sigma0 from aggregate payoff E, debt sigma and count k");
    double E = 0.0;
    double sigma = 0.0;
    std::int64_t k = 0;
    critical->add_option("--E", E, "Aggregate payoff")->required();
    critical->add_option("--sigma", sigma, "Aggregate debt")->required();
    critical->add_option("--k", k, "Number of debts")->required();

    auto* fractional = app.add_subcommand("fractional", "sigma0 in a fractional dimension");
    FractionalArgs fargs;
    std::string range;
    fractional->add_option("--alpha", fargs.alpha, "alpha = d/2");
    fractional->add_option("--d", fargs.d, "Dimension d");
    fractional->add_option("--E", fargs.E, "Energy (aggregate payoff)");
    fractional->add_option("--V", fargs.V, "Velocity of money circulation");
    fractional->add_option("--k", fargs.k, "Number of debts; adds the self-consistent quadrature value");
    fractional->add_option("--sigma", fargs.sigma, "Debt to judge against sigma0");
    fractional->add_option("--alpha-range", range, "Sweep lo:hi[:step] at the given E or V");

    auto* mix = app.add_subcommand("mix", "Book of m short and n long debts");
    MixArgs margs;
    mix->add_option("--m", margs.m, "Short debts")->required();
    mix->add_option("--n", margs.n, "Long debts")->required();
    mix->add_option("--s1", margs.s1, "Short debt value")->required();
    mix->add_option("--s2", margs.s2, "Long debt value")->required();
    mix->add_option("--L1", margs.L1, "Short duration")->required();
    mix->add_option("--L2", margs.L2, "Long duration")->required();
    mix->add_option("--V", margs.V, "Velocity of money circulation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }
    cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Text;

    std::vector<CommandResult> results;
    try {
        if (*analyze) {
            results = run_analyze_batch(files, cfg);
        } else if (*critical) {
            results.push_back(run_critical(E, sigma, k, cfg));
        } else if (*fractional) {
            if (!range.empty() && !parse_range(range, fargs)) {
                std::cerr << "error: --alpha-range expects lo:hi or lo:hi:step\n";
                return kExitInput;
            }
            results.push_back(run_fractional(fargs, cfg));
        } else if (*mix) {
            results.push_back(run_mix(margs, cfg));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModel;
    }

    int code = kExitOk;
    for (const auto& r : results) {
        emit(r, cfg.format);
        code = std::max(code, r.exit_code);
    }
    return code;
}
