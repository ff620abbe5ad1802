// Command-line front end: Mittag-Leffler evaluation, hypothesis checks,
// single simulations and beta sweeps.

#include "fracctl/errors.hpp"
#include "fracctl/experiment.hpp"
#include "fracctl/mittag_leffler.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kHypothesis = 3,
    kAllFailed = 4,
};

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    return static_cast<bool>(out);
}

/// Runs the hypothesis checks before a solve; true when the caller may go on.
bool gate(const fracctl::ExperimentConfig& cfg, bool force) {
    const fracctl::HypothesisReport rep = fracctl::check_hypotheses(cfg);
    if (rep.all_passed()) {
        return true;
    }
    fracctl::write_hypothesis_report(std::cerr, rep);
    if (force) {
        std::cerr << "continuing anyway (--force)\n";
        return true;
    }
    std::cerr << "hypothesis check failed; rerun with --force to solve anyway\n";
    return false;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Controlled nonlocal fractional wave problems on a sine basis"};
    app.require_subcommand(1);

    double alpha = 1.0, beta_ml = 1.0, x = 0.0;
    auto* ml_cmd = app.add_subcommand("ml-eval", "Evaluate E_{alpha,beta}(x) for x <= 0");
    ml_cmd->add_option("--alpha", alpha, "order, 0 < alpha <= 2")->required();
    ml_cmd->add_option("--beta", beta_ml, "second parameter, > 0")->required();
    ml_cmd->add_option("--x", x, "argument, <= 0")->required()->allow_extra_args(false);

    std::string config_path;
    auto* hyp_cmd = app.add_subcommand("check-hypotheses", "Report the empirical hypothesis checks");
    hyp_cmd->add_option("config", config_path, "config file")->required();

    double beta = 0.0;
    std::string out_path;
    bool force = false;
    auto* sim_cmd = app.add_subcommand("simulate", "Solve once and write the trajectory CSV");
    sim_cmd->add_option("config", config_path, "config file")->required();
    sim_cmd->add_option("--beta", beta, "regularization parameter, > 0")->required();
    sim_cmd->add_option("--out", out_path, "output CSV")->required();
    sim_cmd->add_flag("--force", force, "solve even if a hypothesis check fails");

    int jobs = 1;
    auto* sweep_cmd = app.add_subcommand("sweep-beta", "Solve for every beta in the config and write the CSV");
    sweep_cmd->add_option("config", config_path, "config file")->required();
    sweep_cmd->add_option("--out", out_path, "output CSV (default: the config's output key)");
    sweep_cmd->add_option("--jobs", jobs, "concurrent solves")->check(CLI::PositiveNumber);
    sweep_cmd->add_flag("--force", force, "sweep even if a hypothesis check fails");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*ml_cmd) {
            std::cout << fracctl::format_number(fracctl::ml(alpha, beta_ml, x)) << '\n';
            return kOk;
        }

        const fracctl::ExperimentConfig cfg = fracctl::load_config(config_path);

        if (*hyp_cmd) {
            const fracctl::HypothesisReport rep = fracctl::check_hypotheses(cfg);
            fracctl::write_hypothesis_report(std::cout, rep);
            return rep.all_passed() ? kOk : kHypothesis;
        }

        if (*sim_cmd) {
            if (!gate(cfg, force)) {
                return kHypothesis;
            }
            const fracctl::SimulationResult res = fracctl::simulate(cfg, beta);
            std::ostringstream csv;
            fracctl::write_trajectory_csv(csv, res.report);
            if (!write_file(out_path, csv.str())) {
                std::cerr << "cannot write " << out_path << '\n';
                return kValidation;
            }
            if (!res.report.converged) {
                std::cerr << "Picard iteration did not converge (last update "
                          << fracctl::format_number(res.report.final_update) << ")\n";
                return kAllFailed;
            }
            return kOk;
        }

        if (*sweep_cmd) {
            if (out_path.empty()) {
                out_path = cfg.output;
            }
            if (out_path.empty()) {
                std::cerr << "no output path: pass --out or set 'output' in the config\n";
                return kValidation;
            }
            if (!gate(cfg, force)) {
                return kHypothesis;
            }
            const auto records = fracctl::run_beta_sweep(cfg, jobs);
            std::ostringstream csv;
            fracctl::write_sweep_csv(csv, records);
            if (!write_file(out_path, csv.str())) {
                std::cerr << "cannot write " << out_path << '\n';
                return kValidation;
            }
            const bool any = std::any_of(records.begin(), records.end(), [](const auto& r) { return r.converged; });
            return any ? kOk : kAllFailed;
        }
    } catch (const fracctl::ValidationError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kValidation;
    } catch (const fracctl::ParseError& e) {
        std::cerr << "config parse error: " << e.what() << '\n';
        return kValidation;
    } catch (const fracctl::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kValidation;
    } catch (const fracctl::DivergenceError& e) {
        std::cerr << "solver diverged: " << e.what() << '\n';
        return kAllFailed;
    } catch (const fracctl::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kOk;
}
