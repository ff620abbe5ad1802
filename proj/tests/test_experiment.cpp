#include "fracctl/errors.hpp"
#include "fracctl/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

using namespace fracctl;

namespace {

std::string sweep_csv(const ExperimentConfig& cfg, int jobs) {
    std::ostringstream out;
    write_sweep_csv(out, run_beta_sweep(cfg, jobs));
    return out.str();
}

} // namespace

TEST_CASE("config: a minimal file gives the defaults") {
    const ExperimentConfig cfg = parse_config("q = 1.5\n");
    CHECK(cfg == ExperimentConfig{});
    CHECK(cfg.Ny == 2 * cfg.N + 1);
    CHECK(cfg.d1 == doctest::Approx(0.3));
    CHECK(cfg.d2 == doctest::Approx(0.4));
    CHECK(cfg.C3 == doctest::Approx(std::exp(1.0) / 2));
}

TEST_CASE("config: derived defaults follow other keys") {
    const ExperimentConfig cfg = parse_config("N = 4\na = 0.5\nf = zero\nnonlocal_times = 0.25, 0.5\nphi_weights = 0.05, 0.1\n");
    CHECK(cfg.Ny == 9);
    CHECK(cfg.d1 == doctest::Approx(0.15));
    CHECK(cfg.C1 == 0.0);
    CHECK(cfg.m_bound == 0.0);
    CHECK(cfg.C3 == doctest::Approx(std::exp(0.5) / 2));
}

TEST_CASE("config: validation names the field") {
    const auto field_of = [](const std::string& text) {
        try {
            (void)parse_config(text);
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of("betas = 0.1, 0.2\n") == "betas");
    CHECK(field_of("betas = 0.1, -1\n") == "betas");
    CHECK(field_of("q = 0.9\n") == "q");
    CHECK(field_of("q = 2.5\n") == "q");
    CHECK(field_of("N = 4\nNy = 5\n") == "Ny");
    CHECK(field_of("zd = 1, 2, 3, 4, 5, 6, 7\n") == "zd");
    CHECK(field_of("phi_weights = 0.1\n") == "phi_weights");
    CHECK(field_of("nonlocal_times = 0.5, 2\n") == "nonlocal_times");
    CHECK(field_of("B = diagonal\n") == "B");
    CHECK(field_of("n_t = 4\n") == "n_t");
    CHECK(field_of("samples = 10\n") == "samples");
    CHECK(field_of("C1 = -1\n") == "C1");
}

TEST_CASE("config: parse errors carry the line number") {
    const auto line_of = [](const std::string& text) {
        try {
            (void)parse_config(text);
        } catch (const ParseError& e) {
            return static_cast<long>(e.line());
        }
        return -1L;
    };
    CHECK(line_of("q = 1.5\n# comment\nbogus = 3\n") == 3);
    CHECK(line_of("q = 1.5\nq = 1.6\n") == 2);
    CHECK(line_of("\n\nno equals sign\n") == 3);
    CHECK(line_of("a = one\n") == 1);
    CHECK(line_of("N = 2.5\n") == 1);
    CHECK(line_of("betas = 0.1,,0.01\n") == 1);
    CHECK_THROWS_AS(load_config("/nonexistent/fracctl.cfg"), ParseError);
}

TEST_CASE("config: emit and parse round trip") {
    ExperimentConfig cfg;
    cfg.q = 1.7;
    cfg.N = 4;
    cfg.Ny = 11;
    cfg.z0 = {0.1, 1.0 / 3.0};
    cfg.zd = {0.2, 0.0, -0.1};
    cfg.betas = {0.5, 1e-3};
    cfg.B = "upper_identity";
    cfg.seed = 987654321987ULL;
    cfg.output = "out.csv";
    CHECK(parse_config(emit_config(cfg)) == cfg);
    CHECK(parse_config(emit_config(ExperimentConfig{})) == ExperimentConfig{});
}

TEST_CASE("build_problem honours the config") {
    ExperimentConfig cfg;
    cfg.N = 3;
    cfg.Ny = 9;
    cfg.z0 = {0.5};
    cfg.zd = {0.1, 0.2};
    cfg.B = "identity";
    const ProblemSpec p = build_problem(cfg);
    CHECK(p.modes() == 3);
    CHECK(p.family.basis.collocation == 9);
    CHECK(p.B.control_dim() == 3);
    CHECK(p.z0.coeffs(0) == 0.5);
    CHECK(p.z0.coeffs(2) == 0.0);
    CHECK(target_state(cfg).coeffs(1) == 0.2);
    CHECK(target_state(cfg).size() == 3);
}

TEST_CASE("sweep: large beta leaves the state uncontrolled") {
    ExperimentConfig cfg;
    cfg.z0 = {0.3};
    cfg.betas = {1e3};
    const auto controlled = run_beta_sweep(cfg);

    ExperimentConfig free = cfg;
    free.B = "zero";
    const double uncontrolled = run_beta_sweep(free)[0].terminal_error;
    REQUIRE(uncontrolled > 0.0);
    CHECK(std::abs(controlled[0].terminal_error - uncontrolled) <= 0.02 * uncontrolled);
}

TEST_CASE("sweep: a reachable-for-free target needs no control") {
    ExperimentConfig free;
    free.z0 = {0.3, -0.1};
    free.B = "zero";
    free.fp_tol = 1e-12;
    const SimulationResult base = simulate(free, 1.0);
    const SpectralVector terminal = base.report.trajectory.state(free.n_t);

    ExperimentConfig cfg = free;
    cfg.B = "example";
    cfg.fp_tol = 1e-8;
    cfg.zd.assign(terminal.coeffs.data(), terminal.coeffs.data() + terminal.size());
    for (const auto& r : run_beta_sweep(cfg)) {
        CHECK(r.converged);
        CHECK(r.terminal_error <= 10 * cfg.fp_tol);
    }
}

TEST_CASE("sweep: rows match simulate and are deterministic") {
    ExperimentConfig cfg;
    cfg.n_t = 100;
    const auto rows = run_beta_sweep(cfg, 3);
    REQUIRE(rows.size() == cfg.betas.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].beta == cfg.betas[i]);
        CHECK(rows[i].converged);
        CHECK(rows[i].lemma2_ok);
    }
    const SimulationResult sim = simulate(cfg, cfg.betas[2]);
    CHECK(sim.report.terminal_error == rows[2].terminal_error);
    CHECK(sim.report.iterations == rows[2].iterations);

    const std::string once = sweep_csv(cfg, 1);
    CHECK(once == sweep_csv(cfg, 1));
    CHECK(once == sweep_csv(cfg, 4));
    CHECK(once.rfind("beta,terminal_error,control_energy,iterations,converged,lemma2_ok\n", 0) == 0);
}

TEST_CASE("simulate: trajectory CSV layout") {
    ExperimentConfig cfg;
    cfg.n_t = 40;
    cfg.N = 3;
    cfg.Ny = 7;
    cfg.f = "zero";
    cfg.g = "zero";
    cfg.zd = {};
    const SimulationResult sim = simulate(cfg, 1e-2);
    std::ostringstream out;
    write_trajectory_csv(out, sim.report);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "theta,coef_1,coef_2,coef_3,unorm");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::istringstream fields(line);
        std::string cell;
        std::getline(fields, cell, ',');
        while (std::getline(fields, cell, ',')) {
            CHECK(std::stod(cell) == 0.0);
        }
    }
    CHECK(rows == cfg.n_t + 1);
}

TEST_CASE("hypotheses: defaults pass") {
    const HypothesisReport rep = check_hypotheses(ExperimentConfig{});
    CHECK(rep.all_passed());
    CHECK(rep.contraction_margin == doctest::Approx(1.0 - rep.M * 0.7));
    CHECK(rep.M >= 1.0);
    std::ostringstream out;
    write_hypothesis_report(out, rep);
    CHECK(out.str().find("FAIL") == std::string::npos);
}

TEST_CASE("hypotheses: heavy nonlocal weights break the contraction") {
    ExperimentConfig cfg;
    cfg.phi_weights = {0.5, 0.3};
    cfg.psi_weights = {0.2, 0.2};
    cfg.d1 = 0.8;
    cfg.d2 = 0.4;
    const HypothesisReport rep = check_hypotheses(cfg);
    CHECK_FALSE(rep.all_passed());
    CHECK(rep.contraction_margin < 0.0);
}

TEST_CASE("hypotheses: a null input operator is not controllable") {
    ExperimentConfig cfg;
    cfg.B = "zero";
    const HypothesisReport rep = check_hypotheses(cfg);
    CHECK_FALSE(rep.all_passed());
    bool h5_failed = false;
    for (const auto& line : rep.lines) {
        if (line.id == "H5") {
            h5_failed = !line.passed;
        }
    }
    CHECK(h5_failed);
}
