#include "fracctl/experiment.hpp"

#include "fracctl/errors.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace fracctl {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& text, std::size_t line) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(line, "not a number: '" + text + "'");
    }
    return value;
}

template <typename Int>
Int parse_int(const std::string& text, std::size_t line) {
    Int value = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(line, "not an integer: '" + text + "'");
    }
    return value;
}

std::vector<double> parse_list(const std::string& text, std::size_t line) {
    std::vector<double> out;
    if (text.empty()) {
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const std::string item = trim(std::string_view(text).substr(start, comma - start));
        if (item.empty()) {
            throw ParseError(line, "empty list entry");
        }
        out.push_back(parse_double(item, line));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += format_number(v[i]);
    }
    return out;
}

bool is_one_of(const std::string& name, std::initializer_list<const char*> options) {
    return std::any_of(options.begin(), options.end(), [&](const char* o) { return name == o; });
}

SpectralVector padded(const std::vector<double>& coeffs, int modes) {
    SpectralVector v = SpectralVector::zero(modes);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        v.coeffs(static_cast<Eigen::Index>(i)) = coeffs[i];
    }
    return v;
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

} // namespace

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void ExperimentConfig::validate() const {
    if (!(q > 1.0 && q <= 2.0)) {
        throw ValidationError("q", "fractional order must lie in (1, 2]");
    }
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw ValidationError("a", "horizon must be positive and finite");
    }
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw ValidationError("L", "must be positive and finite");
    }
    if (N < 1) {
        throw ValidationError("N", "must be at least 1");
    }
    if (Ny < 2 * N + 1) {
        throw ValidationError("Ny", "must be at least 2N + 1 = " + std::to_string(2 * N + 1));
    }
    const std::pair<const char*, const std::vector<double>*> coeff_lists[] = {{"z0", &z0}, {"z1", &z1}, {"zd", &zd}};
    for (const auto& [name, list] : coeff_lists) {
        if (static_cast<int>(list->size()) > N) {
            throw ValidationError(name, "has more entries than N");
        }
        for (const double c : *list) {
            if (!std::isfinite(c)) {
                throw ValidationError(name, "entries must be finite");
            }
        }
    }
    NonlocalWeights{nonlocal_times, phi_weights, psi_weights}.validate(a);
    const std::pair<const char*, double> constants[] = {{"C1", C1}, {"C2", C2}, {"C3", C3},
                                                        {"d1", d1}, {"d2", d2}, {"m_bound", m_bound}};
    for (const auto& [name, value] : constants) {
        if (!(value >= 0.0) || !std::isfinite(value)) {
            throw ValidationError(name, "declared constants must be finite and non-negative");
        }
    }
    if (!is_one_of(f, {"example", "zero"})) {
        throw ValidationError("f", "unknown source '" + f + "' (example, zero)");
    }
    if (!is_one_of(g, {"example", "zero"})) {
        throw ValidationError("g", "unknown kernel '" + g + "' (example, zero)");
    }
    if (!is_one_of(B, {"example", "identity", "upper_identity", "zero"})) {
        throw ValidationError("B", "unknown input operator '" + B + "' (example, identity, upper_identity, zero)");
    }
    if ((B == "example" || B == "upper_identity") && N < 2) {
        throw ValidationError("B", "this input operator needs N >= 2");
    }
    solver().validate();
    if (betas.empty()) {
        throw ValidationError("betas", "need at least one value");
    }
    for (std::size_t i = 0; i < betas.size(); ++i) {
        if (!(betas[i] > 0.0) || !std::isfinite(betas[i])) {
            throw ValidationError("betas", "values must be positive and finite");
        }
        if (i > 0 && !(betas[i] < betas[i - 1])) {
            throw ValidationError("betas", "values must be strictly decreasing");
        }
    }
    if (samples < 100) {
        throw ValidationError("samples", "need at least 100");
    }
}

SolverConfig ExperimentConfig::solver() const {
    SolverConfig s;
    s.intervals = n_t;
    s.fp_tol = fp_tol;
    s.max_iter = max_iter;
    return s;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::map<std::string, std::pair<std::string, std::size_t>> entries;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line_no, "expected 'key = value'");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) {
            throw ParseError(line_no, "missing key");
        }
        if (!entries.emplace(key, std::make_pair(trim(std::string_view(line).substr(eq + 1)), line_no)).second) {
            throw ParseError(line_no, "duplicate key '" + key + "'");
        }
    }

    const auto has = [&](const char* key) { return entries.count(key) > 0; };
    for (const auto& [key, entry] : entries) {
        const auto& [value, line] = entry;
        if (key == "q") cfg.q = parse_double(value, line);
        else if (key == "a") cfg.a = parse_double(value, line);
        else if (key == "L") cfg.L = parse_double(value, line);
        else if (key == "N") cfg.N = parse_int<int>(value, line);
        else if (key == "Ny") cfg.Ny = parse_int<int>(value, line);
        else if (key == "z0") cfg.z0 = parse_list(value, line);
        else if (key == "z1") cfg.z1 = parse_list(value, line);
        else if (key == "zd") cfg.zd = parse_list(value, line);
        else if (key == "nonlocal_times") cfg.nonlocal_times = parse_list(value, line);
        else if (key == "phi_weights") cfg.phi_weights = parse_list(value, line);
        else if (key == "psi_weights") cfg.psi_weights = parse_list(value, line);
        else if (key == "C1") cfg.C1 = parse_double(value, line);
        else if (key == "C2") cfg.C2 = parse_double(value, line);
        else if (key == "C3") cfg.C3 = parse_double(value, line);
        else if (key == "d1") cfg.d1 = parse_double(value, line);
        else if (key == "d2") cfg.d2 = parse_double(value, line);
        else if (key == "m_bound") cfg.m_bound = parse_double(value, line);
        else if (key == "f") cfg.f = value;
        else if (key == "g") cfg.g = value;
        else if (key == "B") cfg.B = value;
        else if (key == "n_t") cfg.n_t = parse_int<int>(value, line);
        else if (key == "fp_tol") cfg.fp_tol = parse_double(value, line);
        else if (key == "max_iter") cfg.max_iter = parse_int<int>(value, line);
        else if (key == "betas") cfg.betas = parse_list(value, line);
        else if (key == "seed") cfg.seed = parse_int<std::uint64_t>(value, line);
        else if (key == "samples") cfg.samples = parse_int<int>(value, line);
        else if (key == "output") cfg.output = value;
        else throw ParseError(line, "unknown key '" + key + "'");
    }

    // Defaults that depend on other keys.
    if (!has("Ny")) {
        cfg.Ny = 2 * cfg.N + 1;
    }
    if (!has("d1")) {
        cfg.d1 = NonlocalWeights{cfg.nonlocal_times, cfg.phi_weights, cfg.psi_weights}.phi_sum();
    }
    if (!has("d2")) {
        cfg.d2 = NonlocalWeights{cfg.nonlocal_times, cfg.phi_weights, cfg.psi_weights}.psi_sum();
    }
    const bool f_example = cfg.f == "example";
    const bool g_example = cfg.g == "example";
    if (!has("C1")) {
        cfg.C1 = f_example ? 1.0 / 3.0 : 0.0;
    }
    if (!has("C2")) {
        cfg.C2 = f_example ? 1.0 : 0.0;
    }
    if (!has("C3")) {
        cfg.C3 = g_example ? std::exp(cfg.a) / 2.0 : 0.0;
    }
    if (!has("m_bound")) {
        cfg.m_bound = f_example ? 0.25 + (g_example ? std::expm1(cfg.a) / std::numbers::sqrt2 : 0.0) : 0.0;
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(0, "cannot read config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string emit_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "q = " << format_number(cfg.q) << '\n'
        << "a = " << format_number(cfg.a) << '\n'
        << "L = " << format_number(cfg.L) << '\n'
        << "N = " << cfg.N << '\n'
        << "Ny = " << cfg.Ny << '\n'
        << "z0 = " << format_list(cfg.z0) << '\n'
        << "z1 = " << format_list(cfg.z1) << '\n'
        << "zd = " << format_list(cfg.zd) << '\n'
        << "nonlocal_times = " << format_list(cfg.nonlocal_times) << '\n'
        << "phi_weights = " << format_list(cfg.phi_weights) << '\n'
        << "psi_weights = " << format_list(cfg.psi_weights) << '\n'
        << "C1 = " << format_number(cfg.C1) << '\n'
        << "C2 = " << format_number(cfg.C2) << '\n'
        << "C3 = " << format_number(cfg.C3) << '\n'
        << "d1 = " << format_number(cfg.d1) << '\n'
        << "d2 = " << format_number(cfg.d2) << '\n'
        << "m_bound = " << format_number(cfg.m_bound) << '\n'
        << "f = " << cfg.f << '\n'
        << "g = " << cfg.g << '\n'
        << "B = " << cfg.B << '\n'
        << "n_t = " << cfg.n_t << '\n'
        << "fp_tol = " << format_number(cfg.fp_tol) << '\n'
        << "max_iter = " << cfg.max_iter << '\n'
        << "betas = " << format_list(cfg.betas) << '\n'
        << "seed = " << cfg.seed << '\n'
        << "samples = " << cfg.samples << '\n';
    if (!cfg.output.empty()) {
        out << "output = " << cfg.output << '\n';
    }
    return out.str();
}

ProblemSpec build_problem(const ExperimentConfig& cfg) {
    cfg.validate();
    BasisConfig basis;
    basis.length = cfg.L;
    basis.modes = cfg.N;
    basis.collocation = cfg.Ny;

    ProblemSpec p;
    p.family = FamilyConfig::measured(cfg.q, basis, cfg.a);
    if (cfg.B == "example") {
        p.B = InputOperator::example(cfg.N);
    } else if (cfg.B == "identity") {
        p.B = InputOperator::identity(cfg.N);
    } else if (cfg.B == "upper_identity") {
        p.B = InputOperator::identity_on_upper_modes(cfg.N);
    } else {
        p.B = InputOperator::zero(cfg.N);
    }
    if (cfg.f == "example") {
        p.f = example_f;
    }
    if (cfg.g == "example") {
        p.g = example_g;
    }
    p.nonlocal = NonlocalWeights{cfg.nonlocal_times, cfg.phi_weights, cfg.psi_weights};
    p.z0 = padded(cfg.z0, cfg.N);
    p.z1 = padded(cfg.z1, cfg.N);
    p.horizon = cfg.a;
    p.constants.C1 = cfg.C1;
    p.constants.C2 = cfg.C2;
    p.constants.C3 = cfg.C3;
    p.constants.d1 = cfg.d1;
    p.constants.d2 = cfg.d2;
    p.constants.m_bound = cfg.m_bound;
    p.validate();
    return p;
}

SpectralVector target_state(const ExperimentConfig& cfg) { return padded(cfg.zd, cfg.N); }

std::vector<SweepRecord> run_beta_sweep(const ExperimentConfig& cfg, int jobs) {
    const MildSolver solver(build_problem(cfg), cfg.n_t);
    const GrammianMatrix K = solver.grammian();
    const SpectralVector zd = target_state(cfg);
    const SolverConfig scfg = cfg.solver();

    std::vector<SweepRecord> records(cfg.betas.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const auto worker = [&] {
        for (std::size_t i = next++; i < records.size(); i = next++) {
            SweepRecord& r = records[i];
            r.beta = cfg.betas[i];
            try {
                const SolveReport rep = solver.solve(K, r.beta, zd, scfg);
                r.terminal_error = rep.terminal_error;
                r.control_energy = rep.control_energy;
                r.iterations = rep.iterations;
                r.converged = rep.converged;
                r.lemma2_ok = rep.lemma2_ok;
                r.residual = rep.residual;
            } catch (const DivergenceError&) {
                const double inf = std::numeric_limits<double>::infinity();
                r.terminal_error = inf;
                r.control_energy = inf;
                r.residual = inf;
                r.iterations = scfg.max_iter;
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };

    const auto n_threads = static_cast<std::size_t>(std::clamp(jobs, 1, static_cast<int>(records.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return records;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << "beta,terminal_error,control_energy,iterations,converged,lemma2_ok\n";
    for (const auto& r : records) {
        out << format_number(r.beta) << ',' << format_number(r.terminal_error) << ','
            << format_number(r.control_energy) << ',' << r.iterations << ',' << bool_text(r.converged) << ','
            << bool_text(r.lemma2_ok) << '\n';
    }
}

SimulationResult simulate(const ExperimentConfig& cfg, double beta) {
    const MildSolver solver(build_problem(cfg), cfg.n_t);
    SimulationResult result;
    result.modes = cfg.N;
    result.report = solver.solve(solver.grammian(), beta, target_state(cfg), cfg.solver());
    return result;
}

void write_trajectory_csv(std::ostream& out, const SolveReport& report) {
    const Trajectory& traj = report.trajectory;
    out << "theta";
    for (int n = 1; n <= traj.modes(); ++n) {
        out << ",coef_" << n;
    }
    out << ",unorm\n";
    for (int k = 0; k < traj.nodes(); ++k) {
        out << format_number(traj.time(k));
        for (int n = 0; n < traj.modes(); ++n) {
            out << ',' << format_number(traj.coeffs()(k, n));
        }
        const double unorm = k < report.control.rows() ? report.control.row(k).norm() : 0.0;
        out << ',' << format_number(unorm) << '\n';
    }
}

bool HypothesisReport::all_passed() const {
    return std::all_of(lines.begin(), lines.end(), [](const HypothesisLine& l) { return l.passed; });
}

namespace {

constexpr double kSlack = 1.05;
constexpr int kHistoryIntervals = 16;

std::string describe(const char* what, double measured, const char* declared_name, double declared) {
    std::ostringstream s;
    s << what << " = " << format_number(measured) << " (declared " << declared_name << " = "
      << format_number(declared) << ")";
    return s.str();
}

Samples random_samples(int size, double amp, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Samples s(size);
    for (auto& x : s) {
        x = amp * u(rng);
    }
    return s;
}

double log_uniform(double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(std::log10(lo), std::log10(hi));
    return std::pow(10.0, u(rng));
}

} // namespace

HypothesisReport check_hypotheses(const ExperimentConfig& cfg) {
    const ProblemSpec problem = build_problem(cfg);
    const auto& c = problem.constants;
    const int ny = cfg.Ny;
    const double hist_step = cfg.a / kHistoryIntervals;
    std::mt19937_64 rng(cfg.seed);

    HypothesisReport report;
    report.M = problem.family.M;

    {
        HypothesisLine l{"H1", "generator of a uniformly bounded cosine family with compact sine family", false, true,
                         ""};
        l.measured = "structural: finite spectral truncation; measured M = " + format_number(report.M);
        report.lines.push_back(l);
    }

    // Histories of random length k + 1 with nearby partners.
    const auto history_pair = [&](std::mt19937_64& g) {
        std::uniform_int_distribution<int> len(1, kHistoryIntervals);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const int k = len(g);
        const double amp = log_uniform(1e-3, 10.0, g);
        SampleHistory x, y;
        for (int j = 0; j <= k; ++j) {
            x.push_back(random_samples(ny, amp, g));
            y.push_back(x.back() + random_samples(ny, 0.01 * amp, g));
        }
        return std::make_pair(x, y);
    };
    const auto source = [&](const SampleHistory& h) { return source_with_memory(problem, h, hist_step); };

    {
        const double est = estimate_lipschitz(source, history_pair, cfg.samples, rng);
        const double declared = c.C1 + cfg.a * c.C2 * c.C3;
        HypothesisLine l{"H2", "f Lipschitz in the state and memory arguments", true, est <= kSlack * declared,
                         describe("sampled constant", est, "C1 + a C2 C3", declared)};
        report.lines.push_back(l);
    }

    {
        const int per_tau = std::max(100, cfg.samples / 9);
        double est = 0.0;
        for (int i = 0; i <= 8; ++i) {
            const double tau = cfg.a * i / 8.0;
            const auto g_at = [&](const Samples& s) {
                return problem.g ? problem.g(tau, tau, s) : Samples(Samples::Zero(s.size()));
            };
            const auto pair = [&](std::mt19937_64& g) {
                const double amp = log_uniform(1e-3, 10.0, g);
                Samples x = random_samples(ny, amp, g);
                Samples y = x + random_samples(ny, 0.01 * amp, g);
                return std::make_pair(x, y);
            };
            est = std::max(est, estimate_lipschitz(g_at, pair, per_tau, rng));
        }
        HypothesisLine l{"H3", "g Lipschitz in the state argument", true, est <= kSlack * c.C3,
                         describe("sampled constant", est, "C3", c.C3)};
        report.lines.push_back(l);
    }

    {
        const auto traj_pair = [&](std::mt19937_64& g) {
            const double amp = log_uniform(1e-2, 10.0, g);
            Trajectory x(cfg.a, kHistoryIntervals, cfg.N), y(cfg.a, kHistoryIntervals, cfg.N);
            for (int k = 0; k <= kHistoryIntervals; ++k) {
                x.coeffs().row(k) = random_samples(cfg.N, amp, g).transpose();
                y.coeffs().row(k) = random_samples(cfg.N, amp, g).transpose();
            }
            return std::make_pair(x, y);
        };
        const auto phi = [&](const Trajectory& z) { return nonlocal_phi(problem.nonlocal, z); };
        const auto psi = [&](const Trajectory& z) { return nonlocal_psi(problem.nonlocal, z); };
        const double est_phi = estimate_lipschitz(phi, traj_pair, cfg.samples, rng);
        const double est_psi = estimate_lipschitz(psi, traj_pair, cfg.samples, rng);
        const bool ok = est_phi <= kSlack * c.d1 && est_psi <= kSlack * c.d2 &&
                        problem.nonlocal.phi_sum() <= c.d1 * (1.0 + 1e-12) &&
                        problem.nonlocal.psi_sum() <= c.d2 * (1.0 + 1e-12);
        HypothesisLine l{"H4", "nonlocal maps phi, psi Lipschitz", true, ok,
                         describe("phi", est_phi, "d1", c.d1) + ", " + describe("psi", est_psi, "d2", c.d2)};
        report.lines.push_back(l);
    }

    {
        const ContractionCheck cc = check_contraction(report.M, c.d1, c.d2);
        report.contraction_margin = cc.margin;
        std::ostringstream s;
        s << "M (d1 + d2) = " << format_number(cc.product) << ", margin " << format_number(cc.margin);
        report.lines.push_back({"contraction", "existence condition M (d1 + d2) < 1", true, cc.pass, s.str()});
    }

    {
        const MildSolver solver(problem, cfg.n_t);
        const GrammianMatrix K = solver.grammian();
        const double lmin = K.min_eigenvalue();
        const std::vector<double> betas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
        std::normal_distribution<double> normal;
        bool decaying = true;
        double worst_ratio = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            SpectralVector v = SpectralVector::zero(cfg.N);
            for (auto& x : v.coeffs) {
                x = normal(rng);
            }
            const std::vector<double> ind = linear_controllability_indicator(K, v, betas);
            for (std::size_t i = 1; i < ind.size(); ++i) {
                decaying = decaying && ind[i] < ind[i - 1];
            }
            worst_ratio = std::max(worst_ratio, ind.back() / ind.front());
        }
        const bool ok = lmin > 0.0 && decaying && worst_ratio <= 0.1;
        std::ostringstream s;
        s << "Grammian min eigenvalue " << format_number(lmin) << ", ||beta R(beta, K) v|| "
          << (decaying ? "strictly decreasing" : "not strictly decreasing") << ", worst final/initial "
          << format_number(worst_ratio);
        report.lines.push_back({"H5", "linear system approximately controllable", true, ok, s.str()});
    }

    {
        const std::vector<double> amps{0.1, 1.0, 10.0, 100.0, 1000.0};
        const auto history_at = [&](double amp, std::mt19937_64& g) {
            std::uniform_int_distribution<int> len(0, kHistoryIntervals);
            const int k = len(g);
            SampleHistory h;
            for (int j = 0; j <= k; ++j) {
                h.push_back(random_samples(ny, amp, g));
            }
            return h;
        };
        const UniformBoundReport ub = probe_uniform_bound(source, history_at, amps, std::max(100, cfg.samples / 5),
                                                          c.m_bound, rng);
        const double m_hat = *std::max_element(ub.m_hat.begin(), ub.m_hat.end());
        std::ostringstream s;
        s << "sampled sup |f| = " << format_number(m_hat) << " (declared m_bound = " << format_number(c.m_bound)
          << ")" << (ub.growing ? ", grows with input amplitude" : "");
        report.lines.push_back({"H6", "f uniformly bounded", true, ub.ok(), s.str()});
    }
    return report;
}

void write_hypothesis_report(std::ostream& out, const HypothesisReport& report) {
    for (const auto& l : report.lines) {
        out << (l.testable ? (l.passed ? "PASS " : "FAIL ") : "INFO ") << l.id << ": " << l.description << " -- "
            << l.measured << '\n';
    }
    out << (report.all_passed() ? "all checks passed" : "some checks failed") << '\n';
}

} // namespace fracctl
