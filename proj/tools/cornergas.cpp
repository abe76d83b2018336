#include "cornergas/conformal.hpp"
#include "cornergas/corners.hpp"
#include "cornergas/coulomb.hpp"
#include "cornergas/errors.hpp"
#include "cornergas/experiment.hpp"
#include "cornergas/fekete.hpp"
#include "cornergas/fredholm.hpp"
#include "cornergas/grunsky.hpp"
#include "cornergas/io.hpp"

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace cornergas;

namespace {

struct Common {
    std::string family = "square";
    std::string config;
    int n = 64;
    double r = 1.0;
    std::string out;
    std::string precision = "double";
};

// Every subcommand reports verdicts; the exit code summarizes them.
struct Verdicts {
    std::vector<Verdict> list;
    void add(Verdict v)
    {
        std::cout << v.line() << '\n';
        list.push_back(std::move(v));
    }
    bool ok() const
    {
        for (const auto& v : list)
            if (!v.pass) return false;
        return true;
    }
};

void add_common(CLI::App* sub, Common& c, bool with_r = true)
{
    sub->add_option("--family", c.family,
                    "disk | joukowski:C | square | triangle | polygon:M | mixed (ignored with --config)");
    sub->add_option("--config", c.config, "JSON family config with keys family, params, N");
    sub->add_option("--n", c.n, "truncation / number of points")->check(CLI::PositiveNumber);
    if (with_r) sub->add_option("--r", c.r, "equipotential level r >= 1")->check(CLI::Range(1.0, 1e6));
    sub->add_option("--out", c.out, "output file or directory");
    sub->add_option("--precision", c.precision, "double | extended")
        ->check(CLI::IsMember({"double", "extended"}));
}

Precision precision_of(const Common& c) { return c.precision == "extended" ? Precision::Extended : Precision::Double; }

// Corner families need a long series; N is the Grunsky truncation.
FamilyConfig family_of(const Common& c, int series_length)
{
    FamilyConfig f = c.config.empty() ? family_from_string(c.family, series_length) : load_family_config(c.config);
    if (c.config.empty() || f.N < series_length) f.N = series_length;
    if (c.r != 1.0) f.params["r"] = {c.r};
    return f;
}

int cmd_domain(const Common& c, Verdicts& v, int samples)
{
    const auto map = build_family(family_of(c, c.n));
    std::cout << std::setprecision(12) << "family " << map.family_tag << "\ncapacity " << map.capacity()
              << "\ntruncation " << map.truncation() << "\ntail_bound " << map.tail_bound << "\ncorners "
              << map.corners.size() << '\n';
    for (const auto& cs : map.corners)
        std::cout << "  theta=" << cs.theta << " alpha=" << cs.alpha << " gamma=" << cs.gamma << '\n';
    if (!map.corners.empty())
        for (const auto& w : polygon_vertices(map)) std::cout << "  vertex " << w.real() << ' ' << w.imag() << '\n';
    const auto s = eval_boundary_uniform(map, samples);
    if (!c.out.empty()) {
        write_boundary_csv(c.out, s);
        std::cout << "wrote " << c.out << '\n';
    }
    v.add(make_verdict("domain", "capacity positive", map.capacity() > 0 ? 1.0 : 0.0, 1.0, 0.0, Check::Flag));
    return 0;
}

GrunskyMatrix run_engine(const ExteriorMapSeries& map, const std::string& engine, int n)
{
    if (engine == "log") return grunsky_log_fft(map, n);
    if (engine == "psi") return grunsky_psi_contour(map, n);
    if (engine == "power") return grunsky_power_series(map, n);
    throw InvalidArgument("unknown engine " + engine);
}

int cmd_grunsky(const Common& c, Verdicts& v, const std::string& engine)
{
    const auto map = build_family(family_of(c, 4 * c.n));
    const auto B = run_engine(map, engine, c.n);
    std::cout << std::setprecision(10) << "engine " << engine_name(B.engine) << "\nN " << B.N() << "\ngrid "
              << B.grid.M1 << 'x' << B.grid.M2 << " r1=" << B.grid.r1 << " r2=" << B.grid.r2 << "\naccuracy "
              << B.accuracy << " (" << B.accuracy_source << ")\n";
    if (!c.out.empty()) {
        if (c.out.size() > 4 && c.out.substr(c.out.size() - 4) == ".bin")
            write_matrix_binary(c.out, B);
        else
            write_matrix_csv(c.out, B);
        std::cout << "wrote " << c.out << '\n';
    }
    v.add(make_verdict("grunsky", "symmetry residual", symmetry_residual(B), 0.0, 1e-8, Check::Absolute));
    v.add(make_verdict("grunsky", "operator norm of leading block", operator_norm(B, B.N()), 1.0, 0.0,
                       Check::UpperBound));
    return 0;
}

int cmd_energy(const Common& c, Verdicts& v)
{
    const auto map = build_family(family_of(c, 4 * c.n));
    EngineOptions opt;
    opt.rows = c.n;
    opt.cols = map.tail_model == TailModel::PowerLaw ? 4 * c.n : c.n;
    const auto B = grunsky_psi_contour(map, c.n, opt);
    const auto d = dvector(map, B.cols(), true);
    const auto IL = loewner_energy(B);
    const auto IF = pommerenke_energy(B, d, c.n);
    std::cout << std::setprecision(12) << "loewner " << IL.value << (IL.converged ? "" : " (not converged)")
              << "\npommerenke " << IF.value << (IF.converged ? "" : " (not converged)") << '\n';
    for (const auto& [n, val] : IL.truncations) std::cout << "  n=" << n << " I^L=" << val << '\n';
    if (!c.out.empty()) {
        write_energy_csv(c.out, IL, "loewner");
        std::cout << "wrote " << c.out << '\n';
    }
    v.add(make_verdict("energy", "I^L finite and non-negative", IL.value >= 0 && std::isfinite(IL.value) ? 1.0 : 0.0,
                       1.0, 0.0, Check::Flag));
    v.add(make_verdict("energy", "I^F finite and non-negative", IF.value >= -1e-12 && std::isfinite(IF.value) ? 1.0 : 0.0,
                       1.0, 0.0, Check::Flag));
    return 0;
}

int cmd_corners(const Common& c, Verdicts& v)
{
    const int rows = c.n, cols = 4 * c.n;
    const auto map = build_family(family_of(c, rows + cols));
    if (map.corners.empty()) throw InvalidArgument("corners: family has no corners");
    EngineOptions opt;
    opt.rows = rows;
    opt.cols = cols;
    opt.accuracy = AccuracyMode::None;
    const auto B = grunsky_psi_contour(map, rows, opt);
    std::vector<int> ns;
    for (int n = 8; n <= rows; n *= 2) ns.push_back(n);
    const auto ld = logdet_sequence(B, ns);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        xs.push_back(std::log(double(ns[i])));
        ys.push_back(-ld[i]);
        std::cout << "n=" << ns[i] << " -logdet=" << std::setprecision(12) << -ld[i] << '\n';
    }
    const double predicted = corner_sum(map.corners, AngleMode::Interior) / 6.0;
    const auto fit = fit_log_slope(xs, ys, FitMethod::SuccessiveDifferences);
    std::cout << "slope " << fit.slope << " (least squares " << fit.ls_slope << ") predicted " << predicted << '\n';
    if (!c.out.empty()) {
        std::vector<std::vector<double>> rows_out;
        for (std::size_t i = 0; i < xs.size(); ++i) rows_out.push_back({xs[i], ys[i]});
        write_table_csv(c.out, {"x", "y"}, rows_out);
    }
    v.add(make_verdict("corners", "slope of -log det vs log n", fit.slope, predicted, 0.15, Check::Relative));
    return 0;
}

int cmd_coulomb(const Common& c, Verdicts& v)
{
    const auto map = build_family(family_of(c, 4096));
    const Precision p = precision_of(c);
    std::vector<std::vector<double>> rows;
    double worst = 0.0;
    std::cout << std::setprecision(12);
    for (int n = 1; n <= c.n; ++n) {
        const auto M = moments_interior(map, n, p);
        const double g = logZ_interior(map, n, Route::Grunsky);
        if (!M.positive_definite) throw NumericalError("moment matrix not positive definite");
        const double diff = std::abs(M.logdet - g);
        worst = std::max(worst, diff / std::abs(M.logdet));
        std::cout << "n=" << n << " direct=" << M.logdet << " grunsky=" << g << " diff=" << diff << '\n';
        rows.push_back({double(n), M.logdet, g, diff, M.error});
    }
    if (!c.out.empty()) write_table_csv(c.out, {"n", "logZ_direct", "logZ_grunsky", "abs_diff", "quad_err"}, rows);
    v.add(make_verdict("coulomb", "max relative |direct - grunsky|", worst, 0.0, 1e-6, Check::Absolute));
    return 0;
}

int cmd_fekete(const Common& c, Verdicts& v, int restarts)
{
    const auto map = build_family(family_of(c, 64));
    FeketeOptions opt;
    opt.restarts = restarts;
    const auto sol = fekete_optimize(map, c.n, opt);
    const auto B = grunsky_log_fft(map, 64);
    const auto d = dvector(map, 64, true);
    const double IF = pommerenke_energy_value(B, d, 64);
    const auto pc = verify_pommerenke(map, IF, {sol});
    std::cout << std::setprecision(14) << "n " << sol.n << "\nvalue " << sol.value << "\ngrad_norm " << sol.grad_norm
              << "\nI^F " << IF << "\nresidual " << pc.residuals.front() << '\n';
    if (!c.out.empty())
        write_table_csv(c.out, {"n", "value", "residual", "grad_norm", "restarts"},
                        {{double(sol.n), sol.value, pc.residuals.front(), sol.grad_norm, double(sol.restarts)}});
    v.add(make_verdict("fekete", "gradient sup-norm", sol.grad_norm, opt.tol, opt.tol, Check::UpperBound));
    return 0;
}

int cmd_experiment(const Common& c, Verdicts& v, const std::string& id, double budget, bool parallel,
                   const std::string& exp_config)
{
    const std::filesystem::path out = c.out.empty() ? std::filesystem::path("results") : std::filesystem::path(c.out);
    if (id == "all") {
        const auto res = reproduce_all(budget, out, parallel);
        for (const auto& rep : res.reports)
            for (const auto& verdict : rep.verdicts) v.add(verdict);
        std::cout << "\nsummary\n";
        for (const auto& row : res.summary)
            std::cout << std::left << std::setw(30) << row.id << (row.ran ? (row.pass ? "PASS" : "FAIL") : "SKIP")
                      << "  " << std::fixed << std::setprecision(1) << row.seconds << "s  " << row.statement << '\n';
        return 0;
    }
    ExperimentConfig cfg;
    if (!exp_config.empty()) {
        std::ifstream is(exp_config);
        if (!is) throw Error("cannot open " + exp_config);
        std::stringstream ss;
        ss << is.rdbuf();
        cfg = parse_experiment_config(ss.str());
        if (cfg.id != id && id != "config") throw InvalidArgument("config id " + cfg.id + " does not match " + id);
    } else {
        cfg = default_config(id);
    }
    if (!c.out.empty() || cfg.out_dir.empty()) cfg.out_dir = out;
    cfg.precision = precision_of(c);
    const auto rep = run_experiment(cfg);
    for (const auto& verdict : rep.verdicts) v.add(verdict);
    std::cout << "elapsed " << std::fixed << std::setprecision(1) << rep.seconds << "s, files in "
              << (cfg.out_dir / cfg.id).string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Grunsky operators, Fredholm determinants and Coulomb gases on planar domains"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);

    Common c;
    int samples = 1024;
    std::string engine = "log";
    int restarts = 8;
    std::string id;
    std::string exp_config;
    double budget = 30.0;
    bool parallel = false;

    auto* domain = app.add_subcommand("domain", "build a domain and dump its boundary");
    add_common(domain, c);
    domain->add_option("--samples", samples, "boundary samples")->check(CLI::PositiveNumber);

    auto* grunsky = app.add_subcommand("grunsky", "compute the truncated Grunsky matrix");
    add_common(grunsky, c);
    grunsky->add_option("--engine", engine, "log | psi | power")->check(CLI::IsMember({"log", "psi", "power"}));

    auto* energy = app.add_subcommand("energy", "Loewner and Pommerenke energies");
    add_common(energy, c);

    auto* corners = app.add_subcommand("corners", "corner slope of the Fredholm determinant");
    add_common(corners, c);

    auto* coulomb = app.add_subcommand("coulomb", "partition function by moments and by Grunsky");
    add_common(coulomb, c, false);

    auto* fekete = app.add_subcommand("fekete", "Fekete points and the energy expansion");
    add_common(fekete, c);
    fekete->add_option("--restarts", restarts, "optimizer restarts")->check(CLI::PositiveNumber);

    auto* experiment = app.add_subcommand("experiment", "run a preset, or all presets within a budget");
    add_common(experiment, c, false);
    experiment->add_option("id", id, "preset id or 'all'")->required();
    experiment->add_option("--budget", budget, "minutes, for 'all'");
    experiment->add_option("--experiment-config", exp_config, "JSON experiment config");
    experiment->add_flag("--parallel", parallel, "run presets concurrently");
    experiment->footer([] {
        std::string s = "presets:";
        for (const auto& p : preset_ids()) s += " " + p;
        return s;
    }());

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    Verdicts v;
    try {
        if (*domain) cmd_domain(c, v, samples);
        else if (*grunsky) cmd_grunsky(c, v, engine);
        else if (*energy) cmd_energy(c, v);
        else if (*corners) cmd_corners(c, v);
        else if (*coulomb) cmd_coulomb(c, v);
        else if (*fekete) cmd_fekete(c, v, restarts);
        else if (*experiment) cmd_experiment(c, v, id, budget, parallel, exp_config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return v.ok() ? 0 : 1;
}
