#include "cli.hpp"

#include "linespec/ast_admm.hpp"
#include "linespec/baselines.hpp"
#include "linespec/experiments.hpp"
#include "linespec/lasso_grid.hpp"
#include "linespec/localization.hpp"
#include "linespec/signal_io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

namespace linespec::cli {
namespace {

using nlohmann::json;

struct Common {
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Random seed");
    cmd->add_option("--threads", c.threads, "Worker threads (0 = hardware concurrency)");
}

std::size_t resolve_threads(std::size_t t) {
    return t == 0 ? std::max(1u, std::thread::hardware_concurrency()) : t;
}

double parse_tau(const std::string& text, const ComplexSignal& y) {
    if (text == "auto") return auto_tau(y);
    std::size_t used = 0;
    double tau = 0.0;
    try {
        tau = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !(tau > 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("--tau must be a positive number or 'auto'");
    return tau;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

json complex_list(const std::vector<cplx>& v) {
    json a = json::array();
    for (cplx c : v) a.push_back({c.real(), c.imag()});
    return a;
}

struct DenoiseArgs {
    std::string input, output, tau = "auto", method = "ast";
    std::optional<std::size_t> grid;
};

int denoise(const DenoiseArgs& a, std::ostream& out) {
    const ComplexSignal y = io::load_signal(a.input);
    const double tau = parse_tau(a.tau, y);
    json diag{{"method", a.method}, {"tau", tau}, {"n", y.size()}};
    std::vector<double> freqs;
    ComplexSignal x_hat = ComplexSignal::zeros(y.size());
    if (a.method == "ast") {
        const AstSolution s = solve_ast(y, tau);
        const std::size_t grid = a.grid.value_or(kDefaultLocalizationGrid);
        const LocalizationResult loc = localize_frequencies(DualPolynomial(s.z_hat.samples(), tau),
                                                            kDefaultPeakThreshold, grid);
        freqs = loc.frequencies;
        x_hat = s.x_hat;
        diag.update({{"iters", s.iters}, {"converged", s.converged}, {"objective", s.objective},
                     {"primal_residual", s.primal_residual}, {"dual_residual", s.dual_residual},
                     {"rho", s.rho}, {"atomic_norm", s.atomic_norm_estimate()},
                     {"grid_size", grid}, {"merged_peaks", loc.merged_peaks}});
    } else if (a.method == "lasso") {
        GridLassoOptions o;
        o.grid_size = a.grid.value_or(o.grid_size);
        o.tau = tau;
        const GridSolution s = solve_lasso(y, o);
        freqs = extract_cluster_peaks(s.c_hat, default_cluster_gap(o.grid_size, y.size()));
        x_hat = s.x_hat;
        diag.update({{"iters", s.iters}, {"converged", s.converged}, {"objective", s.objective},
                     {"grid_size", o.grid_size}, {"clusters", s.support_clusters.size()}});
    } else {
        throw std::invalid_argument("--method must be ast or lasso");
    }
    if (freqs.size() > y.size()) freqs.resize(y.size());
    const DebiasResult fit = debias(y, freqs);
    json result{
        {"x_hat", io::signal_to_json(x_hat)},
        {"x_debiased", io::signal_to_json(fit.x_hat)},
        {"frequencies", freqs},
        {"amplitudes", complex_list(fit.amplitudes)},
        {"diagnostics", diag},
    };
    write_json(a.output, result);
    out << freqs.size() << " frequencies written to " << a.output << '\n';
    return 0;
}

struct LocalizeArgs {
    std::string input, output, tau;
    std::size_t grid = kDefaultLocalizationGrid;
    double threshold = kDefaultPeakThreshold;
};

int localize(const LocalizeArgs& a, std::ostream& out) {
    const ComplexSignal y = io::load_signal(a.input);
    const double tau = parse_tau(a.tau, y);
    const AstSolution s = solve_ast(y, tau);
    const LocalizationResult loc = localize_frequencies(DualPolynomial(s.z_hat.samples(), tau), a.threshold, a.grid);
    write_json(a.output, json{
                             {"frequencies", loc.frequencies},
                             {"magnitudes", loc.magnitudes_at_peaks},
                             {"grid_size", loc.grid_size_used},
                             {"merged_peaks", loc.merged_peaks},
                             {"tau", tau},
                             {"converged", s.converged},
                         });
    out << loc.frequencies.size() << " frequencies written to " << a.output << '\n';
    return 0;
}

int sweep(const std::string& config_path, const std::string& out_path, const Common& common,
          bool seed_given, std::ostream& out) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open " + config_path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    SweepConfig config = sweep_config_from_json(text);
    if (seed_given) config.seed = common.seed;

    std::ofstream csv(out_path);
    if (!csv) throw std::runtime_error("cannot write " + out_path);
    csv << kRecordsHeader << '\n' << std::flush;
    std::size_t failed = 0;
    const auto records = run_sweep(config, resolve_threads(common.threads), [&](const ExperimentRecord& r) {
        csv << record_to_csv(r) << '\n' << std::flush;
        if (r.failed()) ++failed;
    });
    out << records.size() << " records written to " << out_path;
    if (failed) out << " (" << failed << " failed)";
    out << '\n';
    return 0;
}

int profile(const std::string& records_path, const std::string& out_path, std::vector<std::string> algorithms,
            std::size_t beta_points, std::ostream& out) {
    const std::vector<ExperimentRecord> records = read_records_csv(records_path);
    if (algorithms.empty())
        for (const ExperimentRecord& r : records)
            if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end())
                algorithms.push_back(r.algorithm);
    const auto curves = performance_profile(records, algorithms, default_beta_grid(beta_points));
    std::ofstream csv(out_path);
    if (!csv) throw std::runtime_error("cannot write " + out_path);
    csv << "algorithm,beta,P\n";
    for (const std::string& a : algorithms)
        for (const auto& [beta, p] : curves.at(a))
            csv << a << ',' << io::format_double(beta) << ',' << io::format_double(p) << '\n';
    out << "profile for " << algorithms.size() << " algorithms written to " << out_path << '\n';
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Line spectral denoising and frequency estimation"};
    app.require_subcommand(1);

    Common common;

    DenoiseArgs d;
    CLI::App* den = app.add_subcommand("denoise", "Denoise samples by AST or the gridded Lasso");
    den->add_option("--input", d.input, "Samples (.csv or .json)")->required();
    den->add_option("--tau", d.tau, "Regularization weight or 'auto'");
    den->add_option("--method", d.method, "ast or lasso")->check(CLI::IsMember({"ast", "lasso"}));
    den->add_option("--grid", d.grid, "Lasso grid size, or localization grid for ast");
    den->add_option("--output", d.output, "Result JSON")->required();
    add_common(den, common);

    LocalizeArgs l;
    CLI::App* loc = app.add_subcommand("localize", "Frequencies from the AST dual polynomial");
    loc->add_option("--input", l.input, "Samples (.csv or .json)")->required();
    loc->add_option("--tau", l.tau, "Regularization weight or 'auto'")->required();
    loc->add_option("--grid", l.grid, "Evaluation grid size");
    loc->add_option("--threshold", l.threshold, "Peak threshold relative to tau");
    loc->add_option("--output", l.output, "Frequencies JSON")->required();
    add_common(loc, common);

    std::string config_path, records_out;
    CLI::App* sw = app.add_subcommand("sweep", "Run an MSE sweep and write records CSV");
    sw->add_option("--config", config_path, "Sweep configuration JSON")->required();
    sw->add_option("--out", records_out, "Records CSV")->required();
    add_common(sw, common);

    std::string records_in, profile_out;
    std::vector<std::string> algorithms;
    std::size_t beta_points = 61;
    CLI::App* pr = app.add_subcommand("profile", "Performance profiles from records CSV");
    pr->add_option("--records", records_in, "Records CSV")->required();
    pr->add_option("--out", profile_out, "Profile CSV")->required();
    pr->add_option("--algorithms", algorithms, "Subset of algorithms (default: all in the records)");
    pr->add_option("--betas", beta_points, "Number of log-spaced beta values in [1, 100]");
    add_common(pr, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (den->parsed()) return denoise(d, out);
        if (loc->parsed()) return localize(l, out);
        if (sw->parsed()) return sweep(config_path, records_out, common, sw->count("--seed") > 0, out);
        if (pr->parsed()) return profile(records_in, profile_out, algorithms, beta_points, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace linespec::cli
