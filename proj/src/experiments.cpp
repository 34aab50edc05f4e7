#include "linespec/experiments.hpp"

#include "linespec/baselines.hpp"
#include "linespec/lasso_grid.hpp"
#include "linespec/localization.hpp"
#include "linespec/signal_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace linespec {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<std::string> expand_algorithms(const SweepConfig& c) {
    std::vector<std::string> out;
    for (const std::string& a : c.algorithms) {
        if (a == "lasso") {
            for (std::size_t big_n : c.lasso_N) out.push_back("lasso_" + std::to_string(big_n));
        } else {
            out.push_back(a);
        }
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return kNoiselessSnr;
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number: " + s);
    return v;
}

std::string format_snr(double snr) { return std::isinf(snr) ? "inf" : io::format_double(snr); }

}  // namespace

Instance generate_instance(std::size_t n, std::size_t k, double snr_db, std::uint64_t seed,
                           double min_separation) {
    if (n == 0) throw std::invalid_argument("generate_instance: n must be positive");
    const double sep = min_separation > 0.0 ? min_separation : 1.0 / (2.0 * static_cast<double>(n));
    if (static_cast<double>(k) * sep >= 1.0)
        throw std::invalid_argument("generate_instance: k * separation must be below 1");
    if (std::isnan(snr_db) || snr_db == -kNoiselessSnr)
        throw std::invalid_argument("generate_instance: invalid snr");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<double> freqs;
    std::size_t attempts = 0;
    while (freqs.size() < k) {
        if (++attempts > 100000) throw std::runtime_error("generate_instance: packing infeasible");
        const double f = unit(rng);
        const bool ok = std::all_of(freqs.begin(), freqs.end(),
                                    [&](double g) { return circular_distance(f, g) >= sep; });
        if (ok) freqs.push_back(f);
    }
    std::vector<SpectralComponent> comps;
    for (double f : freqs) {
        const double g = normal(rng);
        comps.push_back({f, std::polar(g * g, kTwoPi * unit(rng))});
    }

    Instance inst{LineSpectralModel(std::move(comps)), ComplexSignal::zeros(n), ComplexSignal::zeros(n), 0.0};
    inst.x_star = synthesize(inst.model, n);
    if (std::isinf(snr_db)) {
        inst.y = inst.x_star;
        return inst;
    }
    const double power = inst.x_star.squared_norm() / static_cast<double>(n);
    inst.sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    CVector w(static_cast<Eigen::Index>(n));
    const double s = inst.sigma / std::sqrt(2.0);
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        const double re = normal(rng);
        const double im = normal(rng);
        w(j) = cplx(s * re, s * im);
    }
    inst.y = ComplexSignal(inst.x_star.samples() + w);
    return inst;
}

double tau_rule(std::size_t n, double sigma) {
    if (n < 4) throw std::invalid_argument("tau_rule: need n >= 4");
    const double nd = static_cast<double>(n);
    const double ln = std::log(nd);
    return sigma * (1.0 + 1.0 / ln) * std::sqrt(nd * ln + nd * std::log(4.0 * M_PI * ln));
}

std::pair<double, double> dual_norm_noise_bounds(std::size_t n) {
    if (n < 5) throw std::invalid_argument("dual_norm_noise_bounds: need n >= 5");
    const double nd = static_cast<double>(n);
    const double ln = std::log(nd);
    const double lower = std::sqrt(nd * ln - 0.5 * nd * std::log(4.0 * M_PI * ln));
    return {lower, tau_rule(n, 1.0)};
}

double mse(const ComplexSignal& x_hat, const ComplexSignal& x_star) {
    if (x_hat.size() != x_star.size()) throw std::invalid_argument("mse: length mismatch");
    return (x_hat.samples() - x_star.samples()).squaredNorm() / static_cast<double>(x_hat.size());
}

void SweepConfig::validate() const {
    if (n_values.empty() || k_rule.empty() || snr_db.empty() || algorithms.empty() || trials == 0)
        throw std::invalid_argument("SweepConfig: lists must be nonempty and trials >= 1");
    for (const std::string& a : algorithms) {
        if (a != "ast" && a != "lasso" && a != "music" && a != "pencil" && a != "cadzow")
            throw std::invalid_argument("SweepConfig: unknown algorithm " + a);
        if (a == "lasso" && lasso_N.empty()) throw std::invalid_argument("SweepConfig: lasso_N is empty");
    }
    for (std::size_t d : k_rule)
        if (d == 0) throw std::invalid_argument("SweepConfig: k_rule entries must be positive");
    for (std::size_t n : n_values)
        for (std::size_t d : k_rule)
            if (n / d == 0 || n < 5) throw std::invalid_argument("SweepConfig: need n >= 5 and n / d >= 1");
    admm.validate();
}

SweepConfig sweep_config_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SweepConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    get("n_values", c.n_values);
    get("k_rule", c.k_rule);
    if (j.contains("snr_db")) {
        c.snr_db.clear();
        for (const auto& v : j.at("snr_db"))
            c.snr_db.push_back(v.is_string() ? parse_double(v.get<std::string>()) : v.get<double>());
    }
    get("trials", c.trials);
    get("lasso_N", c.lasso_N);
    get("seed", c.seed);
    get("algorithms", c.algorithms);
    get("admm_rho", c.admm.rho);
    if (j.contains("admm_penalty")) {
        const std::string mode = j.at("admm_penalty").get<std::string>();
        if (mode != "relative" && mode != "absolute")
            throw std::invalid_argument("SweepConfig: admm_penalty must be relative or absolute");
        c.admm.scaling = mode == "relative" ? PenaltyScaling::kRelative : PenaltyScaling::kAbsolute;
    }
    get("admm_max_iters", c.admm.max_iters);
    get("admm_eps_abs", c.admm.eps_abs);
    get("admm_eps_rel", c.admm.eps_rel);
    get("lasso_max_iters", c.lasso_max_iters);
    get("lasso_tol", c.lasso_tol);
    get("pencil_parameter", c.pencil_parameter);
    get("cadzow_iters", c.cadzow_iters);
    c.validate();
    return c;
}

std::string sweep_config_to_json(const SweepConfig& c) {
    nlohmann::json snr = nlohmann::json::array();
    for (double s : c.snr_db) {
        if (std::isinf(s)) snr.push_back("inf");
        else snr.push_back(s);
    }
    nlohmann::json j{
        {"n_values", c.n_values},
        {"k_rule", c.k_rule},
        {"snr_db", snr},
        {"trials", c.trials},
        {"lasso_N", c.lasso_N},
        {"seed", c.seed},
        {"algorithms", c.algorithms},
        {"admm_rho", c.admm.rho},
        {"admm_penalty", c.admm.scaling == PenaltyScaling::kRelative ? "relative" : "absolute"},
        {"admm_max_iters", c.admm.max_iters},
        {"admm_eps_abs", c.admm.eps_abs},
        {"admm_eps_rel", c.admm.eps_rel},
        {"lasso_max_iters", c.lasso_max_iters},
        {"lasso_tol", c.lasso_tol},
        {"pencil_parameter", c.pencil_parameter},
        {"cadzow_iters", c.cadzow_iters},
    };
    return j.dump(2);
}

std::uint64_t trial_seed(std::uint64_t sweep_seed, std::size_t cell, std::size_t trial) {
    return splitmix64(splitmix64(splitmix64(sweep_seed) ^ cell) ^ (static_cast<std::uint64_t>(trial) << 1));
}

double auto_tau(const ComplexSignal& y) {
    const double sigma_hat = std::sqrt(estimate_noise_variance(y));
    return std::max(tau_rule(y.size(), sigma_hat), 1e-8 * y.norm());
}

ExperimentRecord run_algorithm(const std::string& algorithm, const Instance& inst, std::size_t k,
                               double tau, const SweepConfig& config) {
    const std::size_t n = inst.y.size();
    ExperimentRecord rec;
    rec.n = n;
    rec.k = k;
    rec.algorithm = algorithm;
    const auto start = std::chrono::steady_clock::now();
    try {
        std::vector<double> freqs;
        if (algorithm == "ast") {
            if (!(tau > 0.0)) throw std::invalid_argument("ast: tau must be positive");
            const AstSolution sol = solve_ast(inst.y, tau, config.admm);
            freqs = localize_frequencies(DualPolynomial(sol.z_hat.samples(), tau)).frequencies;
        } else if (algorithm.rfind("lasso_", 0) == 0) {
            GridLassoOptions opts;
            opts.grid_size = std::stoul(algorithm.substr(6));
            opts.tau = tau;
            opts.max_iters = config.lasso_max_iters;
            opts.tol = config.lasso_tol;
            const GridSolution sol = solve_lasso(inst.y, opts);
            freqs = extract_cluster_peaks(sol.c_hat, default_cluster_gap(opts.grid_size, n));
        } else if (algorithm == "music") {
            freqs = music(inst.y, k);
        } else if (algorithm == "pencil") {
            const std::size_t L = config.pencil_parameter ? config.pencil_parameter : n / 3;
            freqs = matrix_pencil(inst.y, k, L);
        } else if (algorithm == "cadzow") {
            const std::size_t L = config.pencil_parameter ? config.pencil_parameter : n / 3;
            freqs = matrix_pencil(cadzow(inst.y, k, config.cadzow_iters), k, L);
        } else {
            throw std::invalid_argument("unknown algorithm " + algorithm);
        }
        if (freqs.size() > n) freqs.resize(n);
        const DebiasResult fit = debias(inst.y, freqs);
        rec.mse = mse(fit.x_hat, inst.x_star);
        rec.freqs_recovered = std::move(freqs);
    } catch (const std::exception& e) {
        rec.mse = std::numeric_limits<double>::quiet_NaN();
        rec.error = e.what();
    }
    rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<ExperimentRecord> run_sweep(const SweepConfig& config, std::size_t threads,
                                        const RecordSink& sink) {
    config.validate();
    const std::vector<std::string> algorithms = expand_algorithms(config);

    struct Task {
        std::size_t n, k, cell, trial;
        double snr;
    };
    std::vector<Task> tasks;
    std::size_t cell = 0;
    for (std::size_t n : config.n_values)
        for (std::size_t d : config.k_rule)
            for (double snr : config.snr_db) {
                for (std::size_t t = 0; t < config.trials; ++t) tasks.push_back({n, n / d, cell, t, snr});
                ++cell;
            }

    std::vector<std::vector<ExperimentRecord>> results(tasks.size());
    std::vector<bool> done(tasks.size(), false);
    std::size_t next_to_emit = 0;
    std::mutex sink_mutex;
    std::atomic<std::size_t> next_task{0};

    auto run_task = [&](const Task& task) {
        std::vector<ExperimentRecord> recs;
        const std::uint64_t seed = trial_seed(config.seed, task.cell, task.trial);
        try {
            const Instance inst = generate_instance(task.n, task.k, task.snr, seed);
            const double tau = auto_tau(inst.y);
            for (const std::string& a : algorithms) recs.push_back(run_algorithm(a, inst, task.k, tau, config));
        } catch (const std::exception& e) {
            for (const std::string& a : algorithms) {
                ExperimentRecord r;
                r.n = task.n;
                r.k = task.k;
                r.algorithm = a;
                r.mse = std::numeric_limits<double>::quiet_NaN();
                r.error = e.what();
                recs.push_back(std::move(r));
            }
        }
        for (ExperimentRecord& r : recs) {
            r.snr_db = task.snr;
            r.trial_seed = seed;
        }
        return recs;
    };

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next_task.fetch_add(1);
            if (i >= tasks.size()) return;
            std::vector<ExperimentRecord> recs = run_task(tasks[i]);
            std::lock_guard lock(sink_mutex);
            results[i] = std::move(recs);
            done[i] = true;
            while (next_to_emit < tasks.size() && done[next_to_emit]) {
                if (sink)
                    for (const ExperimentRecord& r : results[next_to_emit]) sink(r);
                ++next_to_emit;
            }
        }
    };

    const std::size_t pool = std::max<std::size_t>(1, std::min(threads, tasks.size()));
    std::vector<std::thread> workers;
    for (std::size_t w = 1; w < pool; ++w) workers.emplace_back(worker);
    worker();
    for (std::thread& t : workers) t.join();

    std::vector<ExperimentRecord> all;
    for (auto& recs : results)
        for (auto& r : recs) all.push_back(std::move(r));
    return all;
}

std::string record_to_csv(const ExperimentRecord& r) {
    std::string freqs;
    for (std::size_t i = 0; i < r.freqs_recovered.size(); ++i) {
        if (i) freqs += ';';
        freqs += io::format_double(r.freqs_recovered[i]);
    }
    std::ostringstream out;
    out << r.n << ',' << r.k << ',' << format_snr(r.snr_db) << ',' << r.trial_seed << ',' << r.algorithm << ','
        << (r.failed() ? std::string("nan") : io::format_double(r.mse)) << ',' << io::format_double(r.runtime_ms)
        << ',' << freqs;
    return out.str();
}

std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kRecordsHeader)
        throw std::runtime_error("records csv: missing or unexpected header");
    std::vector<ExperimentRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 8) throw std::runtime_error("records csv: line " + std::to_string(lineno) + " has wrong field count");
        try {
            ExperimentRecord r;
            r.n = std::stoul(f[0]);
            r.k = std::stoul(f[1]);
            r.snr_db = parse_double(f[2]);
            r.trial_seed = std::stoull(f[3]);
            r.algorithm = f[4];
            r.mse = parse_double(f[5]);
            r.runtime_ms = parse_double(f[6]);
            if (!f[7].empty())
                for (const std::string& s : split(f[7], ';')) r.freqs_recovered.push_back(parse_double(s));
            out.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw std::runtime_error("records csv: bad value on line " + std::to_string(lineno));
        }
    }
    return out;
}

std::vector<ExperimentRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_records_csv(in);
}

std::vector<double> default_beta_grid(std::size_t count) {
    if (count < 2) throw std::invalid_argument("default_beta_grid: need at least 2 points");
    std::vector<double> betas(count);
    for (std::size_t i = 0; i < count; ++i)
        betas[i] = std::pow(100.0, static_cast<double>(i) / static_cast<double>(count - 1));
    betas.front() = 1.0;
    betas.back() = 100.0;
    return betas;
}

std::map<std::string, std::vector<std::pair<double, double>>> performance_profile(
    const std::vector<ExperimentRecord>& records, const std::vector<std::string>& algorithms,
    const std::vector<double>& betas) {
    if (algorithms.empty()) throw std::invalid_argument("performance_profile: no algorithms");
    using Key = std::tuple<std::size_t, std::size_t, double, std::uint64_t>;
    std::map<Key, std::map<std::string, double>> experiments;
    for (const ExperimentRecord& r : records) {
        if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end()) continue;
        experiments[{r.n, r.k, r.snr_db, r.trial_seed}][r.algorithm] = r.mse;
    }
    if (experiments.empty()) throw std::invalid_argument("performance_profile: no matching records");

    std::map<std::string, std::vector<double>> ratios;
    for (const auto& [key, by_alg] : experiments) {
        double best = std::numeric_limits<double>::infinity();
        for (const std::string& a : algorithms) {
            const auto it = by_alg.find(a);
            if (it == by_alg.end())
                throw std::invalid_argument("performance_profile: missing record for " + a);
            if (!std::isnan(it->second)) best = std::min(best, it->second);
        }
        for (const std::string& a : algorithms) {
            const double m = by_alg.at(a);
            double ratio = std::numeric_limits<double>::infinity();
            if (!std::isnan(m) && std::isfinite(best)) ratio = best > 0.0 ? m / best : (m == 0.0 ? 1.0 : ratio);
            ratios[a].push_back(ratio);
        }
    }

    std::map<std::string, std::vector<std::pair<double, double>>> out;
    const double total = static_cast<double>(experiments.size());
    for (const std::string& a : algorithms) {
        for (double beta : betas) {
            const auto hits = std::count_if(ratios[a].begin(), ratios[a].end(), [&](double r) { return r <= beta; });
            out[a].emplace_back(beta, static_cast<double>(hits) / total);
        }
    }
    return out;
}

}  // namespace linespec
