#pragma once

#include "linespec/ast_admm.hpp"
#include "linespec/core.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace linespec {

/// SNR value meaning "no noise".
inline constexpr double kNoiselessSnr = std::numeric_limits<double>::infinity();

struct Instance {
    LineSpectralModel model;
    ComplexSignal x_star;
    ComplexSignal y;
    double sigma = 0.0;
};

/// Random line spectrum with |c| = g^2 (g standard normal), uniform phases and frequencies at
/// pairwise circular distance >= min_separation (default 1/(2n)), plus complex white noise at
/// snr_db = 10 log10((||x||^2 / n) / sigma^2). Deterministic in seed.
Instance generate_instance(std::size_t n, std::size_t k, double snr_db, std::uint64_t seed,
                           double min_separation = 0.0);

/// sigma (1 + 1/log n) sqrt(n log n + n log(4 pi log n)). Requires n >= 4.
double tau_rule(std::size_t n, double sigma);

/// Lower and upper estimates of E||w||_A^* for unit-variance complex noise. Requires n >= 5.
std::pair<double, double> dual_norm_noise_bounds(std::size_t n);

/// ||x_hat - x_star||^2 / n.
double mse(const ComplexSignal& x_hat, const ComplexSignal& x_star);

struct SweepConfig {
    std::vector<std::size_t> n_values{64, 128, 256};
    std::vector<std::size_t> k_rule{4, 8, 16};  // k = n / d
    std::vector<double> snr_db{-10, -5, 0, 5, 10, 15, 20};
    std::size_t trials = 10;
    std::vector<std::size_t> lasso_N{1024, 2048, 4096, 8192, 16384, 32768};
    std::uint64_t seed = 0;
    std::vector<std::string> algorithms{"ast", "lasso", "music", "pencil", "cadzow"};

    AdmmOptions admm{};
    std::size_t lasso_max_iters = 5000;
    double lasso_tol = 1e-4;
    std::size_t pencil_parameter = 0;  // 0: floor(n/3)
    std::size_t cadzow_iters = 50;

    void validate() const;
};

SweepConfig sweep_config_from_json(const std::string& text);
std::string sweep_config_to_json(const SweepConfig& config);

struct ExperimentRecord {
    std::size_t n = 0;
    std::size_t k = 0;
    double snr_db = 0.0;
    std::uint64_t trial_seed = 0;
    std::string algorithm;  // "ast", "lasso_<N>", "music", "pencil", "cadzow"
    double mse = 0.0;       // NaN when the algorithm failed
    double runtime_ms = 0.0;
    std::vector<double> freqs_recovered;
    std::string error;  // empty on success; not serialized

    bool failed() const { return mse != mse; }
};

/// Seed of one trial: a mix of the sweep seed, the cell index and the trial index.
std::uint64_t trial_seed(std::uint64_t sweep_seed, std::size_t cell, std::size_t trial);

/// Per-trial estimate shared by AST and the Lasso: tau_rule(n, sigma_hat) with sigma_hat from
/// estimate_noise_variance, floored at 1e-8 ||y||.
double auto_tau(const ComplexSignal& y);

/// Runs one algorithm on one instance (true k is only used by the classical baselines).
ExperimentRecord run_algorithm(const std::string& algorithm, const Instance& inst, std::size_t k,
                               double tau, const SweepConfig& config);

using RecordSink = std::function<void(const ExperimentRecord&)>;

/// Every (n, k, snr) cell times trials, each trial on its own generator. Records reach the sink
/// in cell/trial/algorithm order whatever the thread count.
std::vector<ExperimentRecord> run_sweep(const SweepConfig& config, std::size_t threads = 1,
                                        const RecordSink& sink = {});

inline constexpr const char* kRecordsHeader = "n,k,snr_db,trial_seed,algorithm,mse,runtime_ms,freqs_recovered";
std::string record_to_csv(const ExperimentRecord& r);
std::vector<ExperimentRecord> read_records_csv(std::istream& in);
std::vector<ExperimentRecord> read_records_csv(const std::string& path);

/// Log-spaced grid of count values from 1 to 100.
std::vector<double> default_beta_grid(std::size_t count = 61);

/// P_s(beta) = #{p : mse_s(p) <= beta min_s mse_s(p)} / #P over experiments p = (n, k, snr, seed).
/// Failed runs never count. Throws if an experiment lacks a record for some algorithm.
std::map<std::string, std::vector<std::pair<double, double>>> performance_profile(
    const std::vector<ExperimentRecord>& records, const std::vector<std::string>& algorithms,
    const std::vector<double>& betas = default_beta_grid());

}  // namespace linespec
