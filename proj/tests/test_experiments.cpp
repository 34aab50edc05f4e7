#include "doctest.h"
#include "test_util.hpp"

#include "linespec/ast_admm.hpp"
#include "linespec/experiments.hpp"
#include "linespec/lasso_grid.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

using namespace linespec;
using testutil::circ_dist;

TEST_CASE("generate_instance is deterministic in the seed") {
    const Instance a = generate_instance(64, 8, 10.0, 123);
    const Instance b = generate_instance(64, 8, 10.0, 123);
    const Instance c = generate_instance(64, 8, 10.0, 124);
    CHECK(a.y == b.y);
    CHECK(a.x_star == b.x_star);
    CHECK(a.sigma == b.sigma);
    CHECK_FALSE(a.y == c.y);
}

TEST_CASE("generate_instance noiseless sentinel") {
    const Instance a = generate_instance(32, 3, kNoiselessSnr, 5);
    CHECK(a.sigma == 0.0);
    CHECK(a.y == a.x_star);
}

TEST_CASE("generate_instance respects the SNR definition and amplitude law") {
    const Instance a = generate_instance(128, 8, 7.0, 9);
    const double power = a.x_star.squared_norm() / 128.0;
    CHECK(10.0 * std::log10(power / (a.sigma * a.sigma)) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(a.model.size() == 8);
    CHECK((a.x_star.samples() - synthesize(a.model, 128).samples()).norm() == 0.0);

    // Empirical noise variance and |c| = g^2 statistics over many draws.
    double noise = 0.0, mean_abs = 0.0;
    std::size_t count = 0;
    for (std::uint64_t s = 0; s < 400; ++s) {
        const Instance inst = generate_instance(64, 4, 0.0, 1000 + s);
        noise += (inst.y - inst.x_star).squared_norm() / (64.0 * inst.sigma * inst.sigma);
        for (const auto& c : inst.model.components()) {
            mean_abs += std::abs(c.amplitude);
            ++count;
        }
    }
    CHECK(noise / 400 == doctest::Approx(1.0).epsilon(0.02));
    CHECK(mean_abs / count == doctest::Approx(1.0).epsilon(0.1));  // E g^2 = 1
}

TEST_CASE("generate_instance separation over many seeds") {
    double worst = 1.0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const std::vector<double> f = generate_instance(64, 16, 10.0, s).model.frequencies();
        for (std::size_t i = 0; i < f.size(); ++i)
            for (std::size_t j = i + 1; j < f.size(); ++j) worst = std::min(worst, circ_dist(f[i], f[j]));
    }
    CHECK(worst >= 1.0 / 128);
}

TEST_CASE("generate_instance errors") {
    CHECK_THROWS_AS(generate_instance(64, 128, 10.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_instance(64, 120, 10.0, 1), std::runtime_error);
    CHECK_THROWS_AS(generate_instance(0, 1, 10.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_instance(16, 1, std::nan(""), 1), std::invalid_argument);
}

TEST_CASE("tau_rule examples") {
    CHECK(tau_rule(64, 1.0) == doctest::Approx(28.27).epsilon(1e-3));
    CHECK(tau_rule(64, 2.0) == doctest::Approx(2.0 * tau_rule(64, 1.0)));
    const auto [lower, upper] = dual_norm_noise_bounds(128);
    const double t = tau_rule(128, 1.0);
    // Values from an independent evaluation of both closed forms.
    CHECK(t == doctest::Approx(40.850884308602666).epsilon(1e-13));
    CHECK(lower == doctest::Approx(18.92070028707613).epsilon(1e-13));
    CHECK(t > lower);
    CHECK(t / lower == doctest::Approx(2.1590577351149127).epsilon(1e-12));
    CHECK(upper == t);
    CHECK_THROWS_AS(tau_rule(3, 1.0), std::invalid_argument);
}

TEST_CASE("dual_norm_noise_bounds examples") {
    const auto [lo, hi] = dual_norm_noise_bounds(64);
    CHECK(lo < hi);
    CHECK(std::isfinite(hi));
    CHECK(lo == doctest::Approx(11.81).epsilon(1e-3));
    double prev_lo = 0.0, prev_hi = 0.0;
    for (std::size_t n : {8, 32, 128}) {
        const auto [l, h] = dual_norm_noise_bounds(n);
        CHECK(l > prev_lo);
        CHECK(h > prev_hi);
        prev_lo = l;
        prev_hi = h;
    }
    CHECK_THROWS_AS(dual_norm_noise_bounds(4), std::invalid_argument);
}

TEST_CASE("dual norm of unit complex noise falls in the bounds on average") {
    std::mt19937_64 rng(81);
    const std::size_t n = 64;
    double total = 0.0;
    for (int d = 0; d < 500; ++d) {
        const CVector w = testutil::random_cvector(rng, n, std::sqrt(0.5));
        total += dual_atomic_norm(w, default_dual_grid(n)).lower;
    }
    const auto [lo, hi] = dual_norm_noise_bounds(n);
    MESSAGE("mean dual norm " << total / 500 << " in [" << lo << ", " << hi << "]");
    CHECK(total / 500 >= lo);
    CHECK(total / 500 <= hi);
}

TEST_CASE("mse examples") {
    const ComplexSignal x{cplx(1, 2), cplx(-1, 0), cplx(0, 3)};
    CHECK(mse(x, x) == 0.0);
    const double s = 0.7;
    const ComplexSignal shifted(x.samples().array() + s);
    CHECK(mse(shifted, x) == doctest::Approx(s * s));
    const cplx phase = std::polar(1.0, 1.234);
    CHECK(mse(ComplexSignal(phase * shifted.samples()), ComplexSignal(phase * x.samples())) ==
          doctest::Approx(mse(shifted, x)));
    CHECK_THROWS_AS(mse(x, ComplexSignal::zeros(2)), std::invalid_argument);
}

TEST_CASE("trial seeds differ across cells and trials") {
    std::set<std::uint64_t> seen;
    for (std::size_t c = 0; c < 20; ++c)
        for (std::size_t t = 0; t < 20; ++t) seen.insert(trial_seed(7, c, t));
    CHECK(seen.size() == 400);
    CHECK(trial_seed(7, 3, 4) == trial_seed(7, 3, 4));
    CHECK(trial_seed(7, 3, 4) != trial_seed(8, 3, 4));
}

TEST_CASE("SweepConfig validation and JSON round trip") {
    SweepConfig c;
    CHECK_NOTHROW(c.validate());
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SweepConfig{};
    c.algorithms = {"esprit"};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SweepConfig{};
    c.n_values.clear();
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    SweepConfig d;
    d.n_values = {32};
    d.snr_db = {5.0, kNoiselessSnr};
    d.seed = 99;
    d.cadzow_iters = 7;
    d.admm.scaling = PenaltyScaling::kAbsolute;
    const SweepConfig e = sweep_config_from_json(sweep_config_to_json(d));
    CHECK(e.n_values == d.n_values);
    CHECK(e.snr_db == d.snr_db);
    CHECK(e.seed == 99);
    CHECK(e.cadzow_iters == 7);
    CHECK(e.admm.scaling == PenaltyScaling::kAbsolute);
    CHECK(e.lasso_N == d.lasso_N);

    const SweepConfig partial = sweep_config_from_json(R"({"n_values": [16], "trials": 2})");
    CHECK(partial.n_values == std::vector<std::size_t>{16});
    CHECK(partial.k_rule == SweepConfig{}.k_rule);
    CHECK_THROWS(sweep_config_from_json(R"({"trials": 0})"));
    CHECK_THROWS(sweep_config_from_json("not json"));
}

namespace {

SweepConfig small_config(std::vector<std::string> algorithms) {
    SweepConfig c;
    c.n_values = {32};
    c.k_rule = {8};
    c.snr_db = {10.0};
    c.trials = 1;
    c.lasso_N = {1024};
    c.seed = 4;
    c.algorithms = std::move(algorithms);
    return c;
}

}  // namespace

TEST_CASE("run_sweep record counting") {
    const std::vector<ExperimentRecord> r = run_sweep(small_config({"music"}));
    REQUIRE(r.size() == 1);
    CHECK(r[0].algorithm == "music");
    CHECK(r[0].n == 32);
    CHECK(r[0].k == 4);
    CHECK(r[0].mse >= 0.0);
    CHECK(r[0].freqs_recovered.size() == 4);

    SweepConfig c = small_config({"music", "lasso", "pencil"});
    c.lasso_N = {256, 512};
    c.trials = 2;
    CHECK(run_sweep(c).size() == 2 * 4);
}

TEST_CASE("run_sweep is deterministic across runs and thread counts") {
    SweepConfig c = small_config({"ast", "lasso", "music", "pencil", "cadzow"});
    c.snr_db = {0.0, 20.0};
    c.trials = 2;
    std::vector<std::string> streamed;
    const auto a = run_sweep(c, 1, [&](const ExperimentRecord& r) { streamed.push_back(r.algorithm); });
    const auto b = run_sweep(c, 3);
    REQUIRE(a.size() == b.size());
    REQUIRE(streamed.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].algorithm == b[i].algorithm);
        CHECK(streamed[i] == a[i].algorithm);
        CHECK(a[i].trial_seed == b[i].trial_seed);
        CHECK(a[i].snr_db == b[i].snr_db);
        CHECK(a[i].mse == b[i].mse);
        CHECK(a[i].freqs_recovered == b[i].freqs_recovered);
        CHECK(a[i].error.empty());
    }
}

TEST_CASE("run_sweep noiseless cell recovers the signal with AST") {
    SweepConfig c = small_config({"ast"});
    c.snr_db = {kNoiselessSnr};
    c.trials = 2;
    for (const ExperimentRecord& r : run_sweep(c)) {
        const Instance inst = generate_instance(r.n, r.k, kNoiselessSnr, r.trial_seed);
        const double power = inst.x_star.squared_norm() / static_cast<double>(r.n);
        CHECK(r.mse <= 1e-6 * power);
    }
}

TEST_CASE("run_sweep records failures and keeps going") {
    SweepConfig c = small_config({"pencil", "music"});
    c.pencil_parameter = 31;  // k = 4 > n - L = 1, so the pencil fails
    const auto r = run_sweep(c);
    REQUIRE(r.size() == 2);
    CHECK(r[0].failed());
    CHECK_FALSE(r[0].error.empty());
    CHECK_FALSE(r[1].failed());
}

TEST_CASE("records CSV round trip") {
    ExperimentRecord r;
    r.n = 64;
    r.k = 8;
    r.snr_db = -5.0;
    r.trial_seed = 18446744073709551615ULL;
    r.algorithm = "lasso_1024";
    r.mse = 0.123456789012345678;
    r.runtime_ms = 12.5;
    r.freqs_recovered = {0.1, 0.25, 1.0 / 3.0};
    ExperimentRecord f = r;
    f.algorithm = "ast";
    f.mse = std::nan("");
    f.freqs_recovered.clear();
    f.snr_db = kNoiselessSnr;

    std::stringstream buf;
    buf << kRecordsHeader << '\n' << record_to_csv(r) << '\n' << record_to_csv(f) << '\n';
    CHECK(buf.str().rfind("n,k,snr_db,trial_seed,algorithm,mse,runtime_ms,freqs_recovered\n", 0) == 0);
    const auto back = read_records_csv(buf);
    REQUIRE(back.size() == 2);
    CHECK(back[0].trial_seed == r.trial_seed);
    CHECK(back[0].mse == r.mse);
    CHECK(back[0].freqs_recovered == r.freqs_recovered);
    CHECK(back[0].algorithm == "lasso_1024");
    CHECK(back[1].failed());
    CHECK(std::isinf(back[1].snr_db));
    CHECK(back[1].freqs_recovered.empty());

    std::stringstream bad("n,k\n");
    CHECK_THROWS(read_records_csv(bad));
    std::stringstream short_row(std::string(kRecordsHeader) + "\n1,2,3\n");
    CHECK_THROWS(read_records_csv(short_row));
}

namespace {

ExperimentRecord rec(const std::string& alg, std::uint64_t seed, double m) {
    ExperimentRecord r;
    r.n = 64;
    r.k = 4;
    r.snr_db = 10;
    r.trial_seed = seed;
    r.algorithm = alg;
    r.mse = m;
    return r;
}

}  // namespace

TEST_CASE("performance_profile examples") {
    const auto p = performance_profile({rec("a", 1, 1.0), rec("b", 1, 2.0)}, {"a", "b"}, {1.0, 2.0});
    CHECK(p.at("a")[0].second == 1.0);
    CHECK(p.at("b")[0].second == 0.0);
    CHECK(p.at("b")[1].second == 1.0);

    const auto single = performance_profile({rec("a", 1, 3.0), rec("a", 2, 0.5)}, {"a"});
    for (const auto& [beta, frac] : single.at("a")) CHECK(frac == 1.0);

    CHECK_THROWS_AS(performance_profile({rec("a", 1, 1.0), rec("b", 2, 1.0)}, {"a", "b"}), std::invalid_argument);
    CHECK_THROWS_AS(performance_profile({}, {"a"}), std::invalid_argument);

    const auto failed = performance_profile({rec("a", 1, std::nan("")), rec("b", 1, 2.0)}, {"a", "b"}, {1.0, 100.0});
    CHECK(failed.at("a")[1].second == 0.0);
    CHECK(failed.at("b")[0].second == 1.0);
}

TEST_CASE("performance profiles are nondecreasing and bounded by one") {
    std::mt19937_64 rng(82);
    std::exponential_distribution<double> e(1.0);
    std::vector<ExperimentRecord> records;
    for (std::uint64_t s = 0; s < 50; ++s)
        for (const char* a : {"x", "y", "z"}) records.push_back(rec(a, s, e(rng)));
    const auto betas = default_beta_grid();
    CHECK(betas.front() == 1.0);
    CHECK(betas.back() == 100.0);
    const auto p = performance_profile(records, {"x", "y", "z"}, betas);
    double at_one = 0.0;
    for (const auto& [alg, curve] : p) {
        for (std::size_t i = 0; i < curve.size(); ++i) {
            CHECK(curve[i].second <= 1.0);
            if (i) CHECK(curve[i].second >= curve[i - 1].second);
        }
        at_one += curve.front().second;
    }
    CHECK(at_one >= 1.0);  // someone is best in every experiment
}

TEST_CASE("expected MSE bound holds cell by cell") {
    int cells = 0, holding = 0;
    for (std::size_t k : {2, 4}) {
        for (double snr : {0.0, 10.0, 20.0}) {
            const std::size_t n = 64;
            double total_mse = 0.0, total_bound = 0.0;
            for (std::uint64_t t = 0; t < 10; ++t) {
                const Instance inst = generate_instance(n, k, snr, 5000 + 37 * k + static_cast<std::uint64_t>(snr) * 11 + t);
                const double tau = tau_rule(n, inst.sigma);
                const AstSolution s = solve_ast(inst.y, tau);
                total_mse += mse(s.x_hat, inst.x_star);
                total_bound += tau * inst.model.amplitude_l1() / static_cast<double>(n);
            }
            ++cells;
            if (total_mse <= total_bound) ++holding;
        }
    }
    CHECK(holding >= 0.9 * cells);
}

TEST_CASE("gridded Lasso MSE tracks AST MSE") {
    const std::size_t n = 64, big_n = 1 << 15;
    const double factor = 1.0 / (1.0 - kTwoPi * n / big_n);
    double ast = 0.0, lasso = 0.0;
    for (std::uint64_t t = 0; t < 200; ++t) {
        const Instance inst = generate_instance(n, 4, 10.0, 7000 + t);
        const double tau = tau_rule(n, inst.sigma);
        ast += mse(solve_ast(inst.y, tau).x_hat, inst.x_star);
        GridLassoOptions o;
        o.grid_size = big_n;
        o.tau = tau;
        lasso += mse(solve_lasso(inst.y, o).x_hat, inst.x_star);
    }
    MESSAGE("mean AST " << ast / 200 << ", mean Lasso " << lasso / 200);
    CHECK(lasso <= 1.5 * factor * ast);

    // Loose envelope across a few cells.
    for (double snr : {0.0, 20.0}) {
        double a = 0.0, l = 0.0;
        for (std::uint64_t t = 0; t < 10; ++t) {
            const Instance inst = generate_instance(n, 8, snr, 8000 + t);
            const double tau = tau_rule(n, inst.sigma);
            a += mse(solve_ast(inst.y, tau).x_hat, inst.x_star);
            GridLassoOptions o;
            o.grid_size = big_n;
            o.tau = tau;
            l += mse(solve_lasso(inst.y, o).x_hat, inst.x_star);
        }
        CHECK(l <= 3.0 * factor * a);
    }
}
