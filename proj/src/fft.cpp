#include "linespec/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace linespec::fft {
namespace {

// fftw_execute_dft is thread-safe; the planner is not.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        auto* in = fftw_alloc_complex(n);
        auto* out = fftw_alloc_complex(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

CVector run(CVector in, int sign) {
    const auto n = static_cast<std::size_t>(in.size());
    CVector out(in.size());
    if (n == 0) return out;
    fftw_plan plan = cache().get(n, sign);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace

CVector forward_padded(const CVector& in, std::size_t grid_size) {
    if (static_cast<std::size_t>(in.size()) > grid_size)
        throw std::invalid_argument("fft: grid smaller than input length");
    CVector padded = CVector::Zero(static_cast<Eigen::Index>(grid_size));
    padded.head(in.size()) = in;
    return run(std::move(padded), FFTW_FORWARD);
}

CVector backward(const CVector& in) { return run(in, FFTW_BACKWARD); }

}  // namespace linespec::fft
