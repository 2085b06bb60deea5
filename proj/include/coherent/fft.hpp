#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace coherent::fft {

using cplx = std::complex<double>;

namespace detail {

// Plans are created once per (size, direction) and executed through the
// new-array interface, which FFTW guarantees to be thread safe. Planning itself
// is not, hence the lock.
class PlanCache {
public:
    static PlanCache& instance()
    {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, int sign)
    {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) {
            return it->second;
        }
        std::vector<cplx> in(n), out(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n),
                                          reinterpret_cast<fftw_complex*>(in.data()),
                                          reinterpret_cast<fftw_complex*>(out.data()), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline std::vector<cplx> execute(std::span<const cplx> input, int sign)
{
    std::vector<cplx> in(input.begin(), input.end());
    std::vector<cplx> out(input.size());
    fftw_plan plan = PlanCache::instance().get(input.size(), sign);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

} // namespace detail

/// Unnormalized forward DFT: F_k = sum_j f_j exp(-2 pi i j k / n).
inline std::vector<cplx> forward(std::span<const cplx> input)
{
    return detail::execute(input, FFTW_FORWARD);
}

/// Inverse DFT including the 1/n factor, so inverse(forward(f)) == f.
inline std::vector<cplx> inverse(std::span<const cplx> input)
{
    auto out = detail::execute(input, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(input.size());
    for (auto& v : out) {
        v *= scale;
    }
    return out;
}

} // namespace coherent::fft
