#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace curvemark::detail {

namespace {

class PlanCache
{
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(int rows, int cols, bool inverse)
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_tuple(rows, cols, inverse);
        auto it = plans_.find(key);
        if (it != plans_.end())
            return it->second;
        auto* scratch = fftw_alloc_complex(static_cast<std::size_t>(rows) * cols);
        fftw_plan plan = fftw_plan_dft_2d(rows, cols, scratch, scratch, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

PlanCache& cache()
{
    static PlanCache instance;
    return instance;
}

} // namespace

void fft2_inplace(std::complex<double>* data, int rows, int cols, bool inverse)
{
    fftw_plan plan = cache().get(rows, cols, inverse);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, buf, buf);
}

} // namespace curvemark::detail
