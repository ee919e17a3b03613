#include "landau/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace landau {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

FftPlan::FftPlan(std::vector<int> dims, int howmany, int stride, int dist, int sign) {
    int total = 1;
    for (int n : dims) total *= n;
    // FFTW_ESTIMATE leaves the planning buffer untouched; a scratch array
    // spanning the batch is enough.
    const std::size_t span = std::size_t(dist) * std::size_t(howmany - 1) + std::size_t(stride) * std::size_t(total);
    std::vector<cplx> scratch(span == 0 ? 1 : span);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_many_dft(int(dims.size()), dims.data(), howmany, p, nullptr, stride, dist, p, nullptr,
                               stride, dist, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_) throw NumericalError("FFTW could not create a plan");
}

FftPlan::~FftPlan() {
    if (plan_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
}

FftPlan::FftPlan(FftPlan&& other) noexcept : plan_(other.plan_) { other.plan_ = nullptr; }

FftPlan& FftPlan::operator=(FftPlan&& other) noexcept {
    if (this != &other) {
        if (plan_) {
            std::lock_guard<std::mutex> lock(planner_mutex());
            fftw_destroy_plan(static_cast<fftw_plan>(plan_));
        }
        plan_ = other.plan_;
        other.plan_ = nullptr;
    }
    return *this;
}

void FftPlan::execute(cplx* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(plan_), p, p);
}

}  // namespace landau
