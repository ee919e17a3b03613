#pragma once

#include <vector>

#include "landau/common.hpp"

namespace landau {

// In-place batched complex DFT (FFTW). The transform of length n_1×…×n_r is
// applied `howmany` times with element stride `stride` and batch distance
// `dist`. sign = -1: Σ x_j e^{-2πijk/n}; sign = +1: Σ x_j e^{+2πijk/n}
// (unnormalized). Plans are created under a global lock, so construction is
// thread-safe; execute() on distinct arrays may run concurrently.
class FftPlan {
public:
    FftPlan(std::vector<int> dims, int howmany, int stride, int dist, int sign);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    FftPlan(FftPlan&& other) noexcept;
    FftPlan& operator=(FftPlan&& other) noexcept;

    void execute(cplx* data) const;

private:
    void* plan_ = nullptr;
};

}  // namespace landau
