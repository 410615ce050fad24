#pragma once

#include <span>
#include <vector>

#include "tlo/grid.hpp"

namespace tlo {

/// forward: integral f(x) e^{-2 pi i x xi} dx; inverse: e^{+2 pi i x xi}.
enum class FourierSign { forward, inverse };

/// Continuous Fourier transform sampled between two paired grids, computed
/// with one FFT plus phase corrections. For in.step * out.step * n == 1 the
/// map is unitary for the Riemann-sum inner products and forward/inverse
/// compose to the identity for any grid offsets.
class LineTransform {
public:
    LineTransform(const LineGrid& in, const LineGrid& out, FourierSign sign);

    const LineGrid& input() const noexcept { return in_; }
    const LineGrid& output() const noexcept { return out_; }
    FourierSign sign() const noexcept { return sign_; }

    /// In-place transform of one row of length input().count().
    void apply(std::span<cplx> row) const;

private:
    LineGrid in_;
    LineGrid out_;
    FourierSign sign_;
    std::vector<cplx> pre_;
    std::vector<cplx> post_;
    void* plan_;  // fftw_plan, owned by the global plan cache
};

/// Samples of the transform on f.grid.dual().
SampledFunction fourier(const SampledFunction& f, FourierSign sign);
/// Samples of the transform on an explicit grid paired with f.grid.
SampledFunction fourier(const SampledFunction& f, FourierSign sign, const LineGrid& out);

/// e^{2 pi i turns}, with the argument reduced modulo one first.
cplx unit_phase(double turns);

}  // namespace tlo
