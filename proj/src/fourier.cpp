#include "tlo/fourier.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include <fftw3.h>

namespace tlo {

namespace {

// FFTW planning is not thread safe; execution with fftw_execute_dft is.
fftw_plan cached_plan(std::size_t n, int direction) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, int>, fftw_plan> plans;
    std::lock_guard lock(mutex);
    auto key = std::make_pair(n, direction);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    std::vector<cplx> scratch(n);
    auto* data = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, direction, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fftw: planning failed for n = " + std::to_string(n));
    plans.emplace(key, plan);
    return plan;
}

}  // namespace

cplx unit_phase(double turns) {
    const double frac = turns - std::nearbyint(turns);
    const double angle = 2.0 * std::numbers::pi * frac;
    return {std::cos(angle), std::sin(angle)};
}

LineTransform::LineTransform(const LineGrid& in, const LineGrid& out, FourierSign sign)
    : in_(in), out_(out), sign_(sign) {
    if (!in.pairs_with(out))
        throw std::invalid_argument("fourier: output grid is not paired with the input grid (need equal counts "
                                    "and step product 1/count)");
    const std::size_t n = in.count();
    const double s = sign == FourierSign::forward ? -1.0 : 1.0;
    // x_j xi_k = x0 xi_k + j h xi0 + j k / n, so the transform is an FFT between two phase ramps.
    pre_.resize(n);
    post_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        pre_[j] = unit_phase(s * static_cast<double>(j) * in.step() * out.start());
        post_[j] = in.step() * unit_phase(s * in.start() * out.at(j));
    }
    plan_ = cached_plan(n, sign == FourierSign::forward ? FFTW_FORWARD : FFTW_BACKWARD);
}

void LineTransform::apply(std::span<cplx> row) const {
    if (row.size() != pre_.size()) throw std::invalid_argument("LineTransform::apply: row length mismatch");
    for (std::size_t j = 0; j < row.size(); ++j) row[j] *= pre_[j];
    auto* data = reinterpret_cast<fftw_complex*>(row.data());
    fftw_execute_dft(static_cast<fftw_plan>(plan_), data, data);
    for (std::size_t k = 0; k < row.size(); ++k) row[k] *= post_[k];
}

SampledFunction fourier(const SampledFunction& f, FourierSign sign) {
    return fourier(f, sign, f.grid.dual());
}

SampledFunction fourier(const SampledFunction& f, FourierSign sign, const LineGrid& out) {
    for (std::size_t j = 0; j < f.values.size(); ++j) {
        if (!std::isfinite(f.values[j].real()) || !std::isfinite(f.values[j].imag()))
            throw std::invalid_argument("fourier: non-finite sample at index " + std::to_string(j) +
                                        " (x = " + std::to_string(f.grid.at(j)) + ")");
    }
    const LineTransform transform(f.grid, out, sign);
    SampledFunction result{out, f.values};
    transform.apply(result.values);
    return result;
}

}  // namespace tlo
