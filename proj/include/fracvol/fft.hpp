#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <new>
#include <span>

namespace fracvol::detail {

// FFTW's planner is not reentrant; execution on distinct buffers is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

/// fftw_malloc-backed complex buffer. Always SIMD-aligned, so the planner
/// picks the same codelets on every call and results are bit-reproducible.
class ComplexBuffer {
public:
    explicit ComplexBuffer(std::size_t n)
        : n_(n), data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n ? n : 1)))) {
        if (!data_) throw std::bad_alloc();
        for (std::size_t i = 0; i < n_; ++i) data_[i][0] = data_[i][1] = 0.0;
    }
    ~ComplexBuffer() { fftw_free(data_); }
    ComplexBuffer(const ComplexBuffer&) = delete;
    ComplexBuffer& operator=(const ComplexBuffer&) = delete;

    std::size_t size() const { return n_; }
    fftw_complex* data() { return data_; }
    double& re(std::size_t i) { return data_[i][0]; }
    double& im(std::size_t i) { return data_[i][1]; }

private:
    std::size_t n_;
    fftw_complex* data_;
};

/// In-place unnormalized DFT, sign -1 (forward) or +1 (backward).
inline void fft_inplace(ComplexBuffer& buf, int sign) {
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(buf.size()), buf.data(), buf.data(), sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace fracvol::detail
