#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace solwave::fft {

// Cached FFTW plans, one forward/backward pair per transform size.
// Plans are created with FFTW_ESTIMATE | FFTW_UNALIGNED so they can be
// executed on any caller buffer via fftw_execute_dft, and so that planning
// is deterministic.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

inline PlanPair& plans_for(std::size_t n) {
    static std::mutex mtx;
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<std::complex<double>> buf(n);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    PlanPair pp;
    pp.fwd = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_FORWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    pp.bwd = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!pp.fwd || !pp.bwd) throw std::runtime_error("fftw plan creation failed");
    return cache.emplace(n, pp).first->second;
}

// In-place unnormalized forward transform (sum with e^{-i k x} phases).
inline void forward(std::vector<std::complex<double>>& v) {
    auto& pp = plans_for(v.size());
    auto* p = reinterpret_cast<fftw_complex*>(v.data());
    fftw_execute_dft(pp.fwd, p, p);
}

// In-place inverse transform, normalized by 1/n.
inline void inverse(std::vector<std::complex<double>>& v) {
    auto& pp = plans_for(v.size());
    auto* p = reinterpret_cast<fftw_complex*>(v.data());
    fftw_execute_dft(pp.bwd, p, p);
    const double s = 1.0 / static_cast<double>(v.size());
    for (auto& z : v) z *= s;
}

}  // namespace solwave::fft
