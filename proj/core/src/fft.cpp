#include "fracsemi/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace fracsemi::fft {

namespace {

// fftw planning and execution on shared buffers are not thread safe; a
// per-process registry of plans keyed by (dim, n) is guarded by one mutex.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    fftw_complex* buf_in = nullptr;
    fftw_complex* buf_out = nullptr;
    std::size_t count = 0;
};

std::mutex plan_mutex;
std::map<std::pair<int, int>, PlanPair>& plan_registry() {
    static std::map<std::pair<int, int>, PlanPair> reg;
    return reg;
}

PlanPair& get_plans(int dim, int n) {
    auto& reg = plan_registry();
    auto it = reg.find({dim, n});
    if (it != reg.end()) return it->second;
    PlanPair p;
    p.count = (dim == 1) ? static_cast<std::size_t>(n)
                         : static_cast<std::size_t>(n) * n;
    p.buf_in = fftw_alloc_complex(p.count);
    p.buf_out = fftw_alloc_complex(p.count);
    if (dim == 1) {
        p.fwd = fftw_plan_dft_1d(n, p.buf_in, p.buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_1d(n, p.buf_in, p.buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
        p.fwd = fftw_plan_dft_2d(n, n, p.buf_in, p.buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_2d(n, n, p.buf_in, p.buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    return reg.emplace(std::make_pair(dim, n), p).first->second;
}

} // namespace

std::vector<std::complex<double>> forward(const std::vector<double>& values,
                                          int dim, int n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    PlanPair& p = get_plans(dim, n);
    for (std::size_t i = 0; i < p.count; ++i) {
        p.buf_in[i][0] = values[i];
        p.buf_in[i][1] = 0.0;
    }
    fftw_execute(p.fwd);
    std::vector<std::complex<double>> out(p.count);
    for (std::size_t i = 0; i < p.count; ++i)
        out[i] = {p.buf_out[i][0], p.buf_out[i][1]};
    return out;
}

std::vector<double> inverse_real(const std::vector<std::complex<double>>& spectrum,
                                 int dim, int n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    PlanPair& p = get_plans(dim, n);
    std::memcpy(p.buf_in, spectrum.data(), p.count * sizeof(fftw_complex));
    fftw_execute(p.bwd);
    std::vector<double> out(p.count);
    const double scale = 1.0 / static_cast<double>(p.count);
    for (std::size_t i = 0; i < p.count; ++i) out[i] = p.buf_out[i][0] * scale;
    return out;
}

} // namespace fracsemi::fft
