#include "ddsp/numerics.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace ddsp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Cached FFTW plans per transform size. Plan creation is not thread-safe;
// execution through fftw_execute_dft is.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<Complex> buf(static_cast<size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(
            n, reinterpret_cast<fftw_complex*>(buf.data()),
            reinterpret_cast<fftw_complex*>(buf.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    struct KeyHash {
        size_t operator()(const std::pair<int, int>& k) const {
            return std::hash<long long>()((static_cast<long long>(k.first) << 2) ^ (k.second & 3));
        }
    };
    std::mutex mutex_;
    std::unordered_map<std::pair<int, int>, fftw_plan, KeyHash> plans_;
};

// In-place unitary DFT of a contiguous length-n buffer.
// sign = FFTW_FORWARD applies F, FFTW_BACKWARD applies F^H.
void transform_buffer(Complex* data, int n, int sign) {
    fftw_plan plan = PlanCache::instance().get(n, sign);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) data[i] *= scale;
}

}  // namespace

Matrix dft_matrix(int size) {
    if (size < 1) throw std::invalid_argument("dft_matrix: size must be >= 1");
    Matrix f(size, size);
    const double scale = 1.0 / std::sqrt(static_cast<double>(size));
    for (int m = 0; m < size; ++m)
        for (int q = 0; q < size; ++q) {
            const double phase = -kTwoPi * static_cast<double>(m) * q / size;
            f(m, q) = std::polar(scale, phase);
        }
    return f;
}

SteeringVector delay_steering(double tau, int M, double delta_f) {
    if (M < 1) throw std::invalid_argument("delay_steering: M must be >= 1");
    SteeringVector b(M);
    for (int q = 0; q < M; ++q) b(q) = std::polar(1.0, -kTwoPi * q * tau * delta_f);
    return b;
}

SteeringVector doppler_slow_steering(double nu, int N, const FrameConfig& frame) {
    if (N < 1) throw std::invalid_argument("doppler_slow_steering: N must be >= 1");
    SteeringVector c(N);
    for (int n = 0; n < N; ++n) c(n) = std::polar(1.0, kTwoPi * nu * frame.symbol_start(n));
    return c;
}

SteeringVector doppler_fast_steering(double nu, int M, double T) {
    if (M < 1) throw std::invalid_argument("doppler_fast_steering: M must be >= 1");
    SteeringVector c(M);
    for (int q = 0; q < M; ++q) c(q) = std::polar(1.0, kTwoPi * q * nu * T / M);
    return c;
}

Matrix dft_cols(const Matrix& x) {
    Matrix out = x;
    const int n = static_cast<int>(out.rows());
    for (Eigen::Index j = 0; j < out.cols(); ++j)
        transform_buffer(out.col(j).data(), n, FFTW_FORWARD);
    return out;
}

Matrix idft_cols(const Matrix& x) {
    Matrix out = x;
    const int n = static_cast<int>(out.rows());
    for (Eigen::Index j = 0; j < out.cols(); ++j)
        transform_buffer(out.col(j).data(), n, FFTW_BACKWARD);
    return out;
}

Matrix dft_right(const Matrix& x) {
    // X * F_C = (F_C X^T)^T since the DFT matrix is symmetric.
    Matrix t = x.transpose();
    const int n = static_cast<int>(t.rows());
    for (Eigen::Index j = 0; j < t.cols(); ++j)
        transform_buffer(t.col(j).data(), n, FFTW_FORWARD);
    return t.transpose();
}

Matrix idft_right(const Matrix& x) {
    // X * F_C^H = (F_C^H X^T)^T.
    Matrix t = x.transpose();
    const int n = static_cast<int>(t.rows());
    for (Eigen::Index j = 0; j < t.cols(); ++j)
        transform_buffer(t.col(j).data(), n, FFTW_BACKWARD);
    return t.transpose();
}

Vector dft_vec(const Vector& x) {
    Vector out = x;
    transform_buffer(out.data(), static_cast<int>(out.size()), FFTW_FORWARD);
    return out;
}

Vector idft_vec(const Vector& x) {
    Vector out = x;
    transform_buffer(out.data(), static_cast<int>(out.size()), FFTW_BACKWARD);
    return out;
}

ComplexGrid isfft(const ComplexGrid& pilot_grid) {
    require_domain(pilot_grid, Domain::DelayDoppler, "isfft");
    return ComplexGrid(idft_right(dft_cols(pilot_grid.m)), Domain::FreqTime);
}

ComplexGrid sfft(const ComplexGrid& grid) {
    require_domain(grid, Domain::FreqTime, "sfft");
    return ComplexGrid(dft_right(idft_cols(grid.m)), Domain::DelayDoppler);
}

ComplexGrid dd_from_delay_time(const ComplexGrid& r) {
    require_domain(r, Domain::DelayTime, "dd_from_delay_time");
    return ComplexGrid(dft_right(r.m), Domain::DelayDoppler);
}

}  // namespace ddsp
