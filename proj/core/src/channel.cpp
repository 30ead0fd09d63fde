#include "ddsp/channel.hpp"

#include "ddsp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ddsp {

namespace {

constexpr double kSpeedOfLight = 299792458.0;  // m/s
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa in [0, 1).
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void ChannelRealization::validate(const FrameConfig& frame) const {
    if (paths.empty()) throw std::invalid_argument("ChannelRealization: at least one path");
    double power = 0.0;
    double prev_tau = -1.0;
    for (const auto& p : paths) {
        if (p.tau < 0.0 || p.tau > frame.t_cp)
            throw std::invalid_argument("ChannelRealization: delay outside [0, T_cp]");
        if (p.tau < prev_tau)
            throw std::invalid_argument("ChannelRealization: delays not sorted");
        prev_tau = p.tau;
        power += std::norm(p.gain);
    }
    if (std::abs(power - 1.0) > 1e-12)
        throw std::invalid_argument("ChannelRealization: total gain power must be 1");
}

Complex complex_gaussian(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::polar(std::sqrt(-std::log(u1)), kTwoPi * u2);
}

ChannelRealization draw_channel(const FrameConfig& frame, double v_max_kmh,
                                std::mt19937_64& rng) {
    if (v_max_kmh < 0.0) throw std::invalid_argument("draw_channel: v_max must be >= 0");
    static constexpr double kDelaysUs[] = {0.0, 0.9, 2.7, 4.0};
    const int P = static_cast<int>(std::size(kDelaysUs));
    const double nu_max = frame.f_c * (v_max_kmh / 3.6) / kSpeedOfLight;
    const double magnitude = 1.0 / std::sqrt(static_cast<double>(P));

    ChannelRealization ch;
    ch.paths.reserve(P);
    for (int p = 0; p < P; ++p) {
        PathParams path;
        path.tau = kDelaysUs[p] * 1e-6;
        if (path.tau > frame.t_cp)
            throw std::invalid_argument("draw_channel: T_cp shorter than the delay spread");
        path.gain = std::polar(magnitude, kTwoPi * uniform01(rng));
        path.nu = nu_max * std::cos(kTwoPi * uniform01(rng));
        ch.paths.push_back(path);
    }
    return ch;
}

ChannelRealization quantize_integer(const ChannelRealization& ch, const FrameConfig& frame) {
    const double delay_res = 1.0 / (frame.M * frame.delta_f);
    const double doppler_res = 1.0 / (frame.N * frame.extended_duration());
    ChannelRealization out = ch;
    for (auto& p : out.paths) {
        p.tau = std::round(p.tau / delay_res) * delay_res;
        p.nu = std::round(p.nu / doppler_res) * doppler_res;
    }
    return out;
}

ComplexGrid apply_channel(const ComplexGrid& x, const PathList& paths,
                          const FrameConfig& frame) {
    require_domain(x, Domain::FreqTime, "apply_channel");
    if (paths.empty()) throw std::invalid_argument("apply_channel: empty path list");
    const int M = static_cast<int>(x.rows());
    const int N = static_cast<int>(x.cols());
    Matrix r = Matrix::Zero(M, N);
    for (const auto& p : paths) {
        const SteeringVector b = delay_steering(p.tau, M, frame.delta_f);
        const SteeringVector c = doppler_slow_steering(p.nu, N, frame);
        const SteeringVector ct = doppler_fast_steering(p.nu, M, frame.symbol_duration());
        Matrix term = x.m.cwiseProduct(b * c.transpose());
        term = idft_cols(term);
        r.noalias() += p.gain * ct.asDiagonal() * term;
    }
    return ComplexGrid(std::move(r), Domain::DelayTime);
}

ComplexGrid channel_adjoint(const ComplexGrid& r, const PathList& paths,
                            const FrameConfig& frame) {
    require_domain(r, Domain::DelayTime, "channel_adjoint");
    if (paths.empty()) throw std::invalid_argument("channel_adjoint: empty path list");
    const int M = static_cast<int>(r.rows());
    const int N = static_cast<int>(r.cols());
    Matrix x = Matrix::Zero(M, N);
    for (const auto& p : paths) {
        const SteeringVector b = delay_steering(p.tau, M, frame.delta_f);
        const SteeringVector c = doppler_slow_steering(p.nu, N, frame);
        const SteeringVector ct = doppler_fast_steering(p.nu, M, frame.symbol_duration());
        Matrix term = ct.conjugate().asDiagonal() * r.m;
        term = dft_cols(term);
        x.noalias() += std::conj(p.gain) * term.cwiseProduct((b * c.transpose()).conjugate());
    }
    return ComplexGrid(std::move(x), Domain::FreqTime);
}

Matrix tf_channel_matrix(const PathList& paths, const FrameConfig& frame) {
    if (paths.empty()) throw std::invalid_argument("tf_channel_matrix: empty path list");
    Matrix h = Matrix::Zero(frame.M, frame.N);
    for (const auto& p : paths) {
        const SteeringVector b = delay_steering(p.tau, frame.M, frame.delta_f);
        const SteeringVector c = doppler_slow_steering(p.nu, frame.N, frame);
        h.noalias() += p.gain * b * c.transpose();
    }
    return h;
}

ComplexGrid apply_channel_ici_free(const ComplexGrid& x, const PathList& paths,
                                   const FrameConfig& frame) {
    require_domain(x, Domain::FreqTime, "apply_channel_ici_free");
    return ComplexGrid(tf_channel_matrix(paths, frame).cwiseProduct(x.m), Domain::FreqTime);
}

Matrix per_symbol_channel_matrix(const PathList& paths, const FrameConfig& frame, int n) {
    if (n < 0 || n >= frame.N)
        throw std::invalid_argument("per_symbol_channel_matrix: symbol index out of range");
    if (paths.empty())
        throw std::invalid_argument("per_symbol_channel_matrix: empty path list");
    const int M = frame.M;
    Matrix h = Matrix::Zero(M, M);
    for (const auto& p : paths) {
        const SteeringVector b = delay_steering(p.tau, M, frame.delta_f);
        const SteeringVector ct = doppler_fast_steering(p.nu, M, frame.symbol_duration());
        const Complex gain_n = p.gain * std::polar(1.0, kTwoPi * p.nu * frame.symbol_start(n));
        // F_M^H diag(b) F_M is circulant with first column F_M^H b / sqrt(M).
        Vector g = idft_vec(b) / std::sqrt(static_cast<double>(M));
        for (int col = 0; col < M; ++col)
            for (int row = 0; row < M; ++row)
                h(row, col) += gain_n * ct(row) * g((row - col + M) % M);
    }
    return h;
}

ComplexGrid add_noise(const ComplexGrid& grid, const NoiseConfig& noise,
                      std::mt19937_64& rng) {
    if (noise.sigma2 < 0.0) throw std::invalid_argument("add_noise: sigma2 must be >= 0");
    if (noise.sigma2 == 0.0) return grid;
    ComplexGrid out = grid;
    const double amp = std::sqrt(noise.sigma2);
    for (Eigen::Index j = 0; j < out.cols(); ++j)
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            out.m(i, j) += amp * complex_gaussian(rng);
    return out;
}

PowerAllocation sigma_from_snr(double snr_db, double pdr_db, const FrameConfig& frame) {
    const double snr_lin = std::pow(10.0, snr_db / 10.0);
    const double beta = std::pow(10.0, pdr_db / 10.0);
    PowerAllocation a;
    a.sigma2 = 1.0;
    const double sigma_d2 = snr_lin * a.sigma2 / (1.0 + beta / frame.resource_elements());
    a.sigma_d = std::sqrt(sigma_d2);
    a.sigma_p = std::sqrt(beta * sigma_d2);
    return a;
}

}  // namespace ddsp
