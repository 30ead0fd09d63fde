#pragma once

#include "ddsp/frame.hpp"
#include "ddsp/grid.hpp"

#include <stdexcept>

namespace ddsp {

// Superimposed-pilot placement and power split. The pilot is a single
// delay-Doppler delta at (m_p, n_p) with amplitude sigma_p.
struct SpPilotConfig {
    int m_p = 0;
    int n_p = 0;
    double sigma_d = 1.0;  // data amplitude (sqrt power)
    double sigma_p = 1.0;  // pilot amplitude (sqrt power)

    double pdr() const { return sigma_p * sigma_p / (sigma_d * sigma_d); }

    void validate(int M, int N) const {
        if (m_p < 0 || m_p >= M || n_p < 0 || n_p >= N)
            throw std::invalid_argument("SpPilotConfig: pilot index out of range");
        if (sigma_d < 0.0 || sigma_p <= 0.0)
            throw std::invalid_argument("SpPilotConfig: sigma_d >= 0 and sigma_p > 0 required");
    }
};

// Embedded-pilot lattice: pilots at (m, n) with m % K_f == 0 and n % K_t == 0.
struct EpPilotConfig {
    int K_f = 4;
    int K_t = 4;
    Complex pilot_value = {1.0, 0.0};

    void validate(int M, int N) const {
        if (K_f < 1 || K_f > M || K_t < 1 || K_t > N)
            throw std::invalid_argument("EpPilotConfig: spacings must satisfy 1 <= K <= dim");
    }
};

using PilotMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct EpFrame {
    ComplexGrid grid;  // FreqTime
    PilotMask mask;    // true at pilot positions
};

// Unit-amplitude pilot contribution in the frequency-time domain,
// F_M * P * F_N^H with P = e_{m_p} e_{n_p}^T.
Matrix sp_pilot_tf(const SpPilotConfig& sp, int M, int N);

// X = sigma_d * D + sigma_p * ISFFT(P). D must be M x N.
ComplexGrid build_sp_grid(const Matrix& data, const SpPilotConfig& sp);

// Places pilot_value on the lattice and the given data symbols (column-major
// over off-lattice positions) elsewhere.
EpFrame build_ep_grid(const Vector& data_symbols, const EpPilotConfig& ep, int M, int N);

Eigen::Index ep_pilot_count(const EpPilotConfig& ep, int M, int N);

// Time-domain signal matrix S = F_M^H * X.
ComplexGrid modulate(const ComplexGrid& x);

// 10*log10(max |S|^2 / P_T) with P_T = ||S||_F^2 / (M*N).
double papr_db(const ComplexGrid& s);

}  // namespace ddsp
