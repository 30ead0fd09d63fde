#pragma once

#include "ddsp/frame.hpp"
#include "ddsp/grid.hpp"

#include <random>
#include <vector>

namespace ddsp {

struct PathParams {
    Complex gain;     // alpha_p
    double tau = 0.0; // delay [s]
    double nu = 0.0;  // Doppler shift [Hz]
};

using PathList = std::vector<PathParams>;

// P-path parametric channel with unit total gain power and delays sorted
// ascending.
struct ChannelRealization {
    PathList paths;

    int path_count() const { return static_cast<int>(paths.size()); }
    void validate(const FrameConfig& frame) const;
};

struct NoiseConfig {
    double sigma2 = 1.0;  // noise variance per complex sample
};

struct PowerAllocation {
    double sigma_d;
    double sigma_p;
    double sigma2;
};

// One draw of the 4-path tapped channel: delays [0, 0.9, 2.7, 4] us, uniform
// power-delay profile with i.i.d. uniform gain phases normalized to unit total
// power, nu_p = f_c * (v_max/c) * cos(theta_p) with theta_p ~ U[0, 2pi).
ChannelRealization draw_channel(const FrameConfig& frame, double v_max_kmh,
                                std::mt19937_64& rng);

// Rounds delays to the nearest delay bin 1/(M*delta_f) and Dopplers to the
// nearest signed Doppler bin 1/(N*T'); gains unchanged.
ChannelRealization quantize_integer(const ChannelRealization& ch, const FrameConfig& frame);

// Noiseless ICI-aware propagation:
// R = sum_p alpha_p * diag(c~(nu_p)) * F_M^H * (X (.) b(tau_p) c(nu_p)^T).
ComplexGrid apply_channel(const ComplexGrid& x, const PathList& paths,
                          const FrameConfig& frame);

// Exact adjoint of apply_channel under the Frobenius inner product.
ComplexGrid channel_adjoint(const ComplexGrid& r, const PathList& paths,
                            const FrameConfig& frame);

// ICI-free model: Y = H_tf (.) X with H_tf = sum_p alpha_p b(tau_p) c(nu_p)^T.
ComplexGrid apply_channel_ici_free(const ComplexGrid& x, const PathList& paths,
                                   const FrameConfig& frame);

// Frequency-time channel matrix H_tf of the ICI-free model.
Matrix tf_channel_matrix(const PathList& paths, const FrameConfig& frame);

// Per-symbol delay-time channel matrix
// H_n = sum_p alpha~_{p,n} diag(c~(nu_p)) F_M^H diag(b(tau_p)) F_M.
Matrix per_symbol_channel_matrix(const PathList& paths, const FrameConfig& frame, int n);

// Adds i.i.d. circular complex Gaussian noise of variance sigma2 per entry.
ComplexGrid add_noise(const ComplexGrid& grid, const NoiseConfig& noise,
                      std::mt19937_64& rng);

// Unit-variance circular complex Gaussian deviate (Box-Muller on the raw
// 64-bit stream, so results are identical across standard libraries).
Complex complex_gaussian(std::mt19937_64& rng);

// With sigma2 anchored at 1: sigma_d^2 = SNR_lin / (1 + beta/(M*N)),
// sigma_p^2 = beta * sigma_d^2, beta = 10^(pdr_db/10).
PowerAllocation sigma_from_snr(double snr_db, double pdr_db, const FrameConfig& frame);

}  // namespace ddsp
