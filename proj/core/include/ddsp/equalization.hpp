#pragma once

#include "ddsp/channel.hpp"
#include "ddsp/qam.hpp"
#include "ddsp/waveform.hpp"

#include <optional>

namespace ddsp {

struct EqualizerConfig {
    int max_iters = 50;
    std::optional<double> eta;  // fixed step size; nullopt = 1/lambda_max
    double snr_linear = 1.0;
    double early_exit_rel = 1e-6;  // stop when the update stalls

    void validate() const {
        if (max_iters < 1) throw std::invalid_argument("EqualizerConfig: max_iters >= 1");
        if (eta && *eta <= 0.0) throw std::invalid_argument("EqualizerConfig: eta > 0");
    }
};

// Elementwise X^ = H* (.) Y / (|H|^2 + 1/SNR).
Matrix single_tap_mmse(const Matrix& y, const Matrix& h_tf, double snr_linear);

// Per-symbol regularized LS: x^_n = (H^H H + SNR^-1 I)^-1 H^H y_n with
// H = F_M H_n F_M^H and y_n = F_M r_n.
Matrix full_mmse(const ComplexGrid& r, const PathList& paths, const FrameConfig& frame,
                 double snr_linear);

// Landweber iteration on the path-wise channel operator; matched-filter
// combining across paths forms the adjoint update. Throws if the residual
// grows past 10x its starting norm (bad step size).
Matrix imfc_landweber(const ComplexGrid& r, const PathList& paths,
                      const FrameConfig& frame, const EqualizerConfig& cfg);

// Largest eigenvalue of H^H H via power iteration from a fixed-seed random
// start; the returned step size is 1/lambda_max.
double estimate_eta(const PathList& paths, const FrameConfig& frame, int iters = 10);

struct DetectionResult {
    Matrix d_hat;
    Bits bits;
};

// D^ = (X^ - sigma_p * ISFFT(P)) / sigma_d, then hard demapping.
DetectionResult remove_pilot_and_demap(const Matrix& x_hat, const SpPilotConfig& sp,
                                       int order);

}  // namespace ddsp
