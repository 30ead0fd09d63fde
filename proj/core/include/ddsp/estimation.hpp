#pragma once

#include "ddsp/channel.hpp"
#include "ddsp/waveform.hpp"

namespace ddsp {

struct EstimatedPath {
    Complex gain;
    double tau = 0.0;  // [s]
    double nu = 0.0;   // [Hz]
};

enum class EstimateKind { Parametric, GridTF };

struct EstimatedChannel {
    EstimateKind kind = EstimateKind::Parametric;
    std::vector<EstimatedPath> paths;  // Parametric
    Matrix h_tf;                       // GridTF

    int path_count() const { return static_cast<int>(paths.size()); }
    PathList path_list() const {
        PathList out;
        out.reserve(paths.size());
        for (const auto& p : paths) out.push_back({p.gain, p.tau, p.nu});
        return out;
    }
};

// Knobs for the iterative fractional estimator.
struct CeConfig {
    int p_max = 8;
    double epsilon = 1e-3;      // relative residual-change stop threshold
    double refine_window = 0.5; // half-width of the stage-1 search, in bins
    int refine_stages = 2;
    int refine_points = 41;     // odd, >= 3

    void validate() const {
        if (p_max < 1) throw std::invalid_argument("CeConfig: p_max >= 1");
        if (epsilon <= 0.0) throw std::invalid_argument("CeConfig: epsilon > 0");
        if (refine_window <= 0.0 || refine_window > 1.0)
            throw std::invalid_argument("CeConfig: refine_window in (0, 1]");
        if (refine_points < 3 || refine_points % 2 == 0)
            throw std::invalid_argument("CeConfig: refine_points odd and >= 3");
        if (refine_stages < 1) throw std::invalid_argument("CeConfig: refine_stages >= 1");
    }
};

// Embedded-pilot LS estimate at pilot positions followed by bilinear
// interpolation (frequency first, then time; nearest-edge hold past the last
// pilot).
EstimatedChannel ep_estimate(const ComplexGrid& y, const ComplexGrid& x,
                             const PilotMask& mask);

// Threshold method: integer (l, k) peaks with |Y_dd| >= 3*sqrt(sigma2 +
// sigma_d^2) become paths with gain Y_dd / sigma_p. Delay offsets are
// restricted to [0, ceil(T_cp * M * delta_f)]; Doppler offsets keep the raw
// cyclic bin index k in [0, N).
EstimatedChannel tm_estimate(const ComplexGrid& y_dd, const SpPilotConfig& sp,
                             double sigma2, const FrameConfig& frame);

// Iterative fractional delay-Doppler estimator on the residual delay-Doppler
// matrix: integer peak init, disjoint correlation refinement of delay and
// Doppler, LS gain, residual cancellation.
EstimatedChannel fractional_ce(const ComplexGrid& y_dd, const SpPilotConfig& sp,
                               const FrameConfig& frame, const CeConfig& cfg);

// Delay-time response of a unit-gain path through the pilot-only frame:
// A(tau, nu) = sigma_p * diag(c~(nu)) * F_M^H * (ISFFT(P) (.) b(tau) c(nu)^T).
ComplexGrid build_A(double tau, double nu, const SpPilotConfig& sp,
                    const FrameConfig& frame);

// H_tf = sum_p gain_p * b(tau_p) * c(nu_p)^T.
Matrix reconstruct_tf(const EstimatedChannel& est, const FrameConfig& frame);

}  // namespace ddsp
