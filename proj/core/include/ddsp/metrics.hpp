#pragma once

#include "ddsp/grid.hpp"
#include "ddsp/qam.hpp"

#include <string>

namespace ddsp {

inline constexpr double kNmseFloorDb = -120.0;

enum class PilotScheme { Superimposed, Embedded };

struct MetricsRecord {
    std::string scheme;
    int order = 4;
    double snr_db = 0.0;
    double pdr_db = 0.0;
    double v_max_kmh = 0.0;
    std::string channel_kind;  // "integer" or "fractional"
    int trials = 0;
    double ber = 0.0;
    double eff_throughput = 0.0;
    double nmse_db = kNmseFloorDb;
    double papr_db = 0.0;  // mean per-frame PAPR
};

double ber(const Bits& sent, const Bits& received);

// SP frames carry data on every RE; EP frames lose 1/(K_f*K_t).
double data_density(PilotScheme scheme, int k_f = 1, int k_t = 1);

// eta_eff = (1 - BER) * density * log2(Q).
double effective_throughput(double ber_value, double density, int order);

// 10*log10(||H^ - H||_F^2 / ||H||_F^2), floored at kNmseFloorDb.
double nmse_db(const Matrix& h_hat, const Matrix& h_true);

}  // namespace ddsp
