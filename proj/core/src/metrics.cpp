#include "ddsp/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace ddsp {

double ber(const Bits& sent, const Bits& received) {
    if (sent.size() != received.size())
        throw std::invalid_argument("ber: length mismatch");
    if (sent.empty()) throw std::invalid_argument("ber: empty bit blocks");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < sent.size(); ++i)
        if ((sent[i] & 1) != (received[i] & 1)) ++errors;
    return static_cast<double>(errors) / static_cast<double>(sent.size());
}

double data_density(PilotScheme scheme, int k_f, int k_t) {
    if (scheme == PilotScheme::Superimposed) return 1.0;
    if (k_f < 1 || k_t < 1)
        throw std::invalid_argument("data_density: spacings must be >= 1");
    return 1.0 - 1.0 / (static_cast<double>(k_f) * k_t);
}

double effective_throughput(double ber_value, double density, int order) {
    if (ber_value < 0.0 || ber_value > 1.0)
        throw std::invalid_argument("effective_throughput: BER outside [0, 1]");
    return (1.0 - ber_value) * density * bits_per_symbol(order);
}

double nmse_db(const Matrix& h_hat, const Matrix& h_true) {
    const double ref = h_true.squaredNorm();
    if (ref == 0.0) throw std::invalid_argument("nmse_db: zero reference channel");
    const double err = (h_hat - h_true).squaredNorm();
    if (err == 0.0) return kNmseFloorDb;
    return std::max(kNmseFloorDb, 10.0 * std::log10(err / ref));
}

}  // namespace ddsp
