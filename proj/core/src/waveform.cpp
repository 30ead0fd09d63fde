#include "ddsp/waveform.hpp"

#include "ddsp/numerics.hpp"

#include <cmath>

namespace ddsp {

Matrix sp_pilot_tf(const SpPilotConfig& sp, int M, int N) {
    sp.validate(M, N);
    Matrix pilot = Matrix::Zero(M, N);
    pilot(sp.m_p, sp.n_p) = 1.0;
    return isfft(ComplexGrid(std::move(pilot), Domain::DelayDoppler)).m;
}

ComplexGrid build_sp_grid(const Matrix& data, const SpPilotConfig& sp) {
    const int M = static_cast<int>(data.rows());
    const int N = static_cast<int>(data.cols());
    sp.validate(M, N);
    Matrix x = sp.sigma_d * data + sp.sigma_p * sp_pilot_tf(sp, M, N);
    return ComplexGrid(std::move(x), Domain::FreqTime);
}

Eigen::Index ep_pilot_count(const EpPilotConfig& ep, int M, int N) {
    ep.validate(M, N);
    const Eigen::Index per_row = (M + ep.K_f - 1) / ep.K_f;
    const Eigen::Index per_col = (N + ep.K_t - 1) / ep.K_t;
    return per_row * per_col;
}

EpFrame build_ep_grid(const Vector& data_symbols, const EpPilotConfig& ep, int M, int N) {
    ep.validate(M, N);
    const Eigen::Index pilots = ep_pilot_count(ep, M, N);
    if (data_symbols.size() != static_cast<Eigen::Index>(M) * N - pilots)
        throw std::invalid_argument("build_ep_grid: data symbol count mismatch");

    EpFrame frame;
    frame.grid = ComplexGrid::zero(M, N, Domain::FreqTime);
    frame.mask = PilotMask::Constant(M, N, false);
    Eigen::Index next = 0;
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m) {
            if (m % ep.K_f == 0 && n % ep.K_t == 0) {
                frame.grid.m(m, n) = ep.pilot_value;
                frame.mask(m, n) = true;
            } else {
                frame.grid.m(m, n) = data_symbols(next++);
            }
        }
    return frame;
}

ComplexGrid modulate(const ComplexGrid& x) {
    require_domain(x, Domain::FreqTime, "modulate");
    return ComplexGrid(idft_cols(x.m), Domain::DelayTime);
}

double papr_db(const ComplexGrid& s) {
    const double total = s.m.squaredNorm();
    if (total == 0.0) throw std::invalid_argument("papr_db: all-zero signal");
    const double peak = s.m.cwiseAbs2().maxCoeff();
    const double mean = total / static_cast<double>(s.m.size());
    return 10.0 * std::log10(peak / mean);
}

}  // namespace ddsp
