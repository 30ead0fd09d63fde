#include "ddsp/estimation.hpp"

#include "ddsp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace ddsp {

namespace {

int delay_search_limit(const FrameConfig& frame) {
    const int l_max = static_cast<int>(std::ceil(frame.t_cp * frame.M * frame.delta_f));
    return std::min(l_max, frame.M - 1);
}

int signed_doppler_index(int k_idx, int N) {
    return k_idx < (N + 1) / 2 ? k_idx : k_idx - N;
}

// DFT column f_i of the unitary F_n: entry q = exp(-j*2*pi*q*i/n)/sqrt(n).
Vector dft_column(int n, int i) {
    Vector e = Vector::Zero(n);
    e(i) = 1.0;
    return dft_vec(e);
}

// 1D grid search over [center - half_window, center + half_window] clamped to
// [lo, hi]. Each later stage spans one step of the previous stage. Ties break
// toward the smaller argument via strict comparison on a left-to-right scan.
double refine_1d(double center, double half_window, double lo, double hi, int stages,
                 int points, const std::function<double(double)>& metric) {
    double best = std::clamp(center, lo, hi);
    for (int stage = 0; stage < stages; ++stage) {
        const double a = std::max(lo, best - half_window);
        const double b = std::min(hi, best + half_window);
        const double step = (b - a) / (points - 1);
        double best_val = -1.0;
        for (int i = 0; i < points; ++i) {
            const double x = a + step * i;
            const double val = metric(x);
            if (val > best_val) {
                best_val = val;
                best = x;
            }
        }
        half_window = step / 2.0;
    }
    return best;
}

}  // namespace

EstimatedChannel ep_estimate(const ComplexGrid& y, const ComplexGrid& x,
                             const PilotMask& mask) {
    require_domain(y, Domain::FreqTime, "ep_estimate");
    require_domain(x, Domain::FreqTime, "ep_estimate");
    const int M = static_cast<int>(y.rows());
    const int N = static_cast<int>(y.cols());
    if (!mask.any()) throw std::invalid_argument("ep_estimate: empty pilot mask");

    std::vector<int> pilot_cols;
    for (int n = 0; n < N; ++n)
        if (mask.col(n).any()) pilot_cols.push_back(n);

    Matrix h = Matrix::Zero(M, N);
    // LS at pilots, then linear interpolation along frequency within each
    // pilot-bearing symbol.
    for (int n : pilot_cols) {
        std::vector<int> rows;
        for (int m = 0; m < M; ++m)
            if (mask(m, n)) {
                if (x.m(m, n) == Complex(0.0, 0.0))
                    throw std::invalid_argument("ep_estimate: zero pilot symbol");
                h(m, n) = y.m(m, n) / x.m(m, n);
                rows.push_back(m);
            }
        for (int m = 0; m < M; ++m) {
            if (mask(m, n)) continue;
            auto upper = std::upper_bound(rows.begin(), rows.end(), m);
            if (upper == rows.begin()) {
                h(m, n) = h(rows.front(), n);
            } else if (upper == rows.end()) {
                h(m, n) = h(rows.back(), n);
            } else {
                const int m0 = *(upper - 1);
                const int m1 = *upper;
                const double w = static_cast<double>(m - m0) / (m1 - m0);
                h(m, n) = h(m0, n) + w * (h(m1, n) - h(m0, n));
            }
        }
    }
    // Interpolation along time using the frequency-interpolated columns.
    for (int m = 0; m < M; ++m) {
        for (int n = 0; n < N; ++n) {
            if (std::binary_search(pilot_cols.begin(), pilot_cols.end(), n)) continue;
            auto upper = std::upper_bound(pilot_cols.begin(), pilot_cols.end(), n);
            if (upper == pilot_cols.begin()) {
                h(m, n) = h(m, pilot_cols.front());
            } else if (upper == pilot_cols.end()) {
                h(m, n) = h(m, pilot_cols.back());
            } else {
                const int n0 = *(upper - 1);
                const int n1 = *upper;
                const double w = static_cast<double>(n - n0) / (n1 - n0);
                h(m, n) = h(m, n0) + w * (h(m, n1) - h(m, n0));
            }
        }
    }
    EstimatedChannel est;
    est.kind = EstimateKind::GridTF;
    est.h_tf = std::move(h);
    return est;
}

EstimatedChannel tm_estimate(const ComplexGrid& y_dd, const SpPilotConfig& sp,
                             double sigma2, const FrameConfig& frame) {
    require_domain(y_dd, Domain::DelayDoppler, "tm_estimate");
    const int M = static_cast<int>(y_dd.rows());
    const int N = static_cast<int>(y_dd.cols());
    sp.validate(M, N);
    const double threshold = 3.0 * std::sqrt(sigma2 + sp.sigma_d * sp.sigma_d);
    const double delay_res = 1.0 / (frame.M * frame.delta_f);
    const double doppler_res = 1.0 / (frame.N * frame.extended_duration());

    EstimatedChannel est;
    est.kind = EstimateKind::Parametric;
    const int l_max = delay_search_limit(frame);
    for (int l = 0; l <= l_max; ++l) {
        for (int k_idx = 0; k_idx < N; ++k_idx) {
            const Complex value = y_dd.m((sp.m_p + l) % M, (sp.n_p + k_idx) % N);
            if (std::abs(value) >= threshold) {
                // The threshold method treats each detected bin as a path at the
                // raw cyclic bin offset (l, k), k in [0, N). Reconstruction from
                // these aliased Doppler values is what limits this baseline at
                // speed; the cyclic index is used as-is by design.
                est.paths.push_back(
                    {value / sp.sigma_p, l * delay_res, k_idx * doppler_res});
            }
        }
    }
    return est;
}

ComplexGrid build_A(double tau, double nu, const SpPilotConfig& sp,
                    const FrameConfig& frame) {
    const int M = frame.M;
    const int N = frame.N;
    sp.validate(M, N);
    const SteeringVector b = delay_steering(tau, M, frame.delta_f);
    const SteeringVector c = doppler_slow_steering(nu, N, frame);
    const SteeringVector ct = doppler_fast_steering(nu, M, frame.symbol_duration());
    Matrix a = sp_pilot_tf(sp, M, N).cwiseProduct(b * c.transpose());
    a = idft_cols(a);
    a = sp.sigma_p * (ct.asDiagonal() * a);
    return ComplexGrid(std::move(a), Domain::DelayTime);
}

EstimatedChannel fractional_ce(const ComplexGrid& y_dd, const SpPilotConfig& sp,
                               const FrameConfig& frame, const CeConfig& cfg) {
    require_domain(y_dd, Domain::DelayDoppler, "fractional_ce");
    cfg.validate();
    const int M = frame.M;
    const int N = frame.N;
    sp.validate(M, N);

    const double y_norm = y_dd.m.norm();
    const double stop_abs = cfg.epsilon * y_norm;
    const int l_max = delay_search_limit(frame);
    const double delay_res = 1.0 / (M * frame.delta_f);
    const double doppler_res = 1.0 / (N * frame.extended_duration());
    const Vector f_mp = dft_column(M, sp.m_p);
    const Vector f_np_conj = dft_column(N, sp.n_p).conjugate();

    Matrix residual = y_dd.m;
    double prev_norm = y_norm;
    EstimatedChannel est;
    est.kind = EstimateKind::Parametric;

    for (int p = 0; p < cfg.p_max; ++p) {
        // Integer init: strongest residual bin around the pilot.
        int l_hat = 0, k_hat_idx = 0;
        double best = -1.0;
        for (int l = 0; l <= l_max; ++l)
            for (int k_idx = 0; k_idx < N; ++k_idx) {
                const double e = std::norm(residual((sp.m_p + l) % M, (sp.n_p + k_idx) % N));
                if (e > best) {
                    best = e;
                    l_hat = l;
                    k_hat_idx = k_idx;
                }
            }
        const int k_hat = signed_doppler_index(k_hat_idx, N);

        // Delay refinement on the residual's Doppler-bin column.
        const Vector u = residual.col((sp.n_p + k_hat_idx) % N);
        auto delay_metric = [&](double l_bins) {
            const SteeringVector b = delay_steering(l_bins * delay_res, M, frame.delta_f);
            const Vector term = idft_vec(f_mp.cwiseProduct(b));
            return std::abs(u.dot(term));  // Eigen dot conjugates the left side
        };
        const double tau_bins =
            refine_1d(l_hat, cfg.refine_window, 0.0, l_max, cfg.refine_stages,
                      cfg.refine_points, delay_metric);

        // Doppler refinement on the residual's delay-bin row.
        const Vector v = residual.row((sp.m_p + l_hat) % M).transpose();
        auto doppler_metric = [&](double k_bins) {
            const SteeringVector c =
                doppler_slow_steering(k_bins * doppler_res, N, frame);
            const Vector term = dft_vec(f_np_conj.cwiseProduct(c));
            return std::abs(v.dot(term));
        };
        const double nu_bins =
            refine_1d(k_hat, cfg.refine_window, -N / 2.0, N / 2.0, cfg.refine_stages,
                      cfg.refine_points, doppler_metric);

        const double tau_hat = tau_bins * delay_res;
        const double nu_hat = nu_bins * doppler_res;

        // LS gain on the residual: Tr(A^H E_dd F_N^H) / ||A||_F^2 computed as
        // <A F_N, E_dd> since F_N is unitary.
        const Matrix a_dd = dft_right(build_A(tau_hat, nu_hat, sp, frame).m);
        const double a_energy = a_dd.squaredNorm();
        const Complex gain = (a_dd.conjugate().cwiseProduct(residual)).sum() / a_energy;

        residual -= gain * a_dd;
        est.paths.push_back({gain, tau_hat, nu_hat});

        // Relative stop: once removing a path barely shrinks the residual,
        // the remaining energy is data/noise, not paths. The path that
        // triggered the stop is itself below the significance bar, so it is
        // dropped.
        const double norm = residual.norm();
        const double change = prev_norm - norm;
        prev_norm = norm;
        if (change < stop_abs) {
            est.paths.pop_back();
            break;
        }
    }
    return est;
}

Matrix reconstruct_tf(const EstimatedChannel& est, const FrameConfig& frame) {
    if (est.kind == EstimateKind::GridTF) return est.h_tf;
    Matrix h = Matrix::Zero(frame.M, frame.N);
    for (const auto& p : est.paths) {
        const SteeringVector b = delay_steering(p.tau, frame.M, frame.delta_f);
        const SteeringVector c = doppler_slow_steering(p.nu, frame.N, frame);
        h.noalias() += p.gain * b * c.transpose();
    }
    return h;
}

}  // namespace ddsp
