#include "ddsp/equalization.hpp"

#include "ddsp/numerics.hpp"

#include <cmath>
#include <numbers>

namespace ddsp {

Matrix single_tap_mmse(const Matrix& y, const Matrix& h_tf, double snr_linear) {
    if (y.rows() != h_tf.rows() || y.cols() != h_tf.cols())
        throw std::invalid_argument("single_tap_mmse: shape mismatch");
    const double reg = 1.0 / snr_linear;
    Matrix out = h_tf.conjugate().cwiseProduct(y);
    out.array() /= (h_tf.array().abs2() + reg).cast<Complex>();
    return out;
}

Matrix full_mmse(const ComplexGrid& r, const PathList& paths, const FrameConfig& frame,
                 double snr_linear) {
    require_domain(r, Domain::DelayTime, "full_mmse");
    const int M = frame.M;
    const int N = frame.N;
    const double reg = 1.0 / snr_linear;
    const Matrix y = dft_cols(r.m);

    // F_M diag(c~) F_M^H per path is n-independent; H_tf,n = sum_p alpha~_{p,n}
    // C_p diag(b(tau_p)).
    std::vector<Matrix> c_freq;
    std::vector<SteeringVector> b_vecs;
    c_freq.reserve(paths.size());
    b_vecs.reserve(paths.size());
    for (const auto& p : paths) {
        const SteeringVector ct = doppler_fast_steering(p.nu, M, frame.symbol_duration());
        Matrix c = Matrix(ct.asDiagonal());
        c = dft_cols(c);
        c = idft_right(c);
        c_freq.push_back(std::move(c));
        b_vecs.push_back(delay_steering(p.tau, M, frame.delta_f));
    }

    Matrix x_hat(M, N);
    Matrix h(M, M);
    for (int n = 0; n < N; ++n) {
        h.setZero();
        for (size_t p = 0; p < paths.size(); ++p) {
            const Complex gain_n =
                paths[p].gain *
                std::polar(1.0, 2.0 * std::numbers::pi * paths[p].nu * frame.symbol_start(n));
            h.noalias() += gain_n * c_freq[p] * b_vecs[p].asDiagonal();
        }
        Matrix normal = h.adjoint() * h;
        normal.diagonal().array() += reg;
        x_hat.col(n) = normal.ldlt().solve(h.adjoint() * y.col(n));
    }
    return x_hat;
}

double estimate_eta(const PathList& paths, const FrameConfig& frame, int iters) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    Matrix x(frame.M, frame.N);
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = complex_gaussian(rng);
    double norm = x.norm();
    if (norm == 0.0 || paths.empty())
        throw std::invalid_argument("estimate_eta: degenerate operator");
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        x /= norm;
        const ComplexGrid fwd =
            apply_channel(ComplexGrid(x, Domain::FreqTime), paths, frame);
        x = channel_adjoint(fwd, paths, frame).m;
        norm = x.norm();
        if (norm == 0.0) throw std::invalid_argument("estimate_eta: zero operator");
        lambda = norm;
    }
    return 1.0 / lambda;
}

Matrix imfc_landweber(const ComplexGrid& r, const PathList& paths,
                      const FrameConfig& frame, const EqualizerConfig& cfg) {
    require_domain(r, Domain::DelayTime, "imfc_landweber");
    cfg.validate();
    if (paths.empty()) throw std::invalid_argument("imfc_landweber: empty path list");
    const int M = static_cast<int>(r.rows());
    const int N = static_cast<int>(r.cols());

    struct PathTerms {
        Complex gain;
        Matrix h_tf;   // b c^T
        Vector h_ici;  // c~ (column factor of c~ 1^T)
    };
    std::vector<PathTerms> terms;
    terms.reserve(paths.size());
    for (const auto& p : paths) {
        const SteeringVector b = delay_steering(p.tau, M, frame.delta_f);
        const SteeringVector c = doppler_slow_steering(p.nu, N, frame);
        terms.push_back({p.gain, b * c.transpose(),
                         doppler_fast_steering(p.nu, M, frame.symbol_duration())});
    }

    const double eta = cfg.eta ? *cfg.eta : estimate_eta(paths, frame);
    const double r_norm = r.m.norm();
    Matrix x_hat = Matrix::Zero(M, N);
    Matrix error = r.m;

    for (int t = 0; t < cfg.max_iters; ++t) {
        // Adjoint step: per-path single-tap compensation, conversion to
        // frequency-time, single-tap equalization, MRC combining.
        Matrix delta = Matrix::Zero(M, N);
        for (const auto& term : terms) {
            Matrix part = term.h_ici.conjugate().asDiagonal() * error;
            part = dft_cols(part);
            delta.noalias() += std::conj(term.gain) * part.cwiseProduct(term.h_tf.conjugate());
        }
        const Matrix update = eta * delta;
        x_hat += update;

        // Residual via the forward operator.
        error = r.m;
        for (const auto& term : terms) {
            Matrix part = x_hat.cwiseProduct(term.h_tf);
            part = idft_cols(part);
            error.noalias() -= term.gain * (term.h_ici.asDiagonal() * part);
        }
        if (error.norm() > 10.0 * r_norm)
            throw std::runtime_error("imfc_landweber: diverging, step size too large");
        if (update.norm() < cfg.early_exit_rel * x_hat.norm()) break;
    }
    return x_hat;
}

DetectionResult remove_pilot_and_demap(const Matrix& x_hat, const SpPilotConfig& sp,
                                       int order) {
    if (sp.sigma_d <= 0.0)
        throw std::invalid_argument("remove_pilot_and_demap: no data (sigma_d == 0)");
    const int M = static_cast<int>(x_hat.rows());
    const int N = static_cast<int>(x_hat.cols());
    DetectionResult res;
    res.d_hat = (x_hat - sp.sigma_p * sp_pilot_tf(sp, M, N)) / sp.sigma_d;
    res.bits = qam_demap(res.d_hat, order);
    return res;
}

}  // namespace ddsp
