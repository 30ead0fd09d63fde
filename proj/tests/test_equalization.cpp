#include <doctest.h>

#include "ddsp/channel.hpp"
#include "ddsp/equalization.hpp"
#include "ddsp/numerics.hpp"
#include "ddsp/qam.hpp"
#include "ddsp/waveform.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numbers>
#include <random>

using namespace ddsp;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

FrameConfig small_frame(int M, int N) {
    FrameConfig f;
    f.M = M;
    f.N = N;
    return f;
}

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = Complex(dist(rng), dist(rng));
    return m;
}

PathList random_paths(int count, const FrameConfig& frame, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    PathList paths;
    for (int p = 0; p < count; ++p)
        paths.push_back({std::polar(u01(rng) + 0.1, kTwoPi * u01(rng)),
                         u01(rng) * frame.t_cp, (u01(rng) - 0.5) * 2.0 * 5466.0});
    return paths;
}

// Dense matrix of the channel operator acting on vec(X) (column stacking).
Matrix dense_operator(const PathList& paths, const FrameConfig& frame) {
    const int size = frame.M * frame.N;
    Matrix op(size, size);
    for (int col = 0; col < size; ++col) {
        Matrix basis = Matrix::Zero(frame.M, frame.N);
        basis(col % frame.M, col / frame.M) = 1.0;
        const Matrix out =
            apply_channel(ComplexGrid(basis, Domain::FreqTime), paths, frame).m;
        op.col(col) = Eigen::Map<const Vector>(out.data(), size);
    }
    return op;
}

}  // namespace

TEST_CASE("single_tap_mmse formula cases") {
    Matrix y = Matrix::Constant(1, 1, Complex(2.0, 0.0));
    Matrix h = Matrix::Constant(1, 1, Complex(2.0, 0.0));
    CHECK(std::abs(single_tap_mmse(y, h, 1.0)(0, 0) - Complex(0.8, 0.0)) <= 1e-12);

    std::mt19937_64 rng(3);
    const Matrix y2 = random_matrix(4, 3, rng);
    const Matrix ones = Matrix::Ones(4, 3);
    CHECK((single_tap_mmse(y2, ones, 1e12) - y2).cwiseAbs().maxCoeff() <= 1e-10);

    Matrix h3 = ones;
    h3(1, 1) = 0.0;
    CHECK(single_tap_mmse(y2, h3, 10.0)(1, 1) == Complex(0.0, 0.0));

    CHECK_THROWS_AS(single_tap_mmse(y2, Matrix::Ones(3, 3), 1.0), std::invalid_argument);
}

TEST_CASE("full_mmse matches the explicit dense MMSE formula") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> p_dist(1, 4);
    for (int it = 0; it < 50; ++it) {
        const FrameConfig frame = small_frame(8, 4);
        const PathList paths = random_paths(p_dist(rng), frame, rng);
        const Matrix r = random_matrix(8, 4, rng);
        const double snr = 12.5;
        const Matrix x_hat = full_mmse(ComplexGrid(r, Domain::DelayTime), paths, frame, snr);
        for (int n = 0; n < 4; ++n) {
            // Oracle: H = F_M H_n F_M^H, x = (H^H H + I/snr)^-1 H^H F_M r_n.
            const Matrix f = dft_matrix(8);
            const Matrix h = f * per_symbol_channel_matrix(paths, frame, n) * f.adjoint();
            const Vector y_n = f * r.col(n);
            const Matrix normal =
                h.adjoint() * h + Matrix::Identity(8, 8) / snr;
            const Vector oracle = normal.fullPivHouseholderQr().solve(h.adjoint() * y_n);
            CHECK((x_hat.col(n) - oracle).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("full_mmse inverts a static channel at high SNR with perfect parameters") {
    const FrameConfig frame = small_frame(8, 4);
    // Two-path static channel chosen so |H_tf| stays well away from zero.
    const PathList paths{{Complex(0.9, 0.0), 0.0, 0.0}, {Complex(0.1, 0.2), 1.2e-6, 0.0}};
    std::mt19937_64 rng(11);
    const Matrix x = random_matrix(8, 4, rng);
    const ComplexGrid r = apply_channel(ComplexGrid(x, Domain::FreqTime), paths, frame);
    const Matrix x_hat = full_mmse(r, paths, frame, 1e12);
    CHECK((x_hat - x).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("full_mmse with M=1 reduces to the scalar MMSE") {
    const FrameConfig frame = small_frame(1, 3);
    const PathList paths{{Complex(0.5, 0.5), 0.0, 0.0}};
    std::mt19937_64 rng(13);
    const Matrix r = random_matrix(1, 3, rng);
    const double snr = 4.0;
    const Matrix x_hat = full_mmse(ComplexGrid(r, Domain::DelayTime), paths, frame, snr);
    const Matrix h = Matrix::Constant(1, 3, Complex(0.5, 0.5));
    const Matrix expect = single_tap_mmse(r, h, snr);
    CHECK((x_hat - expect).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("imfc_landweber: identity channel converges in one step") {
    const FrameConfig frame = small_frame(8, 4);
    const PathList identity{{Complex(1.0, 0.0), 0.0, 0.0}};
    std::mt19937_64 rng(17);
    const Matrix r = random_matrix(8, 4, rng);
    EqualizerConfig cfg;
    cfg.max_iters = 1;
    cfg.eta = 1.0;
    const Matrix x_hat =
        imfc_landweber(ComplexGrid(r, Domain::DelayTime), identity, frame, cfg);
    CHECK((x_hat - dft_cols(r)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("imfc_landweber: zero observation stays zero") {
    const FrameConfig frame = small_frame(8, 4);
    const PathList paths = [&] {
        std::mt19937_64 rng(19);
        return random_paths(2, frame, rng);
    }();
    const Matrix x_hat = imfc_landweber(ComplexGrid::zero(8, 4, Domain::DelayTime), paths,
                                        frame, EqualizerConfig{});
    CHECK(x_hat.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("imfc_landweber matches the minimum-norm LS pseudo-inverse oracle") {
    std::mt19937_64 rng(23);
    int checked = 0;
    while (checked < 20) {
        const FrameConfig frame = small_frame(8, 4);
        const PathList paths = random_paths(2, frame, rng);
        const Matrix op = dense_operator(paths, frame);
        // Fixed-iteration gradient descent only reaches the oracle within
        // tolerance when the operator is reasonably conditioned; skip draws
        // whose smallest singular value would need far more iterations.
        const Eigen::JacobiSVD<Matrix> svd(op);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) < 0.25 * sv(0)) continue;
        ++checked;
        const Matrix r = random_matrix(8, 4, rng);
        EqualizerConfig cfg;
        cfg.max_iters = 500;
        cfg.early_exit_rel = 0.0;
        const Matrix x_hat =
            imfc_landweber(ComplexGrid(r, Domain::DelayTime), paths, frame, cfg);
        const Vector oracle = op.completeOrthogonalDecomposition().solve(
            Vector(Eigen::Map<const Vector>(r.data(), r.size())));
        const Vector got = Eigen::Map<const Vector>(x_hat.data(), x_hat.size());
        CHECK((got - oracle).norm() <= 1e-6 * oracle.norm());
    }
}

TEST_CASE("imfc_landweber reconstructs noiseless transmissions with perfect CSI") {
    const FrameConfig frame = small_frame(8, 4);
    std::mt19937_64 rng(29);
    const PathList paths = random_paths(3, frame, rng);
    const Matrix x = random_matrix(8, 4, rng);
    const ComplexGrid r = apply_channel(ComplexGrid(x, Domain::FreqTime), paths, frame);
    EqualizerConfig cfg;
    cfg.max_iters = 500;
    cfg.early_exit_rel = 0.0;
    const Matrix x_hat = imfc_landweber(r, paths, frame, cfg);
    CHECK((x_hat - x).norm() <= 1e-4 * x.norm());
}

TEST_CASE("imfc_landweber residual is non-increasing with the auto step size") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> m_dist(4, 16), n_dist(2, 8), p_dist(1, 4);
    for (int it = 0; it < 100; ++it) {
        const FrameConfig frame = small_frame(m_dist(rng), n_dist(rng));
        const PathList paths = random_paths(p_dist(rng), frame, rng);
        const ComplexGrid r(random_matrix(frame.M, frame.N, rng), Domain::DelayTime);
        double prev = r.m.norm();
        for (int iters = 1; iters <= 4; ++iters) {
            EqualizerConfig cfg;
            cfg.max_iters = iters;
            cfg.early_exit_rel = 0.0;
            const Matrix x_hat = imfc_landweber(r, paths, frame, cfg);
            const Matrix res =
                r.m - apply_channel(ComplexGrid(x_hat, Domain::FreqTime), paths, frame).m;
            // The absolute floor covers iterates that have already converged
            // to machine precision, where norms jitter in the last ulp.
            CHECK(res.norm() <= prev * (1.0 + 1e-9) + 1e-12 * r.m.norm());
            prev = res.norm();
        }
    }
}

TEST_CASE("imfc_landweber aborts on a divergent step size") {
    const FrameConfig frame = small_frame(8, 4);
    std::mt19937_64 rng(37);
    const PathList paths = random_paths(4, frame, rng);
    const ComplexGrid r(random_matrix(8, 4, rng), Domain::DelayTime);
    EqualizerConfig cfg;
    cfg.eta = 50.0;  // way past 2/lambda_max
    cfg.max_iters = 50;
    CHECK_THROWS_AS(imfc_landweber(r, paths, frame, cfg), std::runtime_error);
}

TEST_CASE("estimate_eta against the dense eigenvalue oracle") {
    const FrameConfig frame = small_frame(8, 4);
    // Identity channel: lambda_max = 1.
    CHECK(estimate_eta({{Complex(1.0, 0.0), 0.0, 0.0}}, frame) ==
          doctest::Approx(1.0).epsilon(1e-6));
    // Unit-gain single path at arbitrary (tau, nu): unitary factors only.
    CHECK(estimate_eta({{std::polar(1.0, 1.1), 2.3e-6, 4100.0}}, frame) ==
          doctest::Approx(1.0).epsilon(1e-6));

    std::mt19937_64 rng(41);
    for (int it = 0; it < 5; ++it) {
        const PathList paths = random_paths(2, frame, rng);
        const Matrix op = dense_operator(paths, frame);
        const Eigen::SelfAdjointEigenSolver<Matrix> eig(op.adjoint() * op);
        const double lambda_max = eig.eigenvalues().maxCoeff();
        const double eta = estimate_eta(paths, frame);
        CHECK(1.0 / eta <= lambda_max * (1.0 + 1e-9));
        CHECK(1.0 / eta >= 0.9 * lambda_max);
        double bound = 0.0;
        for (const auto& p : paths) bound += std::abs(p.gain);
        CHECK(lambda_max <= bound * bound * (1.0 + 1e-9));
    }
}

TEST_CASE("equalizers are linear in the observation") {
    const FrameConfig frame = small_frame(8, 4);
    std::mt19937_64 rng(43);
    const PathList paths = random_paths(3, frame, rng);
    const Matrix r1 = random_matrix(8, 4, rng);
    const Matrix r2 = random_matrix(8, 4, rng);
    const Complex a(1.3, -0.4), b(-0.2, 0.9);
    EqualizerConfig cfg;
    cfg.max_iters = 7;
    cfg.early_exit_rel = 0.0;
    auto imfc = [&](const Matrix& r) {
        return imfc_landweber(ComplexGrid(r, Domain::DelayTime), paths, frame, cfg);
    };
    CHECK((imfc(a * r1 + b * r2) - (a * imfc(r1) + b * imfc(r2))).cwiseAbs().maxCoeff() <=
          1e-10);
    auto fm = [&](const Matrix& r) {
        return full_mmse(ComplexGrid(r, Domain::DelayTime), paths, frame, 8.0);
    };
    CHECK((fm(a * r1 + b * r2) - (a * fm(r1) + b * fm(r2))).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("remove_pilot_and_demap") {
    const int M = 16, N = 8;
    const SpPilotConfig sp{2, 3, 2.0, 9.0};
    std::mt19937_64 rng(47);
    const Bits bits = random_bits(M * N * 2, rng);
    const Matrix d = qam_map(bits, 4, M, N);
    const ComplexGrid x = build_sp_grid(d, sp);

    const DetectionResult exact = remove_pilot_and_demap(x.m, sp, 4);
    CHECK((exact.d_hat - d).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(exact.bits == bits);

    // Pilot-only input maps to the zero data grid.
    const ComplexGrid pilot_only = build_sp_grid(Matrix::Zero(M, N), sp);
    const DetectionResult zero = remove_pilot_and_demap(pilot_only.m, sp, 4);
    CHECK(zero.d_hat.cwiseAbs().maxCoeff() <= 1e-12);

    // Perturbations below sigma_d * half min-distance keep every bit.
    Matrix perturbed = x.m;
    const double margin = sp.sigma_d * (1.0 / std::sqrt(2.0)) * 0.99;
    perturbed.array() += Complex(margin / std::sqrt(2.0), margin / std::sqrt(2.0)) * 0.99;
    CHECK(remove_pilot_and_demap(perturbed, sp, 4).bits == bits);

    SpPilotConfig no_data = sp;
    no_data.sigma_d = 0.0;
    CHECK_THROWS_AS(remove_pilot_and_demap(x.m, no_data, 4), std::invalid_argument);
}
