#include <doctest.h>

#include "ddsp/numerics.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace ddsp;

namespace {

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = Complex(dist(rng), dist(rng));
    return m;
}

}  // namespace

TEST_CASE("dft_matrix is unitary") {
    for (int n : {1, 2, 4, 8, 128}) {
        const Matrix f = dft_matrix(n);
        const Matrix eye = Matrix::Identity(n, n);
        CHECK((f * f.adjoint() - eye).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((f.adjoint() * f - eye).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("dft_matrix entries match the definition") {
    const int n = 8;
    const Matrix f = dft_matrix(n);
    for (int m = 0; m < n; ++m)
        for (int q = 0; q < n; ++q) {
            const Complex expect =
                std::polar(1.0 / std::sqrt(double(n)),
                           -2.0 * std::numbers::pi * m * q / n);
            CHECK(std::abs(f(m, q) - expect) <= 1e-12);
        }
}

TEST_CASE("FFT-backed products match explicit dft_matrix products") {
    std::mt19937_64 rng(7);
    for (int rows : {1, 2, 3, 5, 8, 16}) {
        for (int cols : {1, 2, 4, 7}) {
            const Matrix x = random_matrix(rows, cols, rng);
            const Matrix fr = dft_matrix(rows);
            const Matrix fc = dft_matrix(cols);
            CHECK((dft_cols(x) - fr * x).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((idft_cols(x) - fr.adjoint() * x).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((dft_right(x) - x * fc).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((idft_right(x) - x * fc.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
    const Vector v = random_matrix(13, 1, rng);
    const Matrix f13 = dft_matrix(13);
    CHECK((dft_vec(v) - f13 * v).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((idft_vec(v) - f13.adjoint() * v).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("steering vectors have unit-modulus entries and squared norm M") {
    const FrameConfig frame;
    const int M = 64;
    const double tau = 1.7e-6;
    const double nu = 3456.0;
    const SteeringVector b = delay_steering(tau, M, frame.delta_f);
    const SteeringVector c = doppler_slow_steering(nu, frame.N, frame);
    const SteeringVector ct = doppler_fast_steering(nu, M, frame.symbol_duration());
    for (const SteeringVector* s : {&b, &ct}) {
        for (int q = 0; q < M; ++q) CHECK(std::abs(std::abs((*s)(q)) - 1.0) <= 1e-12);
        CHECK(std::abs(s->squaredNorm() - M) <= 1e-10);
    }
    for (int n = 0; n < frame.N; ++n) CHECK(std::abs(std::abs(c(n)) - 1.0) <= 1e-12);
}

TEST_CASE("steering vector entries match their phase definitions") {
    const FrameConfig frame;
    const double tau = 0.9e-6;
    const double nu = -2100.0;
    const SteeringVector b = delay_steering(tau, 16, frame.delta_f);
    for (int q = 0; q < 16; ++q)
        CHECK(std::abs(b(q) - std::polar(1.0, -2.0 * std::numbers::pi * q * tau *
                                                  frame.delta_f)) <= 1e-12);
    const SteeringVector c = doppler_slow_steering(nu, frame.N, frame);
    for (int n = 0; n < frame.N; ++n) {
        const double t_n = frame.t_cp + n * frame.extended_duration();
        CHECK(std::abs(c(n) - std::polar(1.0, 2.0 * std::numbers::pi * nu * t_n)) <= 1e-12);
    }
    const SteeringVector ct = doppler_fast_steering(nu, 16, frame.symbol_duration());
    for (int q = 0; q < 16; ++q)
        CHECK(std::abs(ct(q) - std::polar(1.0, 2.0 * std::numbers::pi * q * nu *
                                                   frame.symbol_duration() / 16)) <= 1e-12);
}

TEST_CASE("sfft inverts isfft and both preserve the Frobenius norm") {
    std::mt19937_64 rng(11);
    const Matrix p = random_matrix(16, 8, rng);
    const ComplexGrid dd(p, Domain::DelayDoppler);
    const ComplexGrid tf = isfft(dd);
    CHECK(tf.domain == Domain::FreqTime);
    CHECK(std::abs(tf.m.norm() - p.norm()) <= 1e-12);
    const ComplexGrid back = sfft(tf);
    CHECK(back.domain == Domain::DelayDoppler);
    CHECK((back.m - p).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(back.m.norm() - tf.m.norm()) <= 1e-12);
}

TEST_CASE("dd_from_delay_time agrees with sfft") {
    std::mt19937_64 rng(13);
    const Matrix y = random_matrix(12, 6, rng);
    const ComplexGrid from_delay_time =
        dd_from_delay_time(ComplexGrid(idft_cols(y), Domain::DelayTime));
    const ComplexGrid from_tf = sfft(ComplexGrid(y, Domain::FreqTime));
    CHECK(from_delay_time.domain == Domain::DelayDoppler);
    CHECK((from_delay_time.m - from_tf.m).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("transforms reject grids tagged with the wrong domain") {
    const ComplexGrid tf = ComplexGrid::zero(4, 2, Domain::FreqTime);
    CHECK_THROWS_AS(isfft(tf), std::invalid_argument);
    const ComplexGrid dd = ComplexGrid::zero(4, 2, Domain::DelayDoppler);
    CHECK_THROWS_AS(sfft(dd), std::invalid_argument);
    CHECK_THROWS_AS(dd_from_delay_time(dd), std::invalid_argument);
}
