#pragma once

#include "ddsp/frame.hpp"
#include "ddsp/grid.hpp"

namespace ddsp {

// Unitary DFT matrix: entry (m,q) = exp(-j*2*pi*m*q/size)/sqrt(size).
Matrix dft_matrix(int size);

// Delay steering vector b(tau): entry q = exp(-j*2*pi*q*tau*delta_f).
SteeringVector delay_steering(double tau, int M, double delta_f);

// Slow-time Doppler steering c(nu): entry n = exp(j*2*pi*nu*t_n),
// t_n = T_cp + n*T'.
SteeringVector doppler_slow_steering(double nu, int N, const FrameConfig& frame);

// Fast-time Doppler steering c~(nu): entry q = exp(j*2*pi*q*nu*T/M).
SteeringVector doppler_fast_steering(double nu, int M, double T);

// Unitary column/row DFT products. All are computed with FFTs but match the
// dft_matrix definition exactly; sizes need not be powers of two.
Matrix dft_cols(const Matrix& x);        // F_R * X        (R = rows)
Matrix idft_cols(const Matrix& x);       // F_R^H * X
Matrix dft_right(const Matrix& x);       // X * F_C        (C = cols)
Matrix idft_right(const Matrix& x);      // X * F_C^H
Vector dft_vec(const Vector& x);         // F * x
Vector idft_vec(const Vector& x);        // F^H * x

// ISFFT: delay-Doppler -> frequency-time, F_M * P * F_N^H.
ComplexGrid isfft(const ComplexGrid& pilot_grid);

// SFFT: frequency-time -> delay-Doppler, F_M^H * Y * F_N.
ComplexGrid sfft(const ComplexGrid& grid);

// Delay-time -> delay-Doppler, R * F_N.
ComplexGrid dd_from_delay_time(const ComplexGrid& r);

}  // namespace ddsp
