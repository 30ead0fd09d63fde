#pragma once

#include <stdexcept>

namespace ddsp {

// OFDM numerology. M subcarriers spaced delta_f apart, N symbols per frame.
// Timing convention: T = 1/delta_f, T' = T + T_cp, and the n-th symbol's
// phase reference instant is t_n = T_cp + n*T'.
struct FrameConfig {
    int M = 128;               // subcarriers
    int N = 32;                // OFDM symbols per frame
    double delta_f = 30e3;     // subcarrier spacing [Hz]
    double t_cp = 5e-6;        // cyclic prefix duration [s]
    double f_c = 5.9e9;        // carrier frequency [Hz]

    double symbol_duration() const { return 1.0 / delta_f; }            // T
    double extended_duration() const { return symbol_duration() + t_cp; } // T'
    double sample_interval() const { return symbol_duration() / M; }
    double symbol_start(int n) const { return t_cp + n * extended_duration(); }
    int resource_elements() const { return M * N; }

    void validate() const {
        if (M < 1 || N < 1)
            throw std::invalid_argument("FrameConfig: M and N must be >= 1");
        if (delta_f <= 0.0)
            throw std::invalid_argument("FrameConfig: delta_f must be positive");
        if (t_cp < 0.0)
            throw std::invalid_argument("FrameConfig: t_cp must be non-negative");
        if (f_c <= 0.0)
            throw std::invalid_argument("FrameConfig: f_c must be positive");
    }
};

}  // namespace ddsp
