#include "ddsp/qam.hpp"

#include <cmath>
#include <stdexcept>

namespace ddsp {

namespace {

// Per-axis Gray map. Bit pattern index -> amplitude level (unnormalized).
// Pattern 0 is the largest positive level; adjacent patterns differ in one bit.
constexpr double kLevels2[2] = {1.0, -1.0};              // 0 -> +1, 1 -> -1
constexpr double kLevels4[4] = {3.0, 1.0, -3.0, -1.0};   // 00,01,10,11

double axis_level(int pattern, int axis_bits) {
    return axis_bits == 1 ? kLevels2[pattern] : kLevels4[pattern];
}

// Minimum-distance decision on one axis; candidates are scanned in ascending
// bit-pattern order with a strict comparison so ties land on the
// lexicographically smallest pattern.
int axis_slice(double value, int axis_bits) {
    const int count = 1 << axis_bits;
    int best = 0;
    double best_dist = std::abs(value - axis_level(0, axis_bits));
    for (int pattern = 1; pattern < count; ++pattern) {
        const double dist = std::abs(value - axis_level(pattern, axis_bits));
        if (dist < best_dist) {
            best_dist = dist;
            best = pattern;
        }
    }
    return best;
}

double qam_scale(int order) {
    // Unit average symbol energy: E|s|^2 = 2 * mean(level^2) * scale^2 = 1.
    return order == 4 ? 1.0 / std::sqrt(2.0) : 1.0 / std::sqrt(10.0);
}

void check_order(int order) {
    if (order != 4 && order != 16)
        throw std::invalid_argument("qam: modulation order must be 4 or 16");
}

}  // namespace

int bits_per_symbol(int order) {
    check_order(order);
    return order == 4 ? 2 : 4;
}

Complex qam_map_symbol(std::span<const std::uint8_t> bits, int order) {
    check_order(order);
    const int axis_bits = bits_per_symbol(order) / 2;
    int i_pattern = 0, q_pattern = 0;
    for (int b = 0; b < axis_bits; ++b) {
        i_pattern = (i_pattern << 1) | (bits[b] & 1);
        q_pattern = (q_pattern << 1) | (bits[axis_bits + b] & 1);
    }
    const double s = qam_scale(order);
    return {s * axis_level(i_pattern, axis_bits), s * axis_level(q_pattern, axis_bits)};
}

void qam_demap_symbol(Complex symbol, int order, std::uint8_t* bits_out) {
    check_order(order);
    const int axis_bits = bits_per_symbol(order) / 2;
    const double s = qam_scale(order);
    const int i_pattern = axis_slice(symbol.real() / s, axis_bits);
    const int q_pattern = axis_slice(symbol.imag() / s, axis_bits);
    for (int b = 0; b < axis_bits; ++b) {
        bits_out[b] = static_cast<std::uint8_t>((i_pattern >> (axis_bits - 1 - b)) & 1);
        bits_out[axis_bits + b] = static_cast<std::uint8_t>((q_pattern >> (axis_bits - 1 - b)) & 1);
    }
}

Vector qam_map_vector(const Bits& bits, int order, Eigen::Index count) {
    const int bps = bits_per_symbol(order);
    if (bits.size() != static_cast<std::size_t>(count) * bps)
        throw std::invalid_argument("qam_map: bit count does not match symbol count");
    Vector out(count);
    for (Eigen::Index i = 0; i < count; ++i)
        out(i) = qam_map_symbol(std::span<const std::uint8_t>(bits).subspan(
                                    static_cast<std::size_t>(i) * bps, bps),
                                order);
    return out;
}

Matrix qam_map(const Bits& bits, int order, Eigen::Index rows, Eigen::Index cols) {
    Vector v = qam_map_vector(bits, order, rows * cols);
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Bits qam_demap(const Vector& symbols, int order) {
    const int bps = bits_per_symbol(order);
    Bits out(static_cast<std::size_t>(symbols.size()) * bps);
    for (Eigen::Index i = 0; i < symbols.size(); ++i)
        qam_demap_symbol(symbols(i), order, out.data() + static_cast<std::size_t>(i) * bps);
    return out;
}

Bits qam_demap(const Matrix& symbols, int order) {
    return qam_demap(Vector(Eigen::Map<const Vector>(symbols.data(), symbols.size())), order);
}

Bits random_bits(std::size_t count, std::mt19937_64& rng) {
    Bits out(count);
    std::uint64_t word = 0;
    int left = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (left == 0) {
            word = rng();
            left = 64;
        }
        out[i] = static_cast<std::uint8_t>(word & 1);
        word >>= 1;
        --left;
    }
    return out;
}

}  // namespace ddsp
