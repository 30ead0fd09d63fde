#pragma once

#include "ddsp/grid.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ddsp {

using Bits = std::vector<std::uint8_t>;

int bits_per_symbol(int order);  // log2(Q), order in {4, 16}

// Gray-coded square QAM with unit average symbol energy. Bit order per symbol
// is (I bits, Q bits); on each axis bit pattern 0 maps to the largest positive
// level (see README for the full table).
Complex qam_map_symbol(std::span<const std::uint8_t> bits, int order);

// Minimum-distance hard decision; exact midpoint ties break toward the
// lexicographically smallest bit pattern.
void qam_demap_symbol(Complex symbol, int order, std::uint8_t* bits_out);

// Fills an rows x cols grid column-major from a bit block of length
// rows*cols*log2(order).
Matrix qam_map(const Bits& bits, int order, Eigen::Index rows, Eigen::Index cols);
Vector qam_map_vector(const Bits& bits, int order, Eigen::Index count);

Bits qam_demap(const Matrix& symbols, int order);
Bits qam_demap(const Vector& symbols, int order);

// Uniform random bit block.
Bits random_bits(std::size_t count, std::mt19937_64& rng);

}  // namespace ddsp
