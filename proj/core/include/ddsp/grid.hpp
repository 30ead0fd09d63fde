#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace ddsp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SteeringVector = Eigen::VectorXcd;

// The domain an M x N frame matrix lives in. Transitions happen only through
// the transform operations in numerics.hpp.
enum class Domain { FreqTime, DelayTime, DelayDoppler };

inline const char* domain_name(Domain d) {
    switch (d) {
        case Domain::FreqTime: return "freq-time";
        case Domain::DelayTime: return "delay-time";
        case Domain::DelayDoppler: return "delay-Doppler";
    }
    return "?";
}

// Dense complex M x N matrix tagged with its domain.
struct ComplexGrid {
    Matrix m;
    Domain domain = Domain::FreqTime;

    ComplexGrid() = default;
    ComplexGrid(Matrix mat, Domain d) : m(std::move(mat)), domain(d) {}

    Eigen::Index rows() const { return m.rows(); }
    Eigen::Index cols() const { return m.cols(); }

    static ComplexGrid zero(Eigen::Index rows, Eigen::Index cols, Domain d) {
        return ComplexGrid(Matrix::Zero(rows, cols), d);
    }
};

inline void require_domain(const ComplexGrid& g, Domain d, const char* op) {
    if (g.domain != d)
        throw std::invalid_argument(std::string(op) + ": expected " + domain_name(d) +
                                    " grid, got " + domain_name(g.domain));
}

}  // namespace ddsp
