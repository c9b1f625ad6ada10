#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sovlab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RowVec = Eigen::RowVectorXcd;

// Error kinds surfaced by the library. The CLI maps them onto exit codes.
struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct structure_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct parameter_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct evaluation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct configuration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct basis_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct inconsistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Max-abs entry; all residuals in the library are measured with this.
inline double max_abs(const Mat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline std::string to_string(cplx z) {
    return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
}

}  // namespace sovlab
