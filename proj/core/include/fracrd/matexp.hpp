#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace fracrd {

/// exp(M t) by scaling-and-squaring with a degree-13 Pade rational core.
/// Works for real and complex square matrices; relative accuracy is near
/// machine precision for moderate ||M t||. Throws std::overflow_error when
/// the result is not finite.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix_exponential(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m, double t = 1.0) {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index dim = m.rows();
    if (dim != m.cols()) throw std::invalid_argument("matrix_exponential: matrix not square");
    if (!m.allFinite() || !std::isfinite(t)) {
        throw std::invalid_argument("matrix_exponential: non-finite input");
    }

    Matrix a = m * Scalar(t);
    static const double pade13[] = {64764752532480000.0,
                                    32382376266240000.0,
                                    7771770303897600.0,
                                    1187353796428800.0,
                                    129060195264000.0,
                                    10559470521600.0,
                                    670442572800.0,
                                    33522128640.0,
                                    1323241920.0,
                                    40840800.0,
                                    960960.0,
                                    16380.0,
                                    182.0,
                                    1.0};
    const double theta13 = 5.371920351148152;

    const double norm = a.cwiseAbs().colwise().sum().maxCoeff(); // 1-norm
    int squarings = 0;
    if (norm > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
        a /= Scalar(std::pow(2.0, squarings));
    }

    const Matrix ident = Matrix::Identity(dim, dim);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a2 * a4;
    const Matrix u =
        a * (a6 * (Scalar(pade13[13]) * a6 + Scalar(pade13[11]) * a4 + Scalar(pade13[9]) * a2) +
             Scalar(pade13[7]) * a6 + Scalar(pade13[5]) * a4 + Scalar(pade13[3]) * a2 +
             Scalar(pade13[1]) * ident);
    const Matrix v =
        a6 * (Scalar(pade13[12]) * a6 + Scalar(pade13[10]) * a4 + Scalar(pade13[8]) * a2) +
        Scalar(pade13[6]) * a6 + Scalar(pade13[4]) * a4 + Scalar(pade13[2]) * a2 +
        Scalar(pade13[0]) * ident;

    Matrix result = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < squarings; ++k) result = result * result;
    if (!result.allFinite()) {
        throw std::overflow_error("matrix_exponential: overflow in result");
    }
    return result;
}

} // namespace fracrd
