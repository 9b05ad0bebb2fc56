#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace wasn {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;

/// Condition-number ceiling shared by every guarded solve and inversion.
inline constexpr double kConditionLimit = 1e12;

/// 2-norm condition number via singular values. Returns +inf for singular
/// input (including the empty and all-zero cases).
double condition_number(const CMatrix& a);

/// Inverse of a small square matrix, refusing when cond(a) > kConditionLimit.
/// `what` names the matrix in the error message.
CMatrix guarded_inverse(const CMatrix& a, const std::string& what);

/// Solves a X = b for Hermitian positive-definite a (Cholesky). Throws
/// ErrorKind::IllConditioned with the condition estimate when the
/// factorization fails or rcond is below 1/kConditionLimit.
CMatrix solve_hpd(const CMatrix& a, const CMatrix& b);

/// Max |a - a^H| relative to max |a|.
double hermitian_defect(const CMatrix& a);

/// Copies the lower triangle onto the upper one so the result is exactly
/// Hermitian (imaginary parts on the diagonal are dropped).
CMatrix hermitian_part_exact(const CMatrix& a);

}  // namespace wasn
