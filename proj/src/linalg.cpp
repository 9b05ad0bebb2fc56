#include "wasn/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "wasn/error.hpp"

namespace wasn {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::DegenerateGeometry: return "degenerate geometry";
    case ErrorKind::GeometryConstraints: return "cannot satisfy geometry constraints";
    case ErrorKind::IllConditioned: return "ill-conditioned SCM";
    case ErrorKind::Singular: return "singular matrix";
    case ErrorKind::Disconnected: return "disconnected graph";
    case ErrorKind::ConnectivityUndefined: return "connectivity metric undefined";
    case ErrorKind::ConnectivityUnreachable: return "connectivity target unreachable";
    case ErrorKind::ShapeMismatch: return "shape mismatch";
    case ErrorKind::NonPositive: return "non-positive value";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Io: return "i/o error";
  }
  return "unknown";
}

double condition_number(const CMatrix& a) {
  if (a.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

CMatrix guarded_inverse(const CMatrix& a, const std::string& what) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::ShapeMismatch, what + ": cannot invert a non-square matrix");
  }
  const double cond = condition_number(a);
  if (!(cond <= kConditionLimit)) {
    std::ostringstream msg;
    msg << what << " singular (condition " << cond << ")";
    throw Error(ErrorKind::Singular, msg.str());
  }
  if (a.rows() == 1) return CMatrix::Constant(1, 1, cplx(1.0) / a(0, 0));
  return a.partialPivLu().inverse();
}

CMatrix solve_hpd(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "solve_hpd: incompatible shapes");
  }
  Eigen::LLT<CMatrix> llt(a);
  const double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
  if (!(rcond * kConditionLimit >= 1.0)) {
    std::ostringstream msg;
    msg << "ill-conditioned SCM (condition estimate "
        << (rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity()) << ")";
    throw Error(ErrorKind::IllConditioned, msg.str());
  }
  return llt.solve(b);
}

double hermitian_defect(const CMatrix& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

CMatrix hermitian_part_exact(const CMatrix& a) {
  CMatrix out = a;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    out(c, c) = cplx(a(c, c).real(), 0.0);
    for (Eigen::Index r = c + 1; r < a.rows(); ++r) out(c, r) = std::conj(a(r, c));
  }
  return out;
}

}  // namespace wasn
