#include "slice_svd.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <stdexcept>

namespace tctv::svd {

namespace {

// Slices are decomposed in parallel at the tensor level; a threaded BLAS
// underneath would oversubscribe and make reductions run-order dependent.
void pin_blas_threads() {
  static std::once_flag once;
  std::call_once(once, [] {
    setenv("OPENBLAS_NUM_THREADS", "1", /*overwrite=*/0);
    setenv("OMP_NUM_THREADS", "1", /*overwrite=*/0);
  });
}

void check_info(lapack_int info, const char* routine) {
  if (info < 0)
    throw std::runtime_error(std::string(routine) + ": illegal argument " +
                             std::to_string(-info));
  if (info > 0) throw std::runtime_error(std::string(routine) + ": did not converge");
}

// gesdd (divide and conquer) is the fast path but can fail to converge on
// rare inputs; gesvd (QR iteration) is the robust fallback.

lapack_int dgesdd_call(char jobz, Eigen::MatrixXd& work, double* s, double* u, double* vh,
                       lapack_int ldvh) {
  const lapack_int m = static_cast<lapack_int>(work.rows());
  const lapack_int n = static_cast<lapack_int>(work.cols());
  return LAPACKE_dgesdd(LAPACK_COL_MAJOR, jobz, m, n, work.data(), m, s, u, m, vh, ldvh);
}

lapack_int zgesdd_call(char jobz, Eigen::MatrixXcd& work, double* s, lapack_complex_double* u,
                       lapack_complex_double* vh, lapack_int ldvh) {
  const lapack_int m = static_cast<lapack_int>(work.rows());
  const lapack_int n = static_cast<lapack_int>(work.cols());
  return LAPACKE_zgesdd(LAPACK_COL_MAJOR, jobz, m, n,
                        reinterpret_cast<lapack_complex_double*>(work.data()), m, s, u, m, vh,
                        ldvh);
}

}  // namespace

RealSvd decompose(const Eigen::MatrixXd& a, bool full) {
  pin_blas_threads();
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  RealSvd out;
  out.s.resize(k);
  out.u.resize(m, full ? m : k);
  out.vh.resize(full ? n : k, n);
  const lapack_int ldvh = static_cast<lapack_int>(out.vh.rows());
  Eigen::MatrixXd work = a;
  lapack_int info =
      dgesdd_call(full ? 'A' : 'S', work, out.s.data(), out.u.data(), out.vh.data(), ldvh);
  if (info > 0) {
    work = a;
    Eigen::VectorXd superb(std::max<lapack_int>(1, k - 1));
    info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, full ? 'A' : 'S', full ? 'A' : 'S', m, n, work.data(),
                          m, out.s.data(), out.u.data(), m, out.vh.data(), ldvh, superb.data());
    check_info(info, "dgesvd");
    return out;
  }
  check_info(info, "dgesdd");
  return out;
}

ComplexSvd decompose(const Eigen::MatrixXcd& a, bool full) {
  pin_blas_threads();
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  ComplexSvd out;
  out.s.resize(k);
  out.u.resize(m, full ? m : k);
  out.vh.resize(full ? n : k, n);
  const lapack_int ldvh = static_cast<lapack_int>(out.vh.rows());
  Eigen::MatrixXcd work = a;
  lapack_int info = zgesdd_call(full ? 'A' : 'S', work, out.s.data(),
                                reinterpret_cast<lapack_complex_double*>(out.u.data()),
                                reinterpret_cast<lapack_complex_double*>(out.vh.data()), ldvh);
  if (info > 0) {
    work = a;
    Eigen::VectorXd superb(std::max<lapack_int>(1, k - 1));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, full ? 'A' : 'S', full ? 'A' : 'S', m, n,
                          reinterpret_cast<lapack_complex_double*>(work.data()), m, out.s.data(),
                          reinterpret_cast<lapack_complex_double*>(out.u.data()), m,
                          reinterpret_cast<lapack_complex_double*>(out.vh.data()), ldvh,
                          superb.data());
    check_info(info, "zgesvd");
    return out;
  }
  check_info(info, "zgesdd");
  return out;
}

Eigen::VectorXd values(const Eigen::MatrixXd& a) {
  pin_blas_threads();
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  Eigen::VectorXd s(k);
  Eigen::MatrixXd work = a;
  lapack_int info = dgesdd_call('N', work, s.data(), nullptr, nullptr, 1);
  if (info > 0) {
    work = a;
    Eigen::VectorXd superb(std::max<lapack_int>(1, k - 1));
    info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'N', 'N', m, n, work.data(), m, s.data(), nullptr, m,
                          nullptr, std::max<lapack_int>(1, n), superb.data());
    check_info(info, "dgesvd");
    return s;
  }
  check_info(info, "dgesdd");
  return s;
}

Eigen::VectorXd values(const Eigen::MatrixXcd& a) {
  pin_blas_threads();
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  Eigen::VectorXd s(k);
  Eigen::MatrixXcd work = a;
  lapack_int info = zgesdd_call('N', work, s.data(), nullptr, nullptr, 1);
  if (info > 0) {
    work = a;
    Eigen::VectorXd superb(std::max<lapack_int>(1, k - 1));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', m, n,
                          reinterpret_cast<lapack_complex_double*>(work.data()), m, s.data(),
                          nullptr, m, nullptr, std::max<lapack_int>(1, n), superb.data());
    check_info(info, "zgesvd");
    return s;
  }
  check_info(info, "zgesdd");
  return s;
}

}  // namespace tctv::svd
