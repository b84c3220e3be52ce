#include "tctv/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tctv {

namespace {

void check_pair(const DenseTensor& x, const DenseTensor& ref, const char* op) {
  if (!(x.shape() == ref.shape()))
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
  if (!x.is_real() || !ref.is_real())
    throw std::invalid_argument(std::string(op) + ": real tensors only");
}

Eigen::MatrixXd gaussian_window(int w, double sigma) {
  Eigen::MatrixXd g(w, w);
  const double c = (w - 1) / 2.0;
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j)
      g(i, j) = std::exp(-((i - c) * (i - c) + (j - c) * (j - c)) / (2.0 * sigma * sigma));
  return g / g.sum();
}

double ssim_slice(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const Eigen::MatrixXd& win) {
  constexpr double kC1 = 0.01 * 0.01;  // (K1 * L)^2, L = 1
  constexpr double kC2 = 0.03 * 0.03;
  const int w = static_cast<int>(win.rows());
  const int rows = static_cast<int>(x.rows()) - w + 1;
  const int cols = static_cast<int>(x.cols()) - w + 1;
  double total = 0.0;
  for (int b = 0; b < cols; ++b) {
    for (int a = 0; a < rows; ++a) {
      const auto px = x.block(a, b, w, w).array();
      const auto py = y.block(a, b, w, w).array();
      const auto ww = win.array();
      const double mx = (ww * px).sum();
      const double my = (ww * py).sum();
      const double vx = (ww * px * px).sum() - mx * mx;
      const double vy = (ww * py * py).sum() - my * my;
      const double cov = (ww * px * py).sum() - mx * my;
      total += ((2.0 * mx * my + kC1) * (2.0 * cov + kC2)) /
               ((mx * mx + my * my + kC1) * (vx + vy + kC2));
    }
  }
  return total / (static_cast<double>(rows) * static_cast<double>(cols));
}

}  // namespace

double rel_err(const DenseTensor& x, const DenseTensor& ref) {
  if (!(x.shape() == ref.shape())) throw std::invalid_argument("rel_err: shape mismatch");
  if (x.kind() != ref.kind()) throw std::invalid_argument("rel_err: kind mismatch");
  const double denom = frobenius_norm(ref);
  if (denom == 0.0) throw std::invalid_argument("rel_err: zero reference tensor");
  return frobenius_norm(sub(x, ref)) / denom;
}

double psnr(const DenseTensor& x, const DenseTensor& ref, double peak) {
  check_pair(x, ref, "psnr");
  if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be positive");
  const double err = frobenius_norm(sub(x, ref));
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = err * err / static_cast<double>(x.size());
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim_mean(const DenseTensor& x, const DenseTensor& ref) {
  check_pair(x, ref, "ssim_mean");
  const Shape& sh = x.shape();
  if (sh.order() < 2) throw std::invalid_argument("ssim_mean: order must be >= 2");
  int w = static_cast<int>(std::min<std::int64_t>({11, sh.dim(0), sh.dim(1)}));
  if (w % 2 == 0) --w;
  const Eigen::MatrixXd win = gaussian_window(w, 1.5);
  const std::int64_t p = sh.trailing_size();
  double total = 0.0;
  for (std::int64_t s = 0; s < p; ++s)
    total += ssim_slice(face_map(x, s), face_map(ref, s), win);
  return total / static_cast<double>(p);
}

double ergas(const DenseTensor& x, const DenseTensor& ref) {
  check_pair(x, ref, "ergas");
  const Shape& sh = x.shape();
  const std::int64_t p = sh.trailing_size();
  const double band_size = static_cast<double>(sh.face_size());
  double acc = 0.0;
  for (std::int64_t s = 0; s < p; ++s) {
    const double rmse = std::sqrt((face_map(x, s) - face_map(ref, s)).squaredNorm() / band_size);
    const double mean = face_map(ref, s).mean();
    acc += (rmse / mean) * (rmse / mean);
  }
  return 100.0 * std::sqrt(acc / static_cast<double>(p));
}

std::int64_t estimate_rank(const DenseTensor& x, const TransformSpec& spec, double tol) {
  return tsvd_rank(x, spec, tol);
}

std::int64_t estimate_sparsity(const DenseTensor& e, double tol) {
  if (tol < 0) throw std::invalid_argument("estimate_sparsity: tol must be >= 0");
  if (!e.is_real()) throw std::invalid_argument("estimate_sparsity: real tensors only");
  std::int64_t count = 0;
  for (double v : e.real()) count += std::abs(v) > tol;
  return count;
}

MetricReport compute_metrics(const DenseTensor& x, const DenseTensor& ref,
                             const TransformSpec& spec, double peak) {
  MetricReport rep;
  rep.rel_err = rel_err(x, ref);
  rep.psnr = psnr(x, ref, peak);
  rep.mssim = ssim_mean(x, ref);
  rep.ergas = ergas(x, ref);
  rep.estimated_rank = estimate_rank(x, spec);
  rep.estimated_sparsity = estimate_sparsity(sub(x, ref));
  return rep;
}

}  // namespace tctv
