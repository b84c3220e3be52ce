#include "tctv/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft_backend.hpp"
#include "tctv/tsvd.hpp"

namespace tctv {

SmoothnessSet SmoothnessSet::make(std::vector<int> modes, int tensor_order) {
  if (modes.empty()) throw std::invalid_argument("SmoothnessSet: must be nonempty");
  std::sort(modes.begin(), modes.end());
  if (std::adjacent_find(modes.begin(), modes.end()) != modes.end())
    throw std::invalid_argument("SmoothnessSet: duplicate modes");
  if (modes.front() < 0 || modes.back() >= tensor_order)
    throw std::invalid_argument("SmoothnessSet: mode out of range for order " +
                                std::to_string(tensor_order));
  SmoothnessSet s;
  s.modes_ = std::move(modes);
  return s;
}

namespace {

void check_grad_input(const DenseTensor& t, int mode, const char* op) {
  if (!t.is_real()) throw std::invalid_argument(std::string(op) + ": real tensors only");
  if (mode < 0 || mode >= t.shape().order())
    throw std::invalid_argument(std::string(op) + ": mode out of range");
}

// y(.., i, ..) = x(.., i+1 mod n, ..) - x(.., i, ..) along `mode`; sign
// flipped for the adjoint (difference against the previous index).
DenseTensor circular_difference(const DenseTensor& t, int mode, bool adjoint) {
  const Shape& sh = t.shape();
  const std::int64_t n = sh.dim(mode);
  const std::int64_t inner = sh.stride(mode);
  const std::int64_t outer = sh.size() / (inner * n);
  DenseTensor out = DenseTensor::zeros(sh, ScalarKind::Real);
  const double* src = t.real().data();
  double* dst = out.real().data();
  for (std::int64_t o = 0; o < outer; ++o) {
    const double* sblk = src + o * inner * n;
    double* dblk = dst + o * inner * n;
    for (std::int64_t i = 0; i < n; ++i) {
      const std::int64_t other = adjoint ? (i + n - 1) % n : (i + 1) % n;
      Eigen::Map<const Eigen::VectorXd> here(sblk + i * inner, inner);
      Eigen::Map<const Eigen::VectorXd> neighbor(sblk + other * inner, inner);
      Eigen::Map<Eigen::VectorXd> d(dblk + i * inner, inner);
      d = neighbor - here;
    }
  }
  return out;
}

}  // namespace

DenseTensor grad(const DenseTensor& t, int mode) {
  check_grad_input(t, mode, "grad");
  return circular_difference(t, mode, /*adjoint=*/false);
}

DenseTensor grad_adjoint(const DenseTensor& g, int mode) {
  check_grad_input(g, mode, "grad_adjoint");
  return circular_difference(g, mode, /*adjoint=*/true);
}

double tv_norm(const DenseTensor& t, const SmoothnessSet& gamma, TvVariant variant) {
  double total = 0.0;
  for (int mode : gamma.modes()) {
    const DenseTensor g = grad(t, mode);
    total += variant == TvVariant::Anisotropic ? l1_norm(g) : frobenius_norm(g);
  }
  return total;
}

double tctv_norm(const DenseTensor& t, const SmoothnessSet& gamma, const TransformSpec& spec) {
  double total = 0.0;
  for (int mode : gamma.modes()) total += tnn(grad(t, mode), spec);
  return total / gamma.size();
}

DiffEigenvalues make_diff_eigenvalues(const Shape& shape, const SmoothnessSet& gamma) {
  DiffEigenvalues eig;
  eig.shape = shape;
  eig.modes = gamma.modes();
  if (!eig.modes.empty() && eig.modes.back() >= shape.order())
    throw std::invalid_argument("make_diff_eigenvalues: gamma mode out of range");

  std::vector<std::vector<double>> sq(eig.modes.size());
  for (std::size_t m = 0; m < eig.modes.size(); ++m) {
    const std::int64_t n = shape.dim(eig.modes[m]);
    std::vector<cxd> lam(static_cast<std::size_t>(n));
    sq[m].resize(static_cast<std::size_t>(n));
    for (std::int64_t j = 0; j < n; ++j) {
      const double theta = -2.0 * std::numbers::pi * static_cast<double>(j) /
                           static_cast<double>(n);
      lam[static_cast<std::size_t>(j)] = cxd{std::cos(theta) - 1.0, std::sin(theta)};
      sq[m][static_cast<std::size_t>(j)] = std::norm(lam[static_cast<std::size_t>(j)]);
    }
    eig.lambda.push_back(std::move(lam));
  }

  eig.denom.assign(static_cast<std::size_t>(shape.size()), 1.0);
  std::vector<std::int64_t> idx(static_cast<std::size_t>(shape.order()), 0);
  for (std::int64_t flat = 0; flat < shape.size(); ++flat) {
    double w = 1.0;
    for (std::size_t m = 0; m < eig.modes.size(); ++m)
      w += sq[m][static_cast<std::size_t>(idx[static_cast<std::size_t>(eig.modes[m])])];
    eig.denom[static_cast<std::size_t>(flat)] = w;
    for (int k = 0; k < shape.order(); ++k) {
      if (++idx[static_cast<std::size_t>(k)] < shape.dim(k)) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
  }
  return eig;
}

DenseTensor solve_identity_plus_laplacian(const DenseTensor& rhs, const DiffEigenvalues& eig) {
  if (!rhs.is_real())
    throw std::invalid_argument("solve_identity_plus_laplacian: rhs must be real");
  if (!(rhs.shape() == eig.shape))
    throw std::invalid_argument("solve_identity_plus_laplacian: eigenvalues built for shape " +
                                eig.shape.str() + ", rhs is " + rhs.shape().str());
  DenseTensor x = rhs.to_complex();
  fft::all_modes(x.cplx().data(), x.shape().dims(), -1);
  auto& d = x.cplx();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] /= eig.denom[i];
  fft::all_modes(x.cplx().data(), x.shape().dims(), +1);
  const double scale = 1.0 / static_cast<double>(x.size());
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i].real() * scale;
  return DenseTensor::from_real(rhs.shape(), std::move(out));
}

namespace {

// Squared Frobenius energy of each lateral (mode-1) slice.
std::vector<double> lateral_energy(const DenseTensor& t) {
  const Shape& sh = t.shape();
  const std::int64_t n0 = sh.dim(0);
  const std::int64_t n1 = sh.dim(1);
  const std::int64_t p = sh.trailing_size();
  std::vector<double> e(static_cast<std::size_t>(n1), 0.0);
  for (std::int64_t s = 0; s < p; ++s) {
    if (t.is_real()) {
      const auto m = face_map(t, s);
      for (std::int64_t j = 0; j < n1; ++j) e[static_cast<std::size_t>(j)] += m.col(j).squaredNorm();
    } else {
      const auto m = face_map_cx(t, s);
      for (std::int64_t j = 0; j < n1; ++j) e[static_cast<std::size_t>(j)] += m.col(j).squaredNorm();
    }
  }
  (void)n0;
  return e;
}

// n x n x trailing tensor whose first face slice is I_n and the rest are
// zero: the lateral stack of all mode-1 (or mode-2) basis tensors.
DenseTensor basis_stack(std::int64_t n, const std::vector<std::int64_t>& trailing) {
  std::vector<std::int64_t> dims{n, n};
  dims.insert(dims.end(), trailing.begin(), trailing.end());
  DenseTensor b = DenseTensor::zeros(Shape(dims), ScalarKind::Real);
  face_map(b, 0).setIdentity();
  return b;
}

}  // namespace

IncoherenceReport incoherence_mu(const DenseTensor& t, const SmoothnessSet& gamma,
                                 const TransformSpec& spec) {
  if (!t.is_real()) throw std::invalid_argument("incoherence_mu: real tensors only");
  const std::int64_t rank_t = tsvd_rank(t, spec);
  if (rank_t == 0) throw std::invalid_argument("incoherence_mu: zero tensor");

  const Shape& sh = t.shape();
  const double n0 = static_cast<double>(sh.dim(0));
  const double n1 = static_cast<double>(sh.dim(1));
  const double ell = spec.scale_factor();
  const double r = static_cast<double>(rank_t);
  const auto trailing = sh.trailing_dims();

  IncoherenceReport rep;
  rep.rank = rank_t;
  for (int mode : gamma.modes()) {
    const DenseTensor g = grad(t, mode);
    const TSvdFactors f = tsvd(g, spec, /*skinny=*/true);
    // Keep only the nonzero singular tubes.
    const std::vector<double> sup = singular_tube_sup(g, spec);
    std::int64_t rk = 0;
    for (double s : sup)
      if (s > kRankTol * sup[0]) ++rk;
    if (rk == 0) continue;  // flat along this mode; contributes nothing
    const DenseTensor u = take_front(f.u, 1, rk);
    const DenseTensor v = take_front(f.v, 1, rk);

    const DenseTensor row_energies =
        t_product(t_transpose(u, spec), basis_stack(sh.dim(0), trailing), spec);
    const DenseTensor col_energies =
        t_product(t_transpose(v, spec), basis_stack(sh.dim(1), trailing), spec);
    const std::vector<double> e1 = lateral_energy(row_energies);
    const std::vector<double> e2 = lateral_energy(col_energies);
    const double m1 = *std::max_element(e1.begin(), e1.end()) * n0 * ell / r;
    const double m2 = *std::max_element(e2.begin(), e2.end()) * n1 * ell / r;
    rep.mu_standard = std::max({rep.mu_standard, m1, m2});

    const DenseTensor uv = t_product(u, t_transpose(v, spec), spec);
    const double m3 = max_abs(uv) * max_abs(uv) * n0 * n1 * ell * ell / r;
    rep.mu_joint = std::max(rep.mu_joint, m3);
  }
  rep.mu = std::max(rep.mu_standard, rep.mu_joint);
  const double n_max = std::max(n0, n1);
  const double n_min = std::min(n0, n1);
  const double lg = std::log(n_max * ell);
  rep.sampling_bound = rep.mu * r * lg * lg / (n_min * ell);
  return rep;
}

}  // namespace tctv
