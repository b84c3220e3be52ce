#include "tctv/tsvd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conj_symmetry.hpp"
#include "slice_svd.hpp"
#include "tctv/parallel.hpp"

namespace tctv {

namespace {

void require_order3(const DenseTensor& t, const char* op) {
  if (t.shape().order() < 3)
    throw std::invalid_argument(std::string(op) + ": tensor order must be >= 3, got " +
                                t.shape().str());
}

[[noreturn]] void rethrow_with_slice(const std::exception& e, std::int64_t slice) {
  throw std::runtime_error(std::string(e.what()) + " (face slice " + std::to_string(slice) + ")");
}

Shape face_shape(std::int64_t n0, std::int64_t n1, const std::vector<std::int64_t>& trailing) {
  std::vector<std::int64_t> dims{n0, n1};
  dims.insert(dims.end(), trailing.begin(), trailing.end());
  return Shape(dims);
}

bool use_conj_shortcut(const DenseTensor& t, const TransformSpec& spec) {
  return t.is_real() && spec.kind() == TransformKind::Dft;
}

Eigen::MatrixXd shrink_recompose(const svd::RealSvd& f, double tau) {
  const Eigen::VectorXd shrunk = (f.s.array() - tau).max(0.0);
  return f.u * shrunk.asDiagonal() * f.vh;
}

Eigen::MatrixXcd shrink_recompose(const svd::ComplexSvd& f, double tau) {
  const Eigen::VectorXd shrunk = (f.s.array() - tau).max(0.0);
  return f.u * shrunk.asDiagonal().toDenseMatrix().cast<cxd>() * f.vh;
}

// Shared driver: forward transform, per-slice map, inverse transform. The
// DFT-on-real route processes one slice per conjugate orbit and mirrors the
// partner, which also guarantees a real result after the inverse transform.
template <typename RealSliceFn, typename ComplexSliceFn>
DenseTensor facewise(const DenseTensor& t, const TransformSpec& spec, RealSliceFn real_fn,
                     ComplexSliceFn cplx_fn, bool allow_shortcut) {
  require_order3(t, "facewise");
  spec.require_match(t.shape());
  const bool was_real = t.is_real();
  DenseTensor x = forward(t, spec);
  if (x.is_real()) {
    parallel_for(x.shape().trailing_size(), [&](std::int64_t s) {
      auto slice = face_map(x, s);
      try {
        slice = real_fn(Eigen::MatrixXd(slice));
      } catch (const std::exception& e) {
        rethrow_with_slice(e, s);
      }
    });
    return inverse(x, spec, was_real);
  }
  if (allow_shortcut && use_conj_shortcut(t, spec)) {
    const auto orbits = conj_orbits(spec.trailing_dims());
    parallel_for(static_cast<std::int64_t>(orbits.size()), [&](std::int64_t i) {
      const auto [rep, partner] = orbits[static_cast<std::size_t>(i)];
      auto slice = face_map_cx(x, rep);
      try {
        if (rep == partner) {
          // Self-conjugate frequency: the slice is real up to roundoff.
          const Eigen::MatrixXd mapped = real_fn(Eigen::MatrixXd(slice.real()));
          slice = mapped.cast<cxd>();
        } else {
          const Eigen::MatrixXcd mapped = cplx_fn(Eigen::MatrixXcd(slice));
          slice = mapped;
          face_map_cx(x, partner) = mapped.conjugate();
        }
      } catch (const std::exception& e) {
        rethrow_with_slice(e, rep);
      }
    });
  } else {
    parallel_for(x.shape().trailing_size(), [&](std::int64_t s) {
      auto slice = face_map_cx(x, s);
      try {
        slice = cplx_fn(Eigen::MatrixXcd(slice));
      } catch (const std::exception& e) {
        rethrow_with_slice(e, s);
      }
    });
  }
  return inverse(x, spec, was_real);
}

}  // namespace

DenseTensor t_product(const DenseTensor& a, const DenseTensor& b, const TransformSpec& spec) {
  require_order3(a, "t_product");
  require_order3(b, "t_product");
  spec.require_match(a.shape());
  if (a.shape().trailing_dims() != b.shape().trailing_dims())
    throw std::invalid_argument("t_product: trailing dims mismatch " + a.shape().str() + " vs " +
                                b.shape().str());
  if (a.shape().dim(1) != b.shape().dim(0))
    throw std::invalid_argument("t_product: inner dimension mismatch " + a.shape().str() + " vs " +
                                b.shape().str());
  const bool both_real = a.is_real() && b.is_real();
  DenseTensor af = forward(a, spec);
  DenseTensor bf = forward(b, spec);
  const Shape out_shape = face_shape(a.shape().dim(0), b.shape().dim(1),
                                     a.shape().trailing_dims());
  if (af.is_real() && bf.is_real()) {
    DenseTensor cf = DenseTensor::zeros(out_shape, ScalarKind::Real);
    parallel_for(out_shape.trailing_size(), [&](std::int64_t s) {
      face_map(cf, s).noalias() = face_map(af, s) * face_map(bf, s);
    });
    return inverse(cf, spec, both_real);
  }
  const DenseTensor afc = af.is_real() ? af.to_complex() : std::move(af);
  const DenseTensor bfc = bf.is_real() ? bf.to_complex() : std::move(bf);
  DenseTensor cf = DenseTensor::zeros(out_shape, ScalarKind::Complex);
  parallel_for(out_shape.trailing_size(), [&](std::int64_t s) {
    face_map_cx(cf, s).noalias() = face_map_cx(afc, s) * face_map_cx(bfc, s);
  });
  return inverse(cf, spec, both_real);
}

DenseTensor t_transpose(const DenseTensor& t, const TransformSpec& spec) {
  require_order3(t, "t_transpose");
  spec.require_match(t.shape());
  const bool was_real = t.is_real();
  DenseTensor x = forward(t, spec);
  const Shape out_shape = face_shape(t.shape().dim(1), t.shape().dim(0),
                                     t.shape().trailing_dims());
  if (x.is_real()) {
    DenseTensor y = DenseTensor::zeros(out_shape, ScalarKind::Real);
    parallel_for(out_shape.trailing_size(),
                 [&](std::int64_t s) { face_map(y, s) = face_map(x, s).transpose(); });
    return inverse(y, spec, was_real);
  }
  DenseTensor y = DenseTensor::zeros(out_shape, ScalarKind::Complex);
  parallel_for(out_shape.trailing_size(),
               [&](std::int64_t s) { face_map_cx(y, s) = face_map_cx(x, s).adjoint(); });
  return inverse(y, spec, was_real);
}

DenseTensor identity_tensor(std::int64_t n, const std::vector<std::int64_t>& trailing_dims,
                            const TransformSpec& spec) {
  if (n < 1) throw std::invalid_argument("identity_tensor: n must be >= 1");
  const Shape shape = face_shape(n, n, trailing_dims);
  spec.require_match(shape);
  const ScalarKind kind =
      spec.complex_domain() ? ScalarKind::Complex : ScalarKind::Real;
  DenseTensor x = DenseTensor::zeros(shape, kind);
  for (std::int64_t s = 0; s < shape.trailing_size(); ++s) {
    if (kind == ScalarKind::Real)
      face_map(x, s).setIdentity();
    else
      face_map_cx(x, s).setIdentity();
  }
  return inverse(x, spec, /*original_was_real=*/true);
}

bool is_f_diagonal(const DenseTensor& t, const TransformSpec& spec, double tol) {
  require_order3(t, "is_f_diagonal");
  spec.require_match(t.shape());
  const DenseTensor x = forward(t, spec);
  const double overall = max_abs(x);
  if (overall == 0.0) return true;
  double off = 0.0;
  for (std::int64_t s = 0; s < x.shape().trailing_size(); ++s) {
    if (x.is_real()) {
      Eigen::MatrixXd m = face_map(x, s);
      m.diagonal().setZero();
      off = std::max(off, m.cwiseAbs().maxCoeff());
    } else {
      Eigen::MatrixXcd m = face_map_cx(x, s);
      m.diagonal().setZero();
      off = std::max(off, m.cwiseAbs().maxCoeff());
    }
  }
  return off <= tol * overall;
}

namespace {

struct FactorBuffers {
  DenseTensor u, s, v;  // transform-domain factor tensors
};

template <typename Scalar>
void write_factor_slices(DenseTensor& u, DenseTensor& s, DenseTensor& v, std::int64_t slice,
                         const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& su,
                         const Eigen::VectorXd& sv,
                         const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& svh) {
  if constexpr (std::is_same_v<Scalar, double>) {
    face_map(u, slice) = su;
    face_map(v, slice) = svh.transpose();
    auto sm = face_map(s, slice);
    sm.setZero();
    sm.diagonal().head(sv.size()) = sv;
  } else {
    face_map_cx(u, slice) = su;
    face_map_cx(v, slice) = svh.adjoint();
    auto sm = face_map_cx(s, slice);
    sm.setZero();
    sm.diagonal().head(sv.size()) = sv.cast<cxd>();
  }
}

}  // namespace

TSvdFactors tsvd(const DenseTensor& t, const TransformSpec& spec, bool skinny) {
  require_order3(t, "tsvd");
  spec.require_match(t.shape());
  const std::int64_t n0 = t.shape().dim(0);
  const std::int64_t n1 = t.shape().dim(1);
  const std::int64_t r = std::min(n0, n1);
  const auto trailing = t.shape().trailing_dims();
  const bool was_real = t.is_real();
  const DenseTensor x = forward(t, spec);
  const ScalarKind k = x.kind();

  FactorBuffers fb{
      DenseTensor::zeros(face_shape(n0, skinny ? r : n0, trailing), k),
      DenseTensor::zeros(face_shape(skinny ? r : n0, skinny ? r : n1, trailing), k),
      DenseTensor::zeros(face_shape(n1, skinny ? r : n1, trailing), k),
  };

  if (k == ScalarKind::Real) {
    parallel_for(x.shape().trailing_size(), [&](std::int64_t s) {
      try {
        const svd::RealSvd f = svd::decompose(Eigen::MatrixXd(face_map(x, s)), !skinny);
        write_factor_slices<double>(fb.u, fb.s, fb.v, s, f.u, f.s, f.vh);
      } catch (const std::exception& e) {
        rethrow_with_slice(e, s);
      }
    });
  } else if (use_conj_shortcut(t, spec)) {
    const auto orbits = conj_orbits(trailing);
    parallel_for(static_cast<std::int64_t>(orbits.size()), [&](std::int64_t i) {
      const auto [rep, partner] = orbits[static_cast<std::size_t>(i)];
      try {
        if (rep == partner) {
          const svd::RealSvd f =
              svd::decompose(Eigen::MatrixXd(face_map_cx(x, rep).real()), !skinny);
          write_factor_slices<cxd>(fb.u, fb.s, fb.v, rep, f.u.cast<cxd>(), f.s,
                                   f.vh.cast<cxd>());
        } else {
          const svd::ComplexSvd f = svd::decompose(Eigen::MatrixXcd(face_map_cx(x, rep)), !skinny);
          write_factor_slices<cxd>(fb.u, fb.s, fb.v, rep, f.u, f.s, f.vh);
          face_map_cx(fb.u, partner) = face_map_cx(fb.u, rep).conjugate();
          face_map_cx(fb.s, partner) = face_map_cx(fb.s, rep);
          face_map_cx(fb.v, partner) = face_map_cx(fb.v, rep).conjugate();
        }
      } catch (const std::exception& e) {
        rethrow_with_slice(e, rep);
      }
    });
  } else {
    parallel_for(x.shape().trailing_size(), [&](std::int64_t s) {
      try {
        const svd::ComplexSvd f = svd::decompose(Eigen::MatrixXcd(face_map_cx(x, s)), !skinny);
        write_factor_slices<cxd>(fb.u, fb.s, fb.v, s, f.u, f.s, f.vh);
      } catch (const std::exception& e) {
        rethrow_with_slice(e, s);
      }
    });
  }

  TSvdFactors out{inverse(fb.u, spec, was_real), inverse(fb.s, spec, was_real),
                  inverse(fb.v, spec, was_real), spec, skinny};
  return out;
}

namespace {

DenseTensor recompose_truncated(const TSvdFactors& f, std::int64_t k) {
  const TransformSpec& spec = f.spec;
  const bool was_real = f.u.is_real() && f.s.is_real() && f.v.is_real();
  const DenseTensor uf = forward(f.u, spec);
  const DenseTensor sf = forward(f.s, spec);
  const DenseTensor vf = forward(f.v, spec);
  const Shape out_shape =
      face_shape(f.u.shape().dim(0), f.v.shape().dim(0), f.u.shape().trailing_dims());
  if (uf.is_real()) {
    DenseTensor x = DenseTensor::zeros(out_shape, ScalarKind::Real);
    parallel_for(out_shape.trailing_size(), [&](std::int64_t s) {
      face_map(x, s).noalias() = face_map(uf, s).leftCols(k) *
                                 face_map(sf, s).topLeftCorner(k, k) *
                                 face_map(vf, s).leftCols(k).transpose();
    });
    return inverse(x, spec, was_real);
  }
  DenseTensor x = DenseTensor::zeros(out_shape, ScalarKind::Complex);
  parallel_for(out_shape.trailing_size(), [&](std::int64_t s) {
    face_map_cx(x, s).noalias() = face_map_cx(uf, s).leftCols(k) *
                                  face_map_cx(sf, s).topLeftCorner(k, k) *
                                  face_map_cx(vf, s).leftCols(k).adjoint();
  });
  return inverse(x, spec, was_real);
}

}  // namespace

DenseTensor reconstruct(const TSvdFactors& factors) {
  return recompose_truncated(factors, factors.tube_count());
}

DenseTensor truncate_rank_k(const TSvdFactors& factors, std::int64_t k) {
  if (k < 1 || k > factors.tube_count())
    throw std::invalid_argument("truncate_rank_k: k out of range [1, " +
                                std::to_string(factors.tube_count()) + "]");
  return recompose_truncated(factors, k);
}

std::vector<double> singular_tube_sup(const DenseTensor& t, const TransformSpec& spec) {
  require_order3(t, "singular_tube_sup");
  spec.require_match(t.shape());
  const std::int64_t k = std::min(t.shape().dim(0), t.shape().dim(1));
  const DenseTensor x = forward(t, spec);
  const std::int64_t p = x.shape().trailing_size();
  std::vector<Eigen::VectorXd> per_slice(static_cast<std::size_t>(p));

  if (x.is_real()) {
    parallel_for(p, [&](std::int64_t s) {
      try {
        per_slice[static_cast<std::size_t>(s)] = svd::values(Eigen::MatrixXd(face_map(x, s)));
      } catch (const std::exception& e) {
        rethrow_with_slice(e, s);
      }
    });
  } else if (use_conj_shortcut(t, spec)) {
    const auto orbits = conj_orbits(spec.trailing_dims());
    parallel_for(static_cast<std::int64_t>(orbits.size()), [&](std::int64_t i) {
      const auto [rep, partner] = orbits[static_cast<std::size_t>(i)];
      try {
        per_slice[static_cast<std::size_t>(rep)] =
            svd::values(Eigen::MatrixXcd(face_map_cx(x, rep)));
        if (partner != rep)
          per_slice[static_cast<std::size_t>(partner)] = per_slice[static_cast<std::size_t>(rep)];
      } catch (const std::exception& e) {
        rethrow_with_slice(e, rep);
      }
    });
  } else {
    parallel_for(p, [&](std::int64_t s) {
      try {
        per_slice[static_cast<std::size_t>(s)] = svd::values(Eigen::MatrixXcd(face_map_cx(x, s)));
      } catch (const std::exception& e) {
        rethrow_with_slice(e, s);
      }
    });
  }

  std::vector<double> sup(static_cast<std::size_t>(k), 0.0);
  for (const auto& sv : per_slice)
    for (std::int64_t i = 0; i < sv.size(); ++i)
      sup[static_cast<std::size_t>(i)] = std::max(sup[static_cast<std::size_t>(i)], sv[i]);
  return sup;
}

std::int64_t tsvd_rank(const DenseTensor& t, const TransformSpec& spec, double tol) {
  if (tol < 0) throw std::invalid_argument("tsvd_rank: tol must be >= 0");
  const std::vector<double> sup = singular_tube_sup(t, spec);
  if (sup.empty() || sup[0] == 0.0) return 0;
  const double cut = tol * sup[0];
  std::int64_t rank = 0;
  for (double s : sup)
    if (s > cut) ++rank;
  return rank;
}

double tnn(const DenseTensor& t, const TransformSpec& spec) {
  require_order3(t, "tnn");
  spec.require_match(t.shape());
  const DenseTensor x = forward(t, spec);
  const std::int64_t p = x.shape().trailing_size();
  std::vector<double> slice_sum(static_cast<std::size_t>(p), 0.0);
  if (x.is_real()) {
    parallel_for(p, [&](std::int64_t s) {
      slice_sum[static_cast<std::size_t>(s)] = svd::values(Eigen::MatrixXd(face_map(x, s))).sum();
    });
  } else if (use_conj_shortcut(t, spec)) {
    const auto orbits = conj_orbits(spec.trailing_dims());
    parallel_for(static_cast<std::int64_t>(orbits.size()), [&](std::int64_t i) {
      const auto [rep, partner] = orbits[static_cast<std::size_t>(i)];
      const double v = svd::values(Eigen::MatrixXcd(face_map_cx(x, rep))).sum();
      slice_sum[static_cast<std::size_t>(rep)] = v;
      if (partner != rep) slice_sum[static_cast<std::size_t>(partner)] = v;
    });
  } else {
    parallel_for(p, [&](std::int64_t s) {
      slice_sum[static_cast<std::size_t>(s)] =
          svd::values(Eigen::MatrixXcd(face_map_cx(x, s))).sum();
    });
  }
  double total = 0.0;
  for (double v : slice_sum) total += v;  // fixed reduction order
  return total / spec.scale_factor();
}

DenseTensor tsvt(const DenseTensor& t, double tau, const TransformSpec& spec) {
  if (!(tau > 0)) throw std::invalid_argument("tsvt: tau must be positive");
  return facewise(
      t, spec,
      [tau](const Eigen::MatrixXd& a) { return shrink_recompose(svd::decompose(a, false), tau); },
      [tau](const Eigen::MatrixXcd& a) { return shrink_recompose(svd::decompose(a, false), tau); },
      /*allow_shortcut=*/true);
}

DenseTensor tsvt_reference(const DenseTensor& t, double tau, const TransformSpec& spec) {
  if (!(tau > 0)) throw std::invalid_argument("tsvt: tau must be positive");
  return facewise(
      t, spec,
      [tau](const Eigen::MatrixXd& a) { return shrink_recompose(svd::decompose(a, false), tau); },
      [tau](const Eigen::MatrixXcd& a) { return shrink_recompose(svd::decompose(a, false), tau); },
      /*allow_shortcut=*/false);
}

}  // namespace tctv
