#include <doctest.h>

#include <cmath>

#include <tctv/transform.hpp>

#include "test_helpers.hpp"

using namespace tctv;
using tctv::testing::random_tensor;
using tctv::testing::rel_diff;

namespace {

TransformSpec spec_for(TransformKind kind, const Shape& sh, std::uint64_t seed = 0) {
  return TransformSpec::make(kind, sh.trailing_dims(), seed);
}

}  // namespace

TEST_CASE("transform: scale factors follow the per-kind rule") {
  // 60x60x60x60 under the DFT: ell = 60 * 60.
  const auto dft = TransformSpec::make(TransformKind::Dft, {60, 60});
  CHECK(dft.scale_factor() == doctest::Approx(3600.0));
  const auto dct = TransformSpec::make(TransformKind::Dct, {7, 5});
  CHECK(dct.scale_factor() == 1.0);
  const auto rot = TransformSpec::make(TransformKind::RandomOrthogonal, {6, 4}, 9);
  CHECK(rot.scale_factor() == 1.0);
}

TEST_CASE("transform: inverse ∘ forward is the identity on 50 random tensors") {
  const Shape sh({4, 3, 5, 2});
  for (const TransformKind kind :
       {TransformKind::Dft, TransformKind::Dct, TransformKind::RandomOrthogonal}) {
    const auto spec = spec_for(kind, sh, 77);
    for (int trial = 0; trial < 50; ++trial) {
      const auto t = random_tensor(sh, 1000 + static_cast<std::uint64_t>(trial));
      CHECK(rel_diff(inverse(forward(t, spec), spec), t) < 1e-10);
    }
  }
}

TEST_CASE("transform: zeros and ones behave trivially") {
  const Shape sh({3, 3, 4});
  const auto spec = spec_for(TransformKind::Dct, sh);
  CHECK(frobenius_norm(forward(DenseTensor::zeros(sh), spec)) == 0.0);
  const auto ones = DenseTensor::from_real(sh, std::vector<double>(36, 1.0));
  CHECK(rel_diff(inverse(forward(ones, spec), spec), ones) < 1e-12);
}

TEST_CASE("transform: 2-point DFT along mode 2 yields sum and difference slices") {
  const auto t = random_tensor(Shape({2, 2, 2}), 5);
  const auto spec = spec_for(TransformKind::Dft, t.shape());
  const auto f = forward(t, spec);
  const Eigen::MatrixXd a = face_map(t, 0);
  const Eigen::MatrixXd b = face_map(t, 1);
  CHECK((face_map_cx(f, 0).real() - (a + b)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((face_map_cx(f, 1).real() - (a - b)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(face_map_cx(f, 0).imag().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transform: FFT path matches the dense DFT-matrix route on small dims") {
  for (const Shape& sh : {Shape({3, 2, 4}), Shape({2, 3, 5, 3}), Shape({4, 4, 8})}) {
    const auto spec = spec_for(TransformKind::Dft, sh);
    const auto t = random_tensor(sh, 31);
    const auto fast = forward(t, spec);
    const auto dense = forward_dense_reference(t, spec);
    CHECK(rel_diff(fast, dense) < 1e-10);
  }
}

TEST_CASE("transform: energy identity ||L(t)||^2 = ell * ||t||^2") {
  const Shape sh({3, 4, 5, 2});
  for (const TransformKind kind :
       {TransformKind::Dft, TransformKind::Dct, TransformKind::RandomOrthogonal}) {
    const auto spec = spec_for(kind, sh, 3);
    for (int trial = 0; trial < 20; ++trial) {
      const auto t = random_tensor(sh, 400 + static_cast<std::uint64_t>(trial));
      const double lhs = spec.scale_factor() * std::pow(frobenius_norm(t), 2);
      const double rhs = std::pow(frobenius_norm(forward(t, spec)), 2);
      CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, lhs));
    }
  }
}

TEST_CASE("transform: seeded random orthogonal matrices are reproducible and orthogonal") {
  const auto a = TransformSpec::make(TransformKind::RandomOrthogonal, {5, 7}, 1234);
  const auto b = TransformSpec::make(TransformKind::RandomOrthogonal, {5, 7}, 1234);
  const auto c = TransformSpec::make(TransformKind::RandomOrthogonal, {5, 7}, 1235);
  for (int m = 0; m < 2; ++m) {
    CHECK(a.mode_matrix(m) == b.mode_matrix(m));
    CHECK(a.mode_matrix(m) != c.mode_matrix(m));
    const Eigen::MatrixXd gram = a.mode_matrix(m).transpose() * a.mode_matrix(m);
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("transform: shape binding is validated") {
  const auto spec = TransformSpec::make(TransformKind::Dct, {4});
  CHECK_THROWS_AS(forward(random_tensor(Shape({3, 3, 5}), 1), spec), std::invalid_argument);
  CHECK_THROWS_AS(TransformSpec::make(TransformKind::Dct, {}), std::invalid_argument);
  const auto complex_domain = forward(random_tensor(Shape({2, 2, 4}), 2),
                                      TransformSpec::make(TransformKind::Dft, {4}));
  CHECK(!complex_domain.is_real());
}
