#include "levylab/triplet.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace levylab {

CharacteristicTriplet CharacteristicTriplet::make(
    Eigen::MatrixXd gaussian, std::optional<LevyMeasure> jumps,
    Eigen::VectorXd location) {
  const int d = int(location.size());
  if (d < 1) throw std::invalid_argument("triplet: empty location vector");
  if (gaussian.rows() != d || gaussian.cols() != d)
    throw std::invalid_argument("triplet: gaussian block must be dim x dim");
  if (jumps && jumps->dim() != d)
    throw std::invalid_argument("triplet: jump measure dimension mismatch");

  const double scale = gaussian.norm();
  if ((gaussian - gaussian.transpose()).norm() > 1e-12 * (1.0 + scale))
    throw std::invalid_argument("triplet: gaussian block must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gaussian);
  if (es.info() != Eigen::Success)
    throw std::invalid_argument("triplet: gaussian eigendecomposition failed");
  if (es.eigenvalues().minCoeff() < -1e-12 * (1.0 + scale))
    throw std::invalid_argument(
        "triplet: gaussian block must be positive semidefinite");

  CharacteristicTriplet t;
  t.dim = d;
  t.gaussian = std::move(gaussian);
  t.jumps = std::move(jumps);
  t.location = std::move(location);
  return t;
}

TripletSummary classify(const CharacteristicTriplet& triplet) {
  TripletSummary s;
  s.has_gaussian = triplet.has_gaussian_part();
  const bool jump_bv =
      !triplet.jumps || triplet.jumps->bounded_variation_jumps();
  s.bounded_variation = !s.has_gaussian && jump_bv;
  s.finite_activity = !triplet.jumps || triplet.jumps->finite_total_mass();
  s.activity_index =
      triplet.jumps ? triplet.jumps->blumenthal_getoor_index() : 0.0;
  if (s.bounded_variation) {
    Eigen::VectorXd drift = triplet.location;
    if (triplet.jumps) drift -= triplet.jumps->mean_unit_ball();
    s.true_drift = std::move(drift);
  }
  return s;
}

std::complex<double> characteristic_exponent(
    const CharacteristicTriplet& triplet, const Eigen::VectorXd& z) {
  if (int(z.size()) != triplet.dim)
    throw std::invalid_argument(
        "characteristic_exponent: argument dimension mismatch");
  const std::complex<double> i(0.0, 1.0);
  std::complex<double> psi =
      -0.5 * z.dot(triplet.gaussian * z) + i * triplet.location.dot(z);
  if (triplet.jumps) psi += triplet.jumps->exponent_integral(z);
  return psi;
}

std::complex<double> characteristic_exponent(
    const CharacteristicTriplet& triplet, double z) {
  Eigen::VectorXd v(1);
  v(0) = z;
  return characteristic_exponent(triplet, v);
}

}  // namespace levylab
