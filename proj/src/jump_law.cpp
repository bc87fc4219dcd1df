#include "levylab/jump_law.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace levylab {

JumpLaw JumpLaw::point_mass(const Eigen::VectorXd& c) {
  if (c.size() < 1) throw std::invalid_argument("JumpLaw: empty atom");
  JumpLaw law;
  law.kind_ = Kind::PointMass;
  law.dim_ = int(c.size());
  law.atom_ = c;
  return law;
}

JumpLaw JumpLaw::uniform(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("JumpLaw: need a < b");
  JumpLaw law;
  law.kind_ = Kind::Uniform;
  law.dim_ = 1;
  law.lo_ = a;
  law.hi_ = b;
  return law;
}

JumpLaw JumpLaw::discrete(std::vector<Eigen::VectorXd> atoms,
                          std::vector<double> probabilities) {
  if (atoms.empty() || atoms.size() != probabilities.size())
    throw std::invalid_argument("JumpLaw: atoms/probabilities mismatch");
  JumpLaw law;
  law.kind_ = Kind::Discrete;
  law.dim_ = int(atoms.front().size());
  for (const auto& a : atoms)
    if (int(a.size()) != law.dim_)
      throw std::invalid_argument("JumpLaw: atom dimensions differ");
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p > 0.0)) throw std::invalid_argument("JumpLaw: probabilities must be > 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("JumpLaw: probabilities must sum to 1");
  law.atoms_ = std::move(atoms);
  law.probs_ = std::move(probabilities);
  law.cum_.resize(law.probs_.size());
  std::partial_sum(law.probs_.begin(), law.probs_.end(), law.cum_.begin());
  law.cum_.back() = 1.0;
  return law;
}

void JumpLaw::require_scalar(const char* op) const {
  if (dim_ != 1)
    throw std::invalid_argument(std::string("JumpLaw: ") + op +
                                " requires a scalar law");
}

Eigen::VectorXd JumpLaw::sample(RngStream& rng) const {
  switch (kind_) {
    case Kind::PointMass:
      return atom_;
    case Kind::Uniform: {
      Eigen::VectorXd v(1);
      v(0) = lo_ + (hi_ - lo_) * rng.uniform01();
      return v;
    }
    case Kind::Discrete: {
      const double u = rng.uniform01();
      const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
      return atoms_[std::size_t(it - cum_.begin())];
    }
  }
  throw std::logic_error("JumpLaw: bad kind");
}

double JumpLaw::tail_plus(double x) const {
  require_scalar("tail_plus");
  switch (kind_) {
    case Kind::PointMass:
      return atom_(0) > x ? 1.0 : 0.0;
    case Kind::Uniform:
      if (x >= hi_) return 0.0;
      if (x <= lo_) return 1.0;
      return (hi_ - x) / (hi_ - lo_);
    case Kind::Discrete: {
      double p = 0.0;
      for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i](0) > x) p += probs_[i];
      return p;
    }
  }
  throw std::logic_error("JumpLaw: bad kind");
}

double JumpLaw::tail_minus(double x) const {
  require_scalar("tail_minus");
  switch (kind_) {
    case Kind::PointMass:
      return atom_(0) < -x ? 1.0 : 0.0;
    case Kind::Uniform:
      if (-x <= lo_) return 0.0;
      if (-x >= hi_) return 1.0;
      return (-x - lo_) / (hi_ - lo_);
    case Kind::Discrete: {
      double p = 0.0;
      for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i](0) < -x) p += probs_[i];
      return p;
    }
  }
  throw std::logic_error("JumpLaw: bad kind");
}

namespace {

// int_a^b |x|^r dx for b >= a, r > -1, via |x|^{r+1}/(r+1) with sign split.
double abs_power_integral(double a, double b, double r) {
  if (b <= a) return 0.0;
  auto prim = [r](double x) {
    return std::copysign(std::pow(std::abs(x), r + 1.0) / (r + 1.0), x);
  };
  if (a >= 0.0 || b <= 0.0) return std::abs(prim(b) - prim(a));
  return prim(b) - prim(a);  // crosses zero: both halves positive
}

}  // namespace

double JumpLaw::abs_moment_within_unit(double r, Side side) const {
  if (!(r > 0.0))
    throw std::invalid_argument("JumpLaw: moment order must be > 0");
  if (side != Side::Both) require_scalar("one-sided moment");
  const auto in_side = [side](double x) {
    if (side == Side::Plus) return x > 0.0;
    if (side == Side::Minus) return x < 0.0;
    return true;
  };
  switch (kind_) {
    case Kind::PointMass: {
      if (side == Side::Both) {
        const double a = atom_.norm();
        return a <= 1.0 ? std::pow(a, r) : 0.0;
      }
      const double x = atom_(0);
      return in_side(x) && std::abs(x) <= 1.0 ? std::pow(std::abs(x), r) : 0.0;
    }
    case Kind::Uniform: {
      double a = std::max(lo_, -1.0), b = std::min(hi_, 1.0);
      if (side == Side::Plus) a = std::max(a, 0.0);
      if (side == Side::Minus) b = std::min(b, 0.0);
      if (b <= a) return 0.0;
      return abs_power_integral(a, b, r) / (hi_ - lo_);
    }
    case Kind::Discrete: {
      double m = 0.0;
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const double a = atoms_[i].norm();
        if (a > 1.0) continue;
        if (side != Side::Both && !in_side(atoms_[i](0))) continue;
        m += probs_[i] * std::pow(a, r);
      }
      return m;
    }
  }
  throw std::logic_error("JumpLaw: bad kind");
}

Eigen::VectorXd JumpLaw::mean_within_unit_ball() const {
  switch (kind_) {
    case Kind::PointMass:
      return atom_.norm() <= 1.0 ? atom_
                                 : Eigen::VectorXd::Zero(dim_).eval();
    case Kind::Uniform: {
      const double a = std::max(lo_, -1.0), b = std::min(hi_, 1.0);
      Eigen::VectorXd v = Eigen::VectorXd::Zero(1);
      if (b > a) v(0) = 0.5 * (b * b - a * a) / (hi_ - lo_);
      return v;
    }
    case Kind::Discrete: {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(dim_);
      for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].norm() <= 1.0) v += probs_[i] * atoms_[i];
      return v;
    }
  }
  throw std::logic_error("JumpLaw: bad kind");
}

double JumpLaw::second_moment_below(double eps) const {
  switch (kind_) {
    case Kind::PointMass: {
      const double a = atom_.norm();
      return a < eps ? a * a : 0.0;
    }
    case Kind::Uniform: {
      const double a = std::max(lo_, -eps), b = std::min(hi_, eps);
      if (b <= a) return 0.0;
      return (b * b * b - a * a * a) / (3.0 * (hi_ - lo_));
    }
    case Kind::Discrete: {
      double m = 0.0;
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const double a = atoms_[i].squaredNorm();
        if (a < eps * eps) m += probs_[i] * a;
      }
      return m;
    }
  }
  throw std::logic_error("JumpLaw: bad kind");
}

Eigen::VectorXd JumpLaw::mean_below(double eps) const {
  switch (kind_) {
    case Kind::PointMass:
      return atom_.norm() < eps ? atom_ : Eigen::VectorXd::Zero(dim_).eval();
    case Kind::Uniform: {
      const double a = std::max(lo_, -eps), b = std::min(hi_, eps);
      Eigen::VectorXd v = Eigen::VectorXd::Zero(1);
      if (b > a) v(0) = 0.5 * (b * b - a * a) / (hi_ - lo_);
      return v;
    }
    case Kind::Discrete: {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(dim_);
      for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].norm() < eps) v += probs_[i] * atoms_[i];
      return v;
    }
  }
  throw std::logic_error("JumpLaw: bad kind");
}

double JumpLaw::prob_norm_at_least(double eps) const {
  switch (kind_) {
    case Kind::PointMass:
      return atom_.norm() >= eps ? 1.0 : 0.0;
    case Kind::Uniform: {
      // mass of [lo,hi] with |x| >= eps
      const double below =
          std::max(0.0, std::min(hi_, eps) - std::max(lo_, -eps));
      return 1.0 - below / (hi_ - lo_);
    }
    case Kind::Discrete: {
      double p = 0.0;
      for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].norm() >= eps) p += probs_[i];
      return p;
    }
  }
  throw std::logic_error("JumpLaw: bad kind");
}

std::complex<double> JumpLaw::fourier(const Eigen::VectorXd& z) const {
  if (int(z.size()) != dim_)
    throw std::invalid_argument("JumpLaw: fourier argument dimension mismatch");
  const std::complex<double> i(0.0, 1.0);
  switch (kind_) {
    case Kind::PointMass:
      return std::exp(i * z.dot(atom_));
    case Kind::Uniform: {
      const double s = z(0);
      if (s == 0.0) return 1.0;
      return (std::exp(i * s * hi_) - std::exp(i * s * lo_)) /
             (i * s * (hi_ - lo_));
    }
    case Kind::Discrete: {
      std::complex<double> cf = 0.0;
      for (std::size_t k = 0; k < atoms_.size(); ++k)
        cf += probs_[k] * std::exp(i * z.dot(atoms_[k]));
      return cf;
    }
  }
  throw std::logic_error("JumpLaw: bad kind");
}

Eigen::VectorXd JumpLaw::sample_conditional_norm_at_least(
    double eps, RngStream& rng) const {
  if (!(prob_norm_at_least(eps) > 0.0))
    throw std::invalid_argument(
        "JumpLaw: conditional law above eps has no mass");
  for (int attempt = 0; attempt < 1 << 20; ++attempt) {
    Eigen::VectorXd j = sample(rng);
    if (j.norm() >= eps) return j;
  }
  throw std::runtime_error("JumpLaw: conditional rejection did not terminate");
}

}  // namespace levylab
