#pragma once

#include <span>
#include <vector>

#include "cdqaoa/fermion_sim.hpp"
#include "cdqaoa/model.hpp"

namespace cdqaoa {

/// Cost function E(angles) = <H_T> for one (instance, variant) pair, with its
/// exact gradient.
///
/// The pure state Gamma = W W^dag is carried as the 2N x N matrix W of filled
/// quasiparticle modes, and the fixed generators are diagonalised once, so a
/// unitary costs two real 2N x 2N x 2N products. The gradient is one forward sweep
/// plus one reverse sweep that un-applies each unitary to both W and the
/// back-propagated observable Y = B W; U_2CD uses the Daleckii-Krein formula
/// for the derivative of a matrix exponential.
///
/// Angle layout follows AngleSchedule for the evaluator's variant; constrained
/// variants take two angles per step and are differentiated through the
/// constraint relations. All methods are const and thread safe.
class CircuitEvaluator {
 public:
  CircuitEvaluator(const ChainSpec& spec, Variant variant);

  Variant variant() const noexcept { return variant_; }
  int width() const noexcept { return params_per_step(variant_); }
  const ChainSpec& spec() const noexcept { return spec_; }

  double energy(std::span<const double> angles) const;
  /// Returns the energy; grad must have angles.size() entries.
  double energy_and_gradient(std::span<const double> angles, std::span<double> grad) const;

  double energy(const AngleSchedule& schedule) const { return energy(schedule.values()); }

 private:
  // exp(i theta M) for the three shapes the chain generators take. Complex
  // matrices are carried as [Re | Im] column blocks, so every product is real.
  //  Diagonal:  M = diag(values).
  //  Symmetric: M = V diag(values) V^T with V real orthogonal.
  //  Rotation:  M = i S with S = Q T Q^T real antisymmetric; T holds 2x2 blocks
  //             [[0, w], [-w, 0]] on index pairs (first[k], first[k] + 1).
  struct Propagator {
    enum class Kind { Diagonal, Symmetric, Rotation };
    Kind kind = Kind::Diagonal;
    Eigen::MatrixXd vectors;
    Eigen::VectorXd values;
    std::vector<Eigen::Index> first;
  };

  static Propagator make_propagator(const CMatrix& generator);
  static void apply(const Propagator& p, double theta, Eigen::MatrixXd& z);
  static double overlap(const Propagator& p, const Eigen::MatrixXd& z, Eigen::Index n);
  std::vector<double> free_form(std::span<const double> angles) const;
  double free_energy(std::span<const double> angles, std::span<double> grad) const;

  ChainSpec spec_;
  Variant variant_;
  Variant free_variant_;
  Propagator mixer_;
  Propagator target_;
  Propagator cd_;
  Eigen::MatrixXd target_matrix_;
  Eigen::MatrixXd xxt_;
  Eigen::MatrixXd txt_;
  // h + Delta of the two nested generators when both have the block form
  // [[h, Delta], [-Delta, -h]]; their combinations are then solved by an N x N SVD.
  bool chiral_ = false;
  Eigen::MatrixXd xxt_block_;
  Eigen::MatrixXd txt_block_;
};

}  // namespace cdqaoa
