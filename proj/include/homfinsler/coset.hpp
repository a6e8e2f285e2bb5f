#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "homfinsler/errors.hpp"
#include "homfinsler/liealg.hpp"

namespace homfinsler {

/// One generator of a declared subspace: a torus vector (ambient
/// coordinates), a root plane g_{+-a}, or an explicit algebra vector.
struct SpanItem {
  enum class Kind { Torus, Plane, Vector };
  Kind kind = Kind::Torus;
  ExactVector coords;    // torus direction or root (Torus, Plane)
  AlgebraVector vector;  // Vector
  double angle = 0.0;    // Plane: selects cos(a) u + sin(a) v when one vector is needed

  static SpanItem torus(ExactVector v) { return {Kind::Torus, std::move(v), {}, 0.0}; }
  static SpanItem plane(ExactVector root, double angle = 0.0) { return {Kind::Plane, std::move(root), {}, angle}; }
  static SpanItem explicit_vector(AlgebraVector x) { return {Kind::Vector, {}, std::move(x), 0.0}; }

  std::string str() const;
};

/// All vectors spanned by the item (two for a plane).
Eigen::MatrixXd span_vectors(const CompactLieAlgebra& g, const SpanItem& item);
/// A single representative vector (unit length for planes).
AlgebraVector item_vector(const CompactLieAlgebra& g, const SpanItem& item);

struct SubalgebraSpec {
  std::vector<ExactVector> torus_part;
  std::vector<ExactVector> root_part;
  std::vector<AlgebraVector> extra_generators;
};

class FixtureIntegrityError : public InputError {
 public:
  using InputError::InputError;
};

struct Summand {
  int offset = 0;
  int dim = 0;
};

/// Orthogonal reductive decomposition g = h + m with m = m_1 + ... + m_s.
/// Bases are <,>-orthonormal; m_basis columns are grouped by summand, so a
/// vector in m is described by its m-coordinates (length dim m).
struct ReductiveSplit {
  std::shared_ptr<const CompactLieAlgebra> algebra;
  Eigen::MatrixXd h_basis;
  Eigen::MatrixXd m_basis;
  std::vector<Summand> summands;

  int dim_h() const { return static_cast<int>(h_basis.cols()); }
  int dim_m() const { return static_cast<int>(m_basis.cols()); }
  std::vector<int> summand_dims() const;

  /// m-coordinates of x (orthogonal projection to m).
  Eigen::VectorXd m_coords(const AlgebraVector& x) const;
  AlgebraVector from_m(const Eigen::VectorXd& coords) const { return m_basis * coords; }
  AlgebraVector h_component(const AlgebraVector& x) const;
  /// Orthonormal basis of m_i (columns, algebra coordinates).
  Eigen::MatrixXd summand_basis(std::size_t i) const;
  /// Which summand contains x (m-coordinates), or -1 if it spreads over several.
  int summand_of(const Eigen::VectorXd& coords, double tol = 1e-9) const;
};

/// Orthogonal projection onto m, as an algebra vector. Idempotent.
AlgebraVector project_m(const ReductiveSplit& split, const AlgebraVector& x);

struct SplitOptions {
  std::uint64_t seed = 0x5eed5eedULL;
  double ambiguity_gap = 1e-8;
};

/// Computes m = h^perp and its isotypic ad(h)-summands: the commutant of
/// ad(h)|_m is found as a null space, m is cut by the eigenspaces of a random
/// symmetric commutant element, and blocks joined by nonzero intertwiners
/// are merged. Canonical order: ascending dim, then root content, with a
/// unique one-dimensional summand centralizing h moved last.
ReductiveSplit reductive_split(std::shared_ptr<const CompactLieAlgebra> g, const SubalgebraSpec& h,
                               const SplitOptions& options = {});

/// Reorders (and re-bases) the summands to match declared subspaces. Throws
/// FixtureIntegrityError if any declared summand is not a computed summand.
ReductiveSplit align_split(const ReductiveSplit& split, const std::vector<std::vector<SpanItem>>& declared);

/// max |[h, m_i] - proj_{m_i}[h, m_i]| over basis vectors.
double invariance_residual(const ReductiveSplit& split);
/// Largest off-diagonal block of the commutant of ad(h)|_m across summands.
double commutant_offdiagonal(const ReductiveSplit& split);

/// dim(t ∩ m). Throws InputError unless t ∩ h is a Cartan subalgebra of h.
int rank_gap(const ReductiveSplit& split);

struct CentralLineReport {
  double centralizer_residual = 0;  // |[m_s, h]|
  std::vector<double> residuals;    // per summand i: |[m_s, m_i] - proj_{m_i}|
  double max_residual() const;
};

/// Requires the last summand to be one-dimensional and to centralize h.
CentralLineReport check_central_line(const ReductiveSplit& split);
/// Same check for an explicit unit direction x in m (residuals use m_i ⊖ x).
CentralLineReport check_central_line(const ReductiveSplit& split, const AlgebraVector& direction);

struct SummandContent {
  std::vector<std::size_t> planes;  // positive root indices whose planes lie in the summand
  Eigen::MatrixXd torus;            // ambient vectors spanning t ∩ m_i (columns)
  std::string str(const RootSystem& rs) const;
};

SummandContent summand_content(const ReductiveSplit& split, std::size_t i);

}  // namespace homfinsler
