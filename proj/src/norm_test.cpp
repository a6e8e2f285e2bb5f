#include <random>

#include "doctest.h"
#include "homfinsler/errors.hpp"
#include "homfinsler/norm.hpp"

using namespace homfinsler;

namespace {

ExactVector V(std::initializer_list<const char*> xs) {
  ExactVector v;
  for (const char* x : xs) v.push_back(ExactCoord::parse(x));
  return v;
}

// A2 with h = R(e1-e2): summands of dims 2, 4, 1, the last one central
std::shared_ptr<const ReductiveSplit> aw_split() {
  static const auto s = std::make_shared<const ReductiveSplit>(reductive_split(
      std::make_shared<const CompactLieAlgebra>(RootSystem(Family::A, 2)), {{V({"1", "-1", "0"})}, {}, {}}));
  return s;
}

// C2 with h = R(e1+3e2): dims 2, 2, 4, 1
std::shared_ptr<const ReductiveSplit> c1_split() {
  static const auto s = std::make_shared<const ReductiveSplit>(reductive_split(
      std::make_shared<const CompactLieAlgebra>(RootSystem(Family::C, 2)), {{V({"1", "3"})}, {}, {}}));
  return s;
}

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = N(rng);
  return y;
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm() / b.norm(); }

std::vector<LFunction> reversible_family(int s) {
  std::vector<double> c;
  for (int i = 0; i < s; ++i) c.push_back(1.0 + 0.5 * i);
  return {LFunction::diagonal(Shape::Reversible, c),
          LFunction::generic(Shape::Reversible, s, s == 4 ? "t1+2*t2+t3+1.5*t4+0.4*(t1-t2+t3)^2/(t1+t2+t3+t4)"
                                                          : "t1+2*t2+t3+0.4*(t1-t2)^2/(t1+t2+t3)"),
          LFunction::generic(Shape::Reversible, s, s == 4 ? "sqrt((t1+t2+t3+t4)^2+0.5*t1^2+0.3*t3^2)"
                                                          : "sqrt((t1+t2+t3)^2+0.5*t1^2+0.3*t3^2)")};
}

std::vector<LFunction> nonreversible_family() {
  return {LFunction::diagonal(Shape::Nonreversible, {1, 2, 3}), LFunction::randers({1, 1.5, 2}, 0.8),
          LFunction::randers({1, 1, 1}, -0.3),
          LFunction::generic(Shape::Nonreversible, 3, "(sqrt(t1+2*t2+ys^2+0.3*(t1-t2)^2/(t1+t2+ys^2))+0.4*ys)^2")};
}

}  // namespace

TEST_CASE("normal metric") {
  const VeryStandardNorm n(aw_split(), LFunction::diagonal(Shape::Reversible, {1, 1, 1}));
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const Eigen::VectorXd y = random_vector(7, rng);
    CHECK(n.F(y) == doctest::Approx(y.norm()).epsilon(1e-14));
    CHECK((fundamental_tensor(n, y) - Eigen::MatrixXd::Identity(7, 7)).norm() < 1e-14);
    CHECK((fd_hessian_oracle(n, y) - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(n.F(2 * y) == doctest::Approx(2 * n.F(y)).epsilon(1e-14));
  }
}

TEST_CASE("randers value along the central direction") {
  const VeryStandardNorm n(aw_split(), LFunction::randers({1, 1, 1}, 0.3));
  const AlgebraVector e = aw_split()->summand_basis(2).col(0);
  CHECK(eval_norm(n, e) == doctest::Approx(1.3).epsilon(1e-15));
  CHECK(eval_norm(n, -e) == doctest::Approx(0.7).epsilon(1e-15));
  // both orientations: different tensors, each matching finite differences
  const Eigen::VectorXd y = aw_split()->m_coords(e);
  const Eigen::MatrixXd Gp = fundamental_tensor(n, y), Gm = fundamental_tensor(n, -y);
  CHECK((Gp - Gm).norm() > 0.1);
  CHECK(rel(Gp, fd_hessian_oracle(n, y)) < 1e-5);
  CHECK(rel(Gm, fd_hessian_oracle(n, -y)) < 1e-5);
}

TEST_CASE("closed form matches finite differences") {
  std::mt19937_64 rng(11);
  int count = 0;
  for (const auto& L : reversible_family(4)) {
    const VeryStandardNorm n(c1_split(), L);
    for (int k = 0; k < 10; ++k, ++count) {
      const Eigen::VectorXd y = random_vector(9, rng);
      CHECK(rel(fundamental_tensor(n, y), fd_hessian_oracle(n, y)) < 1e-5);
    }
  }
  for (const auto& L : nonreversible_family()) {
    const VeryStandardNorm n(aw_split(), L);
    for (int k = 0; k < 10; ++k, ++count) {
      const Eigen::VectorXd y = random_vector(7, rng);
      const Eigen::MatrixXd G = fundamental_tensor(n, y);
      CHECK(rel(G, fd_hessian_oracle(n, y)) < 1e-5);
      CHECK(std::abs(y.dot(G * y) - n.F(y) * n.F(y)) < 1e-9 * y.squaredNorm());
    }
  }
  CHECK(count == 70);
}

TEST_CASE("block orthogonality for poles in one summand") {
  std::mt19937_64 rng(5);
  auto check = [&](const VeryStandardNorm& n, std::size_t pole_summand) {
    const ReductiveSplit& s = n.split();
    const auto& ps = s.summands[pole_summand];
    Eigen::VectorXd y = Eigen::VectorXd::Zero(s.dim_m());
    y.segment(ps.offset, ps.dim) = random_vector(ps.dim, rng);
    const Eigen::MatrixXd G = fundamental_tensor(n, y);
    for (const auto& sj : s.summands) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(s.dim_m());
      u.segment(sj.offset, sj.dim) = random_vector(sj.dim, rng);
      Eigen::VectorXd v = random_vector(s.dim_m(), rng);
      v -= v.dot(u) / u.squaredNorm() * u;
      CHECK(std::abs(u.dot(G * v)) < 1e-10);
    }
  };
  for (const auto& L : reversible_family(4))
    for (std::size_t i = 0; i < 4; ++i) check(VeryStandardNorm(c1_split(), L), i);
  for (const auto& L : nonreversible_family()) check(VeryStandardNorm(aw_split(), L), 2);
}

TEST_CASE("invariance under block rotations") {
  std::mt19937_64 rng(8);
  const VeryStandardNorm n(c1_split(), reversible_family(4)[1]);
  const ReductiveSplit& s = n.split();
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(9, 9);
  for (const auto& b : s.summands) {
    Eigen::MatrixXd A(b.dim, b.dim);
    for (int i = 0; i < b.dim; ++i) A.col(i) = random_vector(b.dim, rng);
    Q.block(b.offset, b.offset, b.dim, b.dim) = Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
  }
  const Eigen::VectorXd y = random_vector(9, rng);
  CHECK(n.F(Q * y) == doctest::Approx(n.F(y)).epsilon(1e-13));
  CHECK(rel(fundamental_tensor(n, Q * y), Q * fundamental_tensor(n, y) * Q.transpose()) < 1e-12);
}

TEST_CASE("Euler identity") {
  const auto fam = reversible_family(4);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(9);
  y(c1_split()->summands[2].offset) = 0.8;
  y(c1_split()->summands[2].offset + 3) = -0.5;
  const EulerResidual d = check_euler_identity(VeryStandardNorm(c1_split(), fam[0]), y);
  CHECK(d.sum_residual == 0.0);
  REQUIRE(d.diagonal_second.has_value());
  CHECK(*d.diagonal_second == 0.0);
  for (const auto& L : fam) {
    const EulerResidual r = check_euler_identity(VeryStandardNorm(c1_split(), L), y);
    CHECK(r.sum_residual < 1e-8);
    CHECK(*r.diagonal_second < 1e-8);
  }
  const VeryStandardNorm bad(c1_split(), LFunction::generic(Shape::Reversible, 4, "t1^2+t2+t3+t4"));
  Eigen::VectorXd z = Eigen::VectorXd::Constant(9, 0.5);
  CHECK(check_euler_identity(bad, z).sum_residual > 0.1);
  const VeryStandardNorm nonrev(aw_split(), LFunction::randers({1, 1, 1}, 0.2));
  CHECK_THROWS_AS(check_euler_identity(nonrev, Eigen::VectorXd::Ones(7)), InputError);
}

TEST_CASE("homogeneity") {
  std::mt19937_64 rng(2);
  for (const auto& L : reversible_family(3)) CHECK(homogeneity_residual(L, rng) < 1e-8);
  for (const auto& L : nonreversible_family()) CHECK(homogeneity_residual(L, rng) < 1e-8);
  CHECK(homogeneity_residual(LFunction::generic(Shape::Reversible, 2, "t1^2+t2"), rng) > 0.1);
}

TEST_CASE("admissibility") {
  std::mt19937_64 rng(4);
  CHECK(is_admissible(VeryStandardNorm(aw_split(), LFunction::randers({1, 1, 1}, 0.5)), rng));
  CHECK_FALSE(is_admissible(VeryStandardNorm(aw_split(), LFunction::randers({1, 1, 1}, 1.5)), rng));
  CHECK(min_tensor_eigenvalue(VeryStandardNorm(aw_split(), LFunction::diagonal(Shape::Reversible, {1, 1, 1})), rng) ==
        doctest::Approx(1.0));
}

TEST_CASE("induced submersion norm") {
  std::mt19937_64 rng(9);
  const VeryStandardNorm diag(aw_split(), LFunction::diagonal(Shape::Nonreversible, {2, 3, 5}));
  const VeryStandardNorm di = induced_submersion_norm(diag);
  CHECK(di.split().dim_m() == 6);
  CHECK(di.split().dim_h() == 2);
  const double b = 0.6, cs = 1.7;
  const VeryStandardNorm ra(aw_split(), LFunction::randers({1.2, 0.8, cs}, b));
  const VeryStandardNorm ri = induced_submersion_norm(ra);
  for (int k = 0; k < 10; ++k) {
    const Eigen::VectorXd y = random_vector(6, rng);
    const double A2 = 2 * y.head(2).squaredNorm() + 3 * y.tail(4).squaredNorm();
    CHECK(di.F(y) == doctest::Approx(std::sqrt(A2)).epsilon(1e-12));
    const double A = 1.2 * y.head(2).squaredNorm() + 0.8 * y.tail(4).squaredNorm();
    CHECK(ri.F(y) == doctest::Approx(std::sqrt(1 - b * b / cs) * std::sqrt(A)).epsilon(1e-12));
    CHECK(ri.F(2.5 * y) == doctest::Approx(2.5 * ri.F(y)).epsilon(1e-12));
    CHECK(rel(fundamental_tensor(ri, y), fd_hessian_oracle(ri, y)) < 1e-5);
  }
  CHECK(is_admissible(ri, rng));
  CHECK_THROWS_AS(induced_submersion_norm(VeryStandardNorm(aw_split(), LFunction::diagonal(Shape::Reversible, {1, 1, 1}))),
                  InputError);
}

TEST_CASE("text round trip") {
  std::vector<LFunction> all = reversible_family(3);
  for (const auto& L : nonreversible_family()) all.push_back(L);
  all.push_back(LFunction::fiber_min(LFunction::randers({1, 2, 3}, 0.1)));
  for (const auto& L : all) {
    const std::string t = L.to_text();
    CHECK(LFunction::from_text(t).to_text() == t);
  }
  const LFunction r = LFunction::from_text("shape nonreversible\nkind randers\ncoeffs 1 2 3\nb 0.25\n");
  CHECK(r.b() == 0.25);
  CHECK(r.summands() == 3);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(LFunction::diagonal(Shape::Reversible, {1, -1}), InputError);
  CHECK_THROWS_AS(LFunction::from_text("shape sideways\nkind diagonal\ncoeffs 1\n"), InputError);
  CHECK_THROWS_AS(LFunction::from_text("shape reversible\nkind randers\ncoeffs 1 1\n"), InputError);
  CHECK_THROWS_AS(LFunction::from_text("shape reversible\nkind diagonal\ncoeffs 1 x\n"), InputError);
  // wrong number of summands
  CHECK_THROWS_AS(VeryStandardNorm(aw_split(), LFunction::diagonal(Shape::Reversible, {1, 1})), InputError);
  // non-reversible needs a one-dimensional central last summand
  const auto c2 = std::make_shared<const ReductiveSplit>(reductive_split(
      std::make_shared<const CompactLieAlgebra>(RootSystem(Family::C, 2)), {{V({"1", "1"})}, {}, {}}));
  CHECK_THROWS_AS(VeryStandardNorm(c2, LFunction::randers({1, 1}, 0.1)), InputError);
  const VeryStandardNorm n(aw_split(), LFunction::diagonal(Shape::Reversible, {1, 1, 1}));
  CHECK_THROWS_AS(fundamental_tensor(n, Eigen::VectorXd::Zero(7)), InputError);
  CHECK_THROWS_AS(eval_norm(n, aw_split()->h_basis.col(0)), InputError);
  CHECK(n.F(Eigen::VectorXd::Zero(7)) == 0.0);
}
