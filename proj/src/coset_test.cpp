#include "doctest.h"
#include "homfinsler/coset.hpp"
#include "homfinsler/errors.hpp"

using namespace homfinsler;

namespace {

ExactVector V(std::initializer_list<const char*> xs) {
  ExactVector v;
  for (const char* x : xs) v.push_back(ExactCoord::parse(x));
  return v;
}

std::shared_ptr<const CompactLieAlgebra> algebra(Family f, int r) {
  return std::make_shared<const CompactLieAlgebra>(RootSystem(f, r));
}

std::vector<std::string> contents(const ReductiveSplit& s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.summands.size(); ++i) out.push_back(summand_content(s, i).str(s.algebra->roots()));
  return out;
}

}  // namespace

TEST_CASE("C2 with h = R(e1+3e2)") {
  const auto s = reductive_split(algebra(Family::C, 2), {{V({"1", "3"})}, {}, {}});
  CHECK(s.dim_h() == 1);
  CHECK(s.dim_m() == 9);
  // canonical order: by dim, central line last
  CHECK(s.summand_dims() == std::vector<int>{2, 2, 4, 1});
  CHECK(contents(s) == std::vector<std::string>{"g(2e2)", "g(e1+e2)", "g(e1-e2) + g(2e1)", "R(3e1-e2)"});
  CHECK(invariance_residual(s) < 1e-10);
  CHECK(commutant_offdiagonal(s) < 1e-8);
  CHECK(rank_gap(s) == 1);
}

TEST_CASE("A2 with the k+l=0 circle") {
  const auto s = reductive_split(algebra(Family::A, 2), {{V({"1", "-1", "0"})}, {}, {}});
  CHECK(s.summand_dims() == std::vector<int>{2, 4, 1});
  CHECK(contents(s) == std::vector<std::string>{"g(e1-e2)", "g(e2-e3) + g(e1-e3)", "R(e1+e2-2e3)"});
  const CentralLineReport l = check_central_line(s);
  CHECK(l.centralizer_residual < 1e-12);
  CHECK(l.residuals.size() == 2);
  CHECK(l.max_residual() < 1e-10);
  CHECK(rank_gap(s) == 1);
}

TEST_CASE("G2 with h = R e2 + g(sqrt3 e2)") {
  const auto s = reductive_split(algebra(Family::G2, 2), {{V({"0", "1"})}, {V({"0", "sqrt(3)"})}, {}});
  CHECK(s.summand_dims() == std::vector<int>{3, 8});
  CHECK(contents(s)[0] == "R(e1) + g(e1)");
  CHECK(rank_gap(s) == 1);
}

TEST_CASE("full torus: rank gap zero") {
  const auto s = reductive_split(algebra(Family::A, 2), {{V({"1", "-1", "0"}), V({"1", "1", "-2"})}, {}, {}});
  CHECK(s.summand_dims() == std::vector<int>{2, 2, 2});
  CHECK(rank_gap(s) == 0);
}

TEST_CASE("projection onto m") {
  const auto s = reductive_split(algebra(Family::C, 3), {{V({"1", "1", "0"}), V({"0", "0", "1"})}, {V({"0", "0", "2"})}, {}});
  const CompactLieAlgebra& g = *s.algebra;
  for (int k = 0; k < s.dim_h(); ++k) CHECK(g.norm(project_m(s, s.h_basis.col(k))) < 1e-12);
  for (int k = 0; k < s.dim_m(); ++k) CHECK(g.norm(project_m(s, s.m_basis.col(k)) - s.m_basis.col(k)) < 1e-12);
  AlgebraVector x = AlgebraVector::LinSpaced(g.dim(), -1, 2);
  const AlgebraVector p = project_m(s, x);
  CHECK(g.norm(project_m(s, p) - p) < 1e-12);
  CHECK((s.h_basis.transpose() * g.gram() * p).norm() < 1e-12);
  // self-adjoint
  AlgebraVector y = AlgebraVector::LinSpaced(g.dim(), 3, -1);
  CHECK(std::abs(g.inner(project_m(s, x), y) - g.inner(x, project_m(s, y))) < 1e-12);
}

TEST_CASE("orthonormal bases and orthogonality of h and m") {
  const auto s = reductive_split(algebra(Family::A, 3),
                                 {{V({"1", "1", "1", "-3"}), V({"1", "-1", "0", "0"})}, {V({"1", "-1", "0", "0"})}, {}});
  const Eigen::MatrixXd& G = s.algebra->gram();
  CHECK((s.m_basis.transpose() * G * s.m_basis - Eigen::MatrixXd::Identity(s.dim_m(), s.dim_m())).norm() < 1e-12);
  CHECK((s.h_basis.transpose() * G * s.m_basis).norm() < 1e-12);
  CHECK(s.dim_h() + s.dim_m() == 15);
}

TEST_CASE("split does not depend on the random commutant element") {
  const SubalgebraSpec h{{V({"1", "3"})}, {}, {}};
  const auto a = reductive_split(algebra(Family::C, 2), h, {1, 1e-8});
  const auto b = reductive_split(algebra(Family::C, 2), h, {987654321, 1e-8});
  CHECK(contents(a) == contents(b));
}

TEST_CASE("errors") {
  // a single root plane is not closed: [u, v] lands in t
  CHECK_THROWS_AS(reductive_split(algebra(Family::A, 2), {{}, {V({"1", "-1", "0"})}, {}}), InputError);
  CHECK_THROWS_AS(reductive_split(algebra(Family::A, 2), {{}, {V({"1", "1", "0"})}, {}}), InputError);
  // an absurd ambiguity threshold turns every distinct eigenvalue pair into an error
  CHECK_THROWS_AS(reductive_split(algebra(Family::C, 2), {{V({"1", "3"})}, {}, {}}, {7, 10.0}), NumericalError);
  // the central-line check needs a one-dimensional last summand
  const auto c2 = reductive_split(algebra(Family::C, 2), {{V({"1", "1"})}, {}, {}});
  CHECK_THROWS_AS(check_central_line(c2), InputError);
}

TEST_CASE("central-line check along t∩m for the two-summand C2 split") {
  const auto s = reductive_split(algebra(Family::C, 2), {{V({"1", "1"})}, {}, {}});
  const AlgebraVector x = s.algebra->torus(to_eigen(V({"1", "-1"})));
  const CentralLineReport r = check_central_line(s, x);
  CHECK(r.residuals.size() == 2);
  CHECK(r.centralizer_residual < 1e-12);
  // a torus direction preserves every root plane
  CHECK(r.max_residual() < 1e-10);
  // g(2e1) does not centralize h
  const auto [u, v] = s.algebra->plane(*s.algebra->roots().index_of(to_eigen(V({"2", "0"}))));
  (void)v;
  CHECK_THROWS_AS(check_central_line(s, s.algebra->basis(u)), InputError);
}

TEST_CASE("alignment to declared summands") {
  const auto s = reductive_split(algebra(Family::C, 2), {{V({"1", "3"})}, {}, {}});
  const std::vector<std::vector<SpanItem>> declared = {{SpanItem::torus(V({"3", "-1"}))},
                                                       {SpanItem::plane(V({"1", "-1"})), SpanItem::plane(V({"2", "0"}))},
                                                       {SpanItem::plane(V({"1", "1"}))},
                                                       {SpanItem::plane(V({"0", "2"}))}};
  const auto a = align_split(s, declared);
  CHECK(a.summand_dims() == std::vector<int>{1, 4, 2, 2});
  CHECK(invariance_residual(a) < 1e-10);
  CHECK(contents(a)[3] == "g(2e2)");

  auto wrong = declared;
  wrong[1].pop_back();
  wrong[2].push_back(SpanItem::plane(V({"2", "0"})));
  CHECK_THROWS_AS(align_split(s, wrong), FixtureIntegrityError);
  const std::vector<std::vector<SpanItem>> short_list(declared.begin(), declared.end() - 1);
  CHECK_THROWS_AS(align_split(s, short_list), FixtureIntegrityError);
}

TEST_CASE("summand lookup") {
  const auto s = reductive_split(algebra(Family::A, 2), {{V({"1", "-1", "0"})}, {}, {}});
  Eigen::VectorXd c = Eigen::VectorXd::Zero(s.dim_m());
  c(s.summands[1].offset) = 1;
  CHECK(s.summand_of(c) == 1);
  c(0) = 1;
  CHECK(s.summand_of(c) == -1);
}
