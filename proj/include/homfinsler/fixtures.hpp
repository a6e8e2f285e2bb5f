#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homfinsler/coset.hpp"
#include "homfinsler/norm.hpp"

namespace homfinsler {

enum class Expectation { Obstructed, Positivity, None };

std::string to_string(Expectation e);

/// A homogeneous space G/H together with its expected decomposition and,
/// for obstructed cases, the commuting pair that kills the curvature.
struct CaseFixture {
  std::string id;
  Family family = Family::A;
  int rank = 0;
  Shape shape = Shape::Reversible;
  std::vector<SpanItem> h;  // torus, root and vector items
  std::vector<std::vector<SpanItem>> summands;
  std::optional<std::pair<SpanItem, SpanItem>> pair;
  Expectation expect = Expectation::None;

  SubalgebraSpec subalgebra() const;
  std::vector<int> expected_dims(const CompactLieAlgebra& g) const;
  bool odd_dimensional(const CompactLieAlgebra& g) const;

  std::string to_text() const;
  static CaseFixture from_text(const std::string& text, const std::string& source = "<fixture>");
};

SpanItem parse_span_item(const std::string& text);

const std::vector<std::string>& builtin_case_ids();
/// The shipped text of a built-in fixture; throws InputError for unknown ids.
const std::string& builtin_fixture_text(const std::string& id);
CaseFixture builtin_fixture(const std::string& id);

}  // namespace homfinsler
