#include "homfinsler/fixtures.hpp"

#include <map>
#include <sstream>

#include "homfinsler/errors.hpp"

namespace homfinsler {

std::string to_string(Expectation e) {
  switch (e) {
    case Expectation::Obstructed: return "obstructed";
    case Expectation::Positivity: return "positivity";
    case Expectation::None: return "none";
  }
  return {};
}

SpanItem parse_span_item(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  if (!(in >> kind)) throw InputError("empty span item");
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);
  if (kind == "torus" || kind == "plane" || kind == "root") {
    double angle = 0;
    if (tokens.size() >= 2 && tokens[tokens.size() - 2] == "@") {
      if (kind != "plane") throw InputError("only plane items take an angle");
      try {
        angle = std::stod(tokens.back());
      } catch (const std::logic_error&) {
        throw InputError("bad angle '" + tokens.back() + "'");
      }
      tokens.resize(tokens.size() - 2);
    }
    ExactVector v;
    for (const auto& t : tokens) v.push_back(ExactCoord::parse(t));
    if (v.empty()) throw InputError("span item '" + text + "' has no coordinates");
    if (kind == "torus") return SpanItem::torus(v);
    return SpanItem::plane(v, angle);
  }
  if (kind == "vector") {
    AlgebraVector x(static_cast<Eigen::Index>(tokens.size()));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      try {
        x(static_cast<Eigen::Index>(i)) = std::stod(tokens[i]);
      } catch (const std::logic_error&) {
        throw InputError("bad vector entry '" + tokens[i] + "'");
      }
    }
    return SpanItem::explicit_vector(x);
  }
  throw InputError("unknown span item kind '" + kind + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

}  // namespace

SubalgebraSpec CaseFixture::subalgebra() const {
  SubalgebraSpec spec;
  for (const auto& item : h) {
    switch (item.kind) {
      case SpanItem::Kind::Torus: spec.torus_part.push_back(item.coords); break;
      case SpanItem::Kind::Plane: spec.root_part.push_back(item.coords); break;
      case SpanItem::Kind::Vector: spec.extra_generators.push_back(item.vector); break;
    }
  }
  return spec;
}

std::vector<int> CaseFixture::expected_dims(const CompactLieAlgebra& g) const {
  std::vector<int> dims;
  for (const auto& s : summands) {
    int d = 0;
    for (const auto& item : s) d += static_cast<int>(span_vectors(g, item).cols());
    dims.push_back(d);
  }
  return dims;
}

bool CaseFixture::odd_dimensional(const CompactLieAlgebra& g) const {
  int d = 0;
  for (int x : expected_dims(g)) d += x;
  return d % 2 == 1;
}

std::string CaseFixture::to_text() const {
  std::ostringstream out;
  out << "case " << id << "\n";
  out << "family " << homfinsler::to_string(family) << "\n";
  out << "rank " << rank << "\n";
  out << "shape " << homfinsler::to_string(shape) << "\n";
  for (const auto& item : h) {
    std::string s = item.str();
    if (item.kind == SpanItem::Kind::Plane) s.replace(0, 5, "root");
    out << "h " << s << "\n";
  }
  for (const auto& s : summands) {
    out << "summand";
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? " ; " : " ") << s[i].str();
    out << "\n";
  }
  if (pair) out << "pair " << pair->first.str() << " | " << pair->second.str() << "\n";
  if (expect != Expectation::None) out << "expect " << homfinsler::to_string(expect) << "\n";
  return out.str();
}

CaseFixture CaseFixture::from_text(const std::string& text, const std::string& source) {
  CaseFixture f;
  std::istringstream in(text);
  int lineno = 0;
  bool have_family = false, have_rank = false;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto space = line.find(' ');
    const std::string key = line.substr(0, space);
    const std::string rest = space == std::string::npos ? std::string() : trim(line.substr(space));
    try {
      if (key == "case") {
        f.id = rest;
      } else if (key == "family") {
        f.family = parse_family(rest);
        have_family = true;
      } else if (key == "rank") {
        std::size_t used = 0;
        f.rank = std::stoi(rest, &used);
        if (used != rest.size()) throw InputError("bad rank '" + rest + "'");
        have_rank = true;
      } else if (key == "shape") {
        if (rest == "reversible") f.shape = Shape::Reversible;
        else if (rest == "nonreversible") f.shape = Shape::Nonreversible;
        else throw InputError("bad shape '" + rest + "'");
      } else if (key == "h") {
        std::string item = rest;
        const bool root = item.rfind("root", 0) == 0;
        if (root) item.replace(0, 4, "plane");
        SpanItem s = parse_span_item(item);
        if (!root && s.kind == SpanItem::Kind::Plane) throw InputError("h items are torus, root or vector");
        f.h.push_back(std::move(s));
      } else if (key == "summand") {
        std::vector<SpanItem> items;
        for (const auto& part : split_on(rest, ';')) {
          if (part.rfind("root", 0) == 0) throw InputError("summand items are torus, plane or vector");
          items.push_back(parse_span_item(part));
        }
        f.summands.push_back(std::move(items));
      } else if (key == "pair") {
        const auto parts = split_on(rest, '|');
        if (parts.size() != 2) throw InputError("pair needs two items separated by '|'");
        f.pair = std::make_pair(parse_span_item(parts[0]), parse_span_item(parts[1]));
      } else if (key == "expect") {
        if (rest == "obstructed") f.expect = Expectation::Obstructed;
        else if (rest == "positivity") f.expect = Expectation::Positivity;
        else throw InputError("bad expectation '" + rest + "'");
      } else {
        throw InputError("unknown key '" + key + "'");
      }
    } catch (const InputError& e) {
      throw InputError(source + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const std::logic_error&) {
      throw InputError(source + ":" + std::to_string(lineno) + ": malformed line");
    }
  }
  if (f.id.empty() || !have_family || !have_rank)
    throw InputError(source + ": fixture needs case, family and rank lines");
  if (f.expect == Expectation::Obstructed && !f.pair)
    throw InputError(source + ": obstructed fixture needs a pair line");
  return f;
}

// ---------------------------------------------------------------------------

namespace {

const std::map<std::string, std::string>& builtin_texts() {
  static const std::map<std::string, std::string> texts = {
      {"C1",
       "case C1\n"
       "family C\n"
       "rank 2\n"
       "shape reversible\n"
       "h torus 1 3\n"
       "summand torus 3 -1\n"
       "summand plane 1 -1 ; plane 2 0\n"
       "summand plane 1 1\n"
       "summand plane 0 2\n"
       "pair plane 2 0 | plane 0 2\n"
       "expect obstructed\n"},
      {"C2",
       "case C2\n"
       "family C\n"
       "rank 2\n"
       "shape reversible\n"
       "h torus 1 1\n"
       "summand torus 1 -1 ; plane 1 -1\n"
       "summand plane 1 1 ; plane 2 0 ; plane 0 2\n"
       "pair torus 1 -1 | plane 1 1\n"
       "expect obstructed\n"},
      {"C3",
       "case C3\n"
       "family C\n"
       "rank 3\n"
       "shape reversible\n"
       "h torus 1 1 0\n"
       "h torus 0 0 1\n"
       "h root 0 0 2\n"
       "summand plane 1 0 1 ; plane 0 1 1 ; plane 1 0 -1 ; plane 0 1 -1\n"
       "summand plane 1 1 0 ; plane 2 0 0 ; plane 0 2 0\n"
       "summand torus 1 -1 0 ; plane 1 -1 0\n"
       "pair plane 2 0 0 | plane 0 2 0\n"
       "expect obstructed\n"},
      {"C4",
       "case C4\n"
       "family A\n"
       "rank 3\n"
       "shape reversible\n"
       "h torus 1 1 1 -3\n"
       "h torus 1 -1 0 0\n"
       "h root 1 -1 0 0\n"
       "summand plane 1 0 -1 0 ; plane 0 1 -1 0\n"
       "summand plane 1 0 0 -1 ; plane 0 1 0 -1\n"
       "summand plane 0 0 1 -1\n"
       "summand torus 1 1 -2 0\n"
       "pair plane 1 0 -1 0 | plane 0 1 0 -1\n"
       "expect obstructed\n"},
      {"C5",
       "case C5\n"
       "family G2\n"
       "rank 2\n"
       "shape reversible\n"
       "h torus 0 1\n"
       "h root 0 sqrt(3)\n"
       "summand plane 1/2 sqrt(3)/2 ; plane 1/2 -sqrt(3)/2 ; plane 3/2 sqrt(3)/2 ; plane 3/2 -sqrt(3)/2\n"
       "summand torus 1 0 ; plane 1 0\n"
       "pair plane 1/2 -sqrt(3)/2 | plane 3/2 sqrt(3)/2\n"
       "expect obstructed\n"},
      {"AW_degenerate",
       "case AW_degenerate\n"
       "family A\n"
       "rank 2\n"
       "shape nonreversible\n"
       "h torus 1 -1 0\n"
       "summand plane 1 -1 0\n"
       "summand plane 0 1 -1 ; plane 1 0 -1\n"
       "summand torus 1 1 -2\n"
       "pair torus 1 1 -2 | plane 1 -1 0\n"
       "expect obstructed\n"},
      {"sphere_SU",
       "case sphere_SU\n"
       "family A\n"
       "rank 2\n"
       "shape reversible\n"
       "h torus 1 -1 0\n"
       "h root 1 -1 0\n"
       "summand plane 1 0 -1 ; plane 0 1 -1\n"
       "summand torus 1 1 -2\n"
       "expect positivity\n"},
      {"sphere_Sp",
       "case sphere_Sp\n"
       "family C\n"
       "rank 2\n"
       "shape reversible\n"
       "h torus 0 1\n"
       "h root 0 2\n"
       "summand plane 1 1 ; plane 1 -1\n"
       "summand torus 1 0 ; plane 2 0\n"
       "expect positivity\n"},
  };
  return texts;
}

}  // namespace

const std::vector<std::string>& builtin_case_ids() {
  static const std::vector<std::string> ids = {"C1", "C2", "C3", "C4", "C5", "AW_degenerate", "sphere_SU", "sphere_Sp"};
  return ids;
}

const std::string& builtin_fixture_text(const std::string& id) {
  const auto& texts = builtin_texts();
  auto it = texts.find(id);
  if (it == texts.end()) throw InputError("unknown case '" + id + "'");
  return it->second;
}

CaseFixture builtin_fixture(const std::string& id) { return CaseFixture::from_text(builtin_fixture_text(id), id); }

}  // namespace homfinsler
