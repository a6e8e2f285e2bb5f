#include "homfinsler/rootsys.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "homfinsler/errors.hpp"

namespace homfinsler {

std::string to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::C: return "C";
    case Family::G2: return "G2";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  if (s == "A") return Family::A;
  if (s == "C") return Family::C;
  if (s == "G2" || s == "G") return Family::G2;
  throw InputError("unsupported root system family '" + std::string(s) + "'");
}

namespace {

ExactVector unit_combo(int dim, int i, std::int64_t a, int j = -1, std::int64_t b = 0) {
  ExactVector v(static_cast<std::size_t>(dim), make_coord(0));
  v[static_cast<std::size_t>(i)] = make_coord(a);
  if (j >= 0) v[static_cast<std::size_t>(j)] = make_coord(b);
  return v;
}

std::vector<ExactVector> family_roots(Family family, int rank) {
  std::vector<ExactVector> roots;
  switch (family) {
    case Family::A: {
      if (rank < 1) throw InputError("A_n requires rank >= 1");
      const int dim = rank + 1;
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
          roots.push_back(unit_combo(dim, i, 1, j, -1));
          roots.push_back(unit_combo(dim, i, -1, j, 1));
        }
      break;
    }
    case Family::C: {
      if (rank < 1) throw InputError("C_n requires rank >= 1");
      for (int i = 0; i < rank; ++i)
        for (int j = i + 1; j < rank; ++j)
          for (int si : {1, -1})
            for (int sj : {1, -1}) roots.push_back(unit_combo(rank, i, si, j, sj));
      for (int i = 0; i < rank; ++i) {
        roots.push_back(unit_combo(rank, i, 2));
        roots.push_back(unit_combo(rank, i, -2));
      }
      break;
    }
    case Family::G2: {
      if (rank != 2) throw InputError("G2-type requires rank 2");
      const auto c = [](std::int64_t n, std::int64_t d, std::int64_t r) { return make_coord(n, d, r); };
      const std::vector<ExactVector> half = {
          {c(1, 1, 1), c(0, 1, 1)},  {c(0, 1, 1), c(1, 1, 3)},  {c(1, 2, 1), c(1, 2, 3)},
          {c(1, 2, 1), c(-1, 2, 3)}, {c(3, 2, 1), c(1, 2, 3)},  {c(3, 2, 1), c(-1, 2, 3)},
      };
      for (const auto& r : half) {
        roots.push_back(r);
        roots.push_back(negate(r));
      }
      break;
    }
  }
  return roots;
}

int ambient_for(Family family, int rank) { return family == Family::A ? rank + 1 : rank; }

}  // namespace

RootSystem::RootSystem(Family family, int rank) : RootSystem(family, rank, family_roots(family, rank)) {}

RootSystem::RootSystem(Family family, int rank, std::vector<ExactVector> roots)
    : family_(family), rank_(rank), ambient_dim_(ambient_for(family, rank)), roots_(std::move(roots)) {
  for (const auto& r : roots_)
    if (static_cast<int>(r.size()) != ambient_dim_) throw InputError("root has wrong ambient dimension");
  index_roots();
}

RootSystem build_root_system(Family family, int rank) { return RootSystem(family, rank); }

std::optional<std::size_t> RootSystem::index_of(const Eigen::VectorXd& v) const {
  if (v.size() != ambient_dim_) return std::nullopt;
  for (std::size_t i = 0; i < numeric_.size(); ++i)
    if ((numeric_[i] - v).cwiseAbs().maxCoeff() < kTolerance) return i;
  return std::nullopt;
}

void RootSystem::index_roots() {
  const std::size_t n = roots_.size();
  numeric_.clear();
  for (const auto& r : roots_) numeric_.push_back(to_eigen(r));

  negation_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto j = index_of(-numeric_[i]);
    if (!j) throw InputError("root set is not closed under negation");
    negation_[i] = *j;
  }

  // generic positivity functional: weights 1, 1/2, 1/3, ...
  Eigen::VectorXd w(ambient_dim_);
  for (int i = 0; i < ambient_dim_; ++i) w(i) = 1.0 / (i + 1);
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i)
    if (w.dot(numeric_[i]) > 0) pos.push_back(i);

  simple_.clear();
  for (std::size_t i : pos) {
    bool decomposable = false;
    for (std::size_t j : pos) {
      if (j == i) continue;
      auto k = index_of(numeric_[i] - numeric_[j]);
      if (k && w.dot(numeric_[*k]) > 0) {
        decomposable = true;
        break;
      }
    }
    if (!decomposable) simple_.push_back(i);
  }
  if (static_cast<int>(simple_.size()) != rank_) throw InputError("root data has wrong number of simple roots");

  Eigen::MatrixXd S(ambient_dim_, rank_);
  for (int k = 0; k < rank_; ++k) S.col(k) = numeric_[simple_[static_cast<std::size_t>(k)]];
  const auto qr = S.colPivHouseholderQr();
  std::vector<Eigen::VectorXi> coeffs(n);
  height_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd c = qr.solve(numeric_[i]);
    Eigen::VectorXi ci = c.array().round().cast<int>();
    if ((c - ci.cast<double>()).cwiseAbs().maxCoeff() > 1e-9 || (S * ci.cast<double>() - numeric_[i]).norm() > 1e-9)
      throw InputError("root is not an integral combination of simple roots");
    coeffs[i] = ci;
    height_[i] = ci.sum();
  }

  positive_ = pos;
  std::sort(positive_.begin(), positive_.end(), [&](std::size_t a, std::size_t b) {
    if (height_[a] != height_[b]) return height_[a] < height_[b];
    const auto& ca = coeffs[a];
    const auto& cb = coeffs[b];
    return std::lexicographical_compare(cb.begin(), cb.end(), ca.begin(), ca.end());
  });
  order_.assign(n, -1);
  for (std::size_t k = 0; k < positive_.size(); ++k) order_[positive_[k]] = static_cast<int>(k);

  // crystallographic condition
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double c = 2 * inner(a, b) / norm2(a);
      if (std::abs(c - std::round(c)) > 1e-9) throw InputError("root data is not crystallographic");
    }

  if (family_ == Family::A) {
    frame_.resize(ambient_dim_, rank_);
    for (int k = 0; k < rank_; ++k) {
      Eigen::VectorXd v = numeric_[simple_[static_cast<std::size_t>(k)]];
      for (int j = 0; j < k; ++j) v -= frame_.col(j).dot(v) * frame_.col(j);
      frame_.col(k) = v.normalized();
    }
  } else {
    frame_ = Eigen::MatrixXd::Identity(ambient_dim_, rank_);
  }
}

int RootSystem::string_down(std::size_t alpha, std::size_t beta) const {
  int p = 0;
  while (index_of(numeric_[beta] - (p + 1) * numeric_[alpha])) ++p;
  return p;
}

int RootSystem::string_length(std::size_t alpha, std::size_t beta) const {
  int q = 0;
  while (index_of(numeric_[beta] + (q + 1) * numeric_[alpha])) ++q;
  return string_down(alpha, beta) + q + 1;
}

Eigen::VectorXd RootSystem::reflect(std::size_t alpha, const Eigen::VectorXd& v) const {
  const auto& a = numeric_[alpha];
  return v - 2 * a.dot(v) / a.dot(a) * a;
}

std::string vector_label(const ExactVector& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto& c = v[k];
    if (c.num == 0) continue;
    std::string s = c.str();
    if (s == "1") s.clear();
    if (s == "-1") s = "-";
    if (!out.empty() && s.rfind('-', 0) != 0) out += "+";
    out += s + "e" + std::to_string(k + 1);
  }
  return out.empty() ? "0" : out;
}

std::string RootSystem::label(std::size_t i) const { return vector_label(roots_[i]); }

std::string RootSystem::to_text() const {
  std::ostringstream os;
  os << "family " << to_string(family_) << "\n";
  os << "rank " << rank_ << "\n";
  for (const auto& r : roots_) os << "root " << join(r) << "\n";
  return os.str();
}

RootSystem RootSystem::from_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::optional<Family> family;
  std::optional<int> rank;
  std::vector<ExactVector> roots;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    try {
      if (key == "family") {
        std::string f;
        ls >> f;
        family = parse_family(f);
      } else if (key == "rank") {
        int r = 0;
        if (!(ls >> r)) throw InputError("expected integer rank");
        rank = r;
      } else if (key == "root") {
        ExactVector v;
        std::string tok;
        while (ls >> tok) v.push_back(ExactCoord::parse(tok));
        roots.push_back(std::move(v));
      } else {
        throw InputError("unknown key '" + key + "'");
      }
    } catch (const InputError& e) {
      throw InputError("root system line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!family || !rank) throw InputError("root system text lacks family or rank");
  RootSystem reference(*family, *rank);
  if (roots.size() != reference.size()) throw InputError("root list has the wrong number of roots");
  RootSystem out(*family, *rank, std::move(roots));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!reference.is_root(out.root(i))) throw InputError("listed vector " + out.label(i) + " is not a root");
    if (*out.index_of(out.root(i)) != i) throw InputError("root " + out.label(i) + " listed twice");
  }
  return out;
}

}  // namespace homfinsler
