#include "susyhom/exact_matrix.hpp"

#include <algorithm>
#include <map>

#include "susyhom/errors.hpp"

namespace susyhom {

void ExactSparse::set_column(std::size_t j, Column entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Column merged;
  for (auto& [r, v] : entries) {
    if (r >= rows_) throw std::out_of_range("row index out of range");
    if (!merged.empty() && merged.back().first == r)
      merged.back().second += v;
    else
      merged.emplace_back(r, std::move(v));
  }
  std::erase_if(merged, [](const auto& e) { return e.second.is_zero(); });
  columns_.at(j) = std::move(merged);
}

std::size_t ExactSparse::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.size();
  return n;
}

bool ExactSparse::is_real() const {
  for (const auto& c : columns_)
    for (const auto& e : c)
      if (!e.second.is_real()) return false;
  return true;
}

ExactSparse ExactSparse::adjoint() const {
  std::vector<Column> cols(rows_);
  for (std::size_t j = 0; j < columns_.size(); ++j)
    for (const auto& [r, v] : columns_[j]) cols[r].emplace_back(j, v.conj());
  ExactSparse out(columns_.size(), rows_);
  out.columns_ = std::move(cols);  // already sorted by construction
  return out;
}

ExactSparse ExactSparse::scaled(const ExactComplex& c) const {
  ExactSparse out(rows_, cols());
  if (c.is_zero()) return out;
  for (std::size_t j = 0; j < cols(); ++j)
    for (const auto& [r, v] : columns_[j]) out.columns_[j].emplace_back(r, v * c);
  return out;
}

ExactSparse operator*(const ExactSparse& a, const ExactSparse& b) {
  if (a.cols() != b.rows()) throw InputError("matrix product dimension mismatch");
  ExactSparse out(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    std::map<std::size_t, ExactComplex> acc;
    for (const auto& [k, bv] : b.columns_[j])
      for (const auto& [i, av] : a.columns_[k]) acc[i] += av * bv;
    ExactSparse::Column col;
    for (auto& [i, v] : acc)
      if (!v.is_zero()) col.emplace_back(i, std::move(v));
    out.columns_[j] = std::move(col);
  }
  return out;
}

ExactSparse operator+(const ExactSparse& a, const ExactSparse& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("matrix sum dimension mismatch");
  ExactSparse out(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    ExactSparse::Column col = a.columns_[j];
    col.insert(col.end(), b.columns_[j].begin(), b.columns_[j].end());
    out.set_column(j, std::move(col));
  }
  return out;
}

ExactSparse operator-(const ExactSparse& a, const ExactSparse& b) { return a + b.scaled(ExactComplex(-1)); }

bool operator==(const ExactSparse& a, const ExactSparse& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const auto& x = a.columns_[j];
    const auto& y = b.columns_[j];
    if (x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k].first != y[k].first || !(x[k].second == y[k].second)) return false;
  }
  return true;
}

double ExactSparse::max_abs() const {
  double m = 0;
  for (const auto& c : columns_)
    for (const auto& e : c) m = std::max(m, e.second.abs());
  return m;
}

SparseMatrix ExactSparse::to_sparse(double scale) const {
  std::vector<Eigen::Triplet<std::complex<double>>> triplets;
  triplets.reserve(nonzeros());
  for (std::size_t j = 0; j < cols(); ++j)
    for (const auto& [r, v] : columns_[j])
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(j), v.to_complex() * scale);
  SparseMatrix m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

DenseMatrix ExactSparse::to_dense(double scale) const {
  DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols()));
  for (std::size_t j = 0; j < cols(); ++j)
    for (const auto& [r, v] : columns_[j])
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v.to_complex() * scale;
  return m;
}

ExactSparse sector_matrix(const FermionOperator& op, const GradedSpace& space, std::size_t l,
                          std::optional<int> grading) {
  if (op.modes() != space.modes())
    throw InputError("operator acts on " + std::to_string(op.modes()) + " modes, space has " +
                     std::to_string(space.modes()));
  int f = 0;
  if (grading) {
    f = *grading;
    if (auto g = op.grading(); !op.is_zero() && (!g || *g != f))
      throw InputError("operator grading does not match requested grading " + std::to_string(f));
  } else if (!op.is_zero()) {
    auto g = op.grading();
    if (!g) throw InputError("operator mixes gradings; sector matrix undefined");
    f = *g;
  }
  const SectorBasis& source = space.sector_basis(l);
  const long target_l = static_cast<long>(l) + f;
  if (target_l < 0 || target_l > static_cast<long>(space.modes())) return ExactSparse(0, source.size());
  const SectorBasis& target = space.sector_basis(static_cast<std::size_t>(target_l));
  ExactSparse out(target.size(), source.size());
  if (op.is_zero()) return out;

  // Flatten factors once; each term runs right to left over the bits.
  struct Kernel {
    std::vector<std::pair<std::size_t, bool>> steps;
    const ExactComplex* coefficient;
  };
  std::vector<Kernel> kernels;
  kernels.reserve(op.terms().size());
  for (const auto& t : op.terms()) {
    Kernel k{{}, &t.coefficient};
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) k.steps.emplace_back(it->mode, it->creation);
    kernels.push_back(std::move(k));
  }
  for (std::size_t j = 0; j < source.size(); ++j) {
    ExactSparse::Column col;
    for (const auto& k : kernels) {
      std::uint64_t word = source.words()[j];
      int sign = 1;
      bool alive = true;
      for (const auto& [mode, create] : k.steps)
        if (!(alive = apply_mode_bits(create, mode, word, sign))) break;
      if (!alive) continue;
      auto row = target.index_of(word);
      if (!row) continue;  // projected out by the constraints
      col.emplace_back(*row, sign > 0 ? *k.coefficient : -*k.coefficient);
    }
    out.set_column(j, std::move(col));
  }
  return out;
}

namespace {

using IntRow = std::vector<std::pair<std::size_t, BigInt>>;

void make_primitive(IntRow& row) {
  if (row.empty()) return;
  BigInt g = 0;
  for (const auto& e : row) {
    g = gcd(g, e.second);
    if (g == 1) break;
  }
  if (g < 0) g = -g;
  if (g > 1)
    for (auto& e : row) e.second /= g;
  if (row.front().second < 0)
    for (auto& e : row) e.second = -e.second;
}

IntRow integer_lift(const std::vector<std::pair<std::size_t, Rational>>& row) {
  BigInt l = 1;
  for (const auto& e : row) {
    BigInt d = denominator(e.second);
    l = l / gcd(l, d) * d;
  }
  IntRow out;
  out.reserve(row.size());
  for (const auto& e : row) out.emplace_back(e.first, BigInt(numerator(e.second) * (l / denominator(e.second))));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  make_primitive(out);
  return out;
}

// r <- (p_lead / g) * r - (r_lead / g) * p, leading entries cancel.
IntRow eliminate(const IntRow& r, const IntRow& p) {
  const BigInt g = gcd(r.front().second, p.front().second);
  const BigInt a = p.front().second / g;
  const BigInt b = r.front().second / g;
  IntRow out;
  out.reserve(r.size() + p.size());
  std::size_t i = 1, k = 1;
  while (i < r.size() || k < p.size()) {
    if (k >= p.size() || (i < r.size() && r[i].first < p[k].first)) {
      out.emplace_back(r[i].first, BigInt(a * r[i].second));
      ++i;
    } else if (i >= r.size() || p[k].first < r[i].first) {
      out.emplace_back(p[k].first, BigInt(-b * p[k].second));
      ++k;
    } else {
      BigInt v = a * r[i].second - b * p[k].second;
      if (!v.is_zero()) out.emplace_back(r[i].first, std::move(v));
      ++i;
      ++k;
    }
  }
  make_primitive(out);
  return out;
}

}  // namespace

std::size_t exact_rank(const ExactSparse& m) {
  const bool real = m.is_real();
  const std::size_t rows = real ? m.rows() : 2 * m.rows();
  const std::size_t C = m.cols();
  std::vector<std::vector<std::pair<std::size_t, Rational>>> row_entries(rows);
  for (std::size_t j = 0; j < C; ++j) {
    for (const auto& [r, v] : m.column(j)) {
      if (real) {
        row_entries[r].emplace_back(j, v.re);
        continue;
      }
      // [[Re, -Im], [Im, Re]] doubles the rank over Q(i).
      if (!v.re.is_zero()) {
        row_entries[r].emplace_back(j, v.re);
        row_entries[m.rows() + r].emplace_back(C + j, v.re);
      }
      if (!v.im.is_zero()) {
        row_entries[r].emplace_back(C + j, -v.im);
        row_entries[m.rows() + r].emplace_back(j, v.im);
      }
    }
  }
  std::vector<IntRow> work;
  work.reserve(rows);
  for (const auto& re : row_entries)
    if (!re.empty()) work.push_back(integer_lift(re));
  // Sparse rows first keeps fill-in low.
  std::stable_sort(work.begin(), work.end(), [](const IntRow& a, const IntRow& b) { return a.size() < b.size(); });

  std::map<std::size_t, IntRow> pivots;
  for (IntRow& row : work) {
    while (!row.empty()) {
      auto it = pivots.find(row.front().first);
      if (it == pivots.end()) {
        const std::size_t lead = row.front().first;
        pivots.emplace(lead, std::move(row));
        break;
      }
      row = eliminate(row, it->second);
    }
  }
  const std::size_t rank = pivots.size();
  return real ? rank : rank / 2;
}

}  // namespace susyhom
