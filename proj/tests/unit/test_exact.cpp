#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "susyhom/errors.hpp"
#include "susyhom/exact.hpp"
#include "susyhom/exact_matrix.hpp"

using namespace susyhom;

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5E2") == Rational(250));
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("007/010") == Rational(7, 10));
  CHECK(parse_rational("010") == Rational(10));
  CHECK(format_rational(Rational(6, 4)) == "3/2");
  CHECK(format_rational(Rational(-5)) == "-5");
  for (const char* bad : {"", "abc", "1/0", "1.2.3", "3/", "--1"}) CHECK_THROWS_AS(parse_rational(bad), InputError);
}

TEST_CASE("complex parsing and formatting round trip") {
  const ExactComplex z = parse_exact_complex("(1/2,-3)");
  CHECK(z.re == Rational(1, 2));
  CHECK(z.im == Rational(-3));
  CHECK(parse_exact_complex(format_exact_complex(z)) == z);
  CHECK(format_exact_complex(ExactComplex(Rational(7))) == "7");
  CHECK_THROWS_AS(parse_exact_complex("(1,2"), InputError);
  CHECK_THROWS_AS(parse_exact_complex("(1)"), InputError);
}

TEST_CASE("doubles convert without loss") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 200; ++k) {
    const double v = u(rng);
    CHECK(ExactComplex::from_double(v).to_complex().real() == v);
  }
  CHECK(ExactComplex::from_double(0.1).re != Rational(1, 10));
  CHECK_THROWS_AS(ExactComplex::from_double(std::numeric_limits<double>::infinity()), InputError);
}

TEST_CASE("Gaussian rational arithmetic") {
  const ExactComplex i = ExactComplex::imaginary_unit();
  CHECK(i * i == ExactComplex(-1));
  CHECK((ExactComplex(Rational(1), Rational(2)) * ExactComplex(Rational(3), Rational(-1))) ==
        ExactComplex(Rational(5), Rational(5)));
  CHECK(ExactComplex(Rational(3), Rational(4)).abs() == Catch::Approx(5.0));
}

namespace {

ExactSparse from_rows(const oracle::QMatrix& m) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  ExactSparse out(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    ExactSparse::Column col;
    for (std::size_t i = 0; i < rows; ++i)
      if (m[i][j] != 0) col.emplace_back(i, ExactComplex(m[i][j]));
    out.set_column(j, col);
  }
  return out;
}

}  // namespace

TEST_CASE("exact rank agrees with dense elimination") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-3, 3), dim(0, 9);
  std::bernoulli_distribution keep(0.35);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = dim(rng), c = dim(rng);
    oracle::QMatrix m(r, std::vector<oracle::Q>(c));
    for (auto& row : m)
      for (auto& x : row) x = keep(rng) ? oracle::Q(entry(rng), 1 + (entry(rng) + 3)) : oracle::Q(0);
    // Force some dependent rows.
    if (r >= 3)
      for (std::size_t j = 0; j < c; ++j) m[r - 1][j] = m[0][j] * 2 - m[1][j] / 3;
    INFO("trial " << trial);
    CHECK(exact_rank(from_rows(m)) == oracle::rank(m));
  }
}

TEST_CASE("exact rank over the Gaussian rationals") {
  // [[1, i], [i, -1]] has rank 1 over C but its entries are independent over R.
  ExactSparse m(2, 2);
  const ExactComplex i = ExactComplex::imaginary_unit();
  m.set_column(0, {{0, ExactComplex(1)}, {1, i}});
  m.set_column(1, {{0, i}, {1, ExactComplex(-1)}});
  CHECK(exact_rank(m) == 1);
  m.set_column(1, {{0, i}, {1, ExactComplex(1)}});
  CHECK(exact_rank(m) == 2);
  CHECK(exact_rank(ExactSparse(0, 5)) == 0);
}

TEST_CASE("sparse algebra shapes") {
  ExactSparse a(2, 3);
  a.set_column(0, {{1, ExactComplex(2)}});
  a.set_column(2, {{0, ExactComplex(Rational(1), Rational(1))}, {0, ExactComplex(1)}});
  const ExactSparse h = a.adjoint();
  CHECK(h.rows() == 3);
  CHECK(h.cols() == 2);
  CHECK(h.column(0).front().second == ExactComplex(Rational(2), Rational(-1)));
  const ExactSparse p = h * a;
  CHECK(p.rows() == 3);
  CHECK(p == p.adjoint());
  CHECK((a - a).is_zero());
  CHECK_THROWS_AS(a * a, InputError);
}
