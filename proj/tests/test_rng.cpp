#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "turbcloud/errors.hpp"
#include "turbcloud/rng.hpp"

using namespace turbcloud;

TEST_CASE("identical (seed, stream) gives identical draws") {
  RngStream a(7, 0), b(7, 0);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.uniform() == b.uniform());
  }
}

TEST_CASE("distinct streams differ") {
  RngStream a(7, 0), b(7, 1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) {
    if (a.uniform() == b.uniform()) ++equal;
  }
  CHECK(equal == 0);
}

TEST_CASE("uniform range and mean") {
  RngStream rng(42, 0);
  double sum = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // 3 sigma of the mean of Uniform(0,1): 3 / sqrt(12 n) ~ 8.7e-4
  CHECK(sum / n > 0.499);
  CHECK(sum / n < 0.501);
}

TEST_CASE("substream correlation is negligible") {
  RngStream a(123, 1), b(123, 2);
  const int n = 100000;
  double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = a.uniform();
    ys[i] = b.uniform();
    sa += xs[i];
    sb += ys[i];
  }
  const double ma = sa / n, mb = sb / n;
  for (int i = 0; i < n; ++i) {
    sab += (xs[i] - ma) * (ys[i] - mb);
    saa += (xs[i] - ma) * (xs[i] - ma);
    sbb += (ys[i] - mb) * (ys[i] - mb);
  }
  CHECK(std::abs(sab / std::sqrt(saa * sbb)) < 0.01);
}

TEST_CASE("normal: degenerate std returns the mean exactly") {
  RngStream rng(5, 0);
  CHECK(rng.normal(3.25, 0.0) == 3.25);
  CHECK(rng.normal(-1.5, 0.0) == -1.5);
}

TEST_CASE("normal: negative std is an invalid parameter") {
  RngStream rng(5, 0);
  CHECK_THROWS_AS(rng.normal(0.0, -1.0), InvalidParameter);
}

TEST_CASE("normal: sample variance of 1e6 standard draws") {
  RngStream rng(31, 4);
  const int n = 1000000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal(0.0, 1.0);
    s += z;
    s2 += z * z;
  }
  const double mean = s / n;
  const double var = (s2 - n * mean * mean) / (n - 1);
  // chi-square interval at ~3.5 sigma: var(S^2) = 2/(n-1)
  CHECK(var > 0.99);
  CHECK(var < 1.01);
}

TEST_CASE("normal: affine law matches the standard normal (KS at 1%)") {
  RngStream rng(77, 0);
  const int n = 100000;
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = (rng.normal(2.0, 3.0) - 2.0) / 3.0;
  std::sort(z.begin(), z.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = 0.5 * std::erfc(-z[i] / std::sqrt(2.0));
    d = std::max(d, std::abs(cdf - (i + 1.0) / n));
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
  }
  // KS critical value at alpha = 0.01: 1.6276 / sqrt(n)
  CHECK(d < 1.6276 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("unit vectors: 1D is a fair sign") {
  RngStream rng(9, 0);
  int pos = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto v = rng.uniform_unit_vector(1);
    REQUIRE((v[0] == 1.0 || v[0] == -1.0));
    REQUIRE(v[1] == 0.0);
    if (v[0] > 0) ++pos;
  }
  CHECK(pos > 4700);
  CHECK(pos < 5300);
}

TEST_CASE("unit vectors: unit norm and isotropy in 3D") {
  RngStream rng(11, 0);
  const int n = 100000;
  double mean[3] = {0, 0, 0};
  for (int i = 0; i < n; ++i) {
    const auto v = rng.uniform_unit_vector(3);
    const double norm =
        std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    REQUIRE(std::abs(norm - 1.0) < 1e-12);
    for (int d = 0; d < 3; ++d) mean[d] += v[d];
  }
  for (int d = 0; d < 3; ++d) {
    CHECK(std::abs(mean[d] / n) < 0.01);
  }
}

TEST_CASE("unit vectors: 2D norm") {
  RngStream rng(13, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.uniform_unit_vector(2);
    CHECK(std::abs(std::sqrt(v[0] * v[0] + v[1] * v[1]) - 1.0) < 1e-12);
    CHECK(v[2] == 0.0);
  }
}
