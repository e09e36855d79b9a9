#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hilfer/specfun.hpp"
#include "reference_values.hpp"

using hilfer::EvalPolicy;
using hilfer::MittagLeffler;
using hilfer::MLParams;
namespace ref = hilfer::ref;

TEST_CASE("gamma matches reference values") {
  CHECK(hilfer::gamma(0.5) == doctest::Approx(ref::kGammaHalf).epsilon(1e-15));
  CHECK(hilfer::gamma(0.75) == doctest::Approx(ref::kGamma34).epsilon(1e-15));
  CHECK(hilfer::gamma(0.875) == doctest::Approx(ref::kGamma78).epsilon(1e-15));
  CHECK(hilfer::gamma(0.375) == doctest::Approx(ref::kGamma38).epsilon(1e-15));
  CHECK(1.0 / hilfer::gamma(0.75) ==
        doctest::Approx(ref::kRecipGamma34).epsilon(1e-15));
  CHECK(hilfer::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hilfer::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(hilfer::gamma(1.75) == doctest::Approx(ref::kGamma74).epsilon(1e-15));
}

TEST_CASE("gamma reflection covers negative arguments") {
  CHECK(hilfer::gamma(-0.5) ==
        doctest::Approx(-2.0 * ref::kGammaHalf).epsilon(1e-14));
  CHECK(hilfer::gamma(-1.5) ==
        doctest::Approx(4.0 / 3.0 * ref::kGammaHalf).epsilon(1e-14));
}

TEST_CASE("gamma rejects poles and non-finite input") {
  CHECK_THROWS_AS(hilfer::gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(hilfer::gamma(-3.0), std::domain_error);
  CHECK_THROWS_AS(hilfer::gamma(std::nan("")), std::domain_error);
}

TEST_CASE("mittag-leffler collapses to exp for alpha = beta = 1") {
  const MittagLeffler e11(MLParams{1.0, 1.0});
  for (double z = -5.0; z <= 2.0 + 1e-12; z += 0.125) {
    CHECK(e11(z) == doctest::Approx(std::exp(z)).epsilon(1e-12));
  }
  CHECK(e11(-5.0) == doctest::Approx(ref::kExpNeg5).epsilon(1e-13));
}

TEST_CASE("mittag-leffler erfc identity at alpha = 1/2") {
  const MittagLeffler eh(MLParams{0.5, 1.0});
  CHECK(eh(-0.5) == doctest::Approx(ref::kMlHalfAtHalf).epsilon(1e-12));
  CHECK(eh(-1.0) == doctest::Approx(ref::kMlHalfAtOne).epsilon(1e-12));
  CHECK(eh(-2.0) == doctest::Approx(ref::kMlHalfAtTwo).epsilon(1e-12));
  for (double x : {0.5, 1.0, 2.0}) {
    const double expected = std::exp(x * x) * std::erfc(x);
    CHECK(eh(-x) == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("mittag-leffler beta = 2 closed form") {
  const MittagLeffler e12(MLParams{1.0, 2.0});
  for (double z : {-3.0, -1.0, -0.25, 0.5, 2.0}) {
    CHECK(e12(z) == doctest::Approx(std::expm1(z) / z).epsilon(1e-13));
  }
  CHECK(e12(0.0) == doctest::Approx(1.0));
}

TEST_CASE("mittag-leffler series zone references") {
  CHECK(hilfer::mittag_leffler(MLParams{0.75, 0.75}, 0.0) ==
        doctest::Approx(ref::kMl_34_34_0).epsilon(1e-14));
  CHECK(hilfer::mittag_leffler(MLParams{0.75, 0.75}, -1.0) ==
        doctest::Approx(ref::kMl_34_34_1).epsilon(1e-13));
  CHECK(hilfer::mittag_leffler(MLParams{0.75, 0.75}, -5.0) ==
        doctest::Approx(ref::kMl_34_34_5).epsilon(1e-12));
  CHECK(hilfer::mittag_leffler(MLParams{0.75, 0.75}, -7.0) ==
        doctest::Approx(ref::kMl_34_34_7).epsilon(1e-12));
  CHECK(hilfer::mittag_leffler(MLParams{0.75, 1.0}, -5.0) ==
        doctest::Approx(ref::kMl_34_1_5).epsilon(1e-12));
  CHECK(hilfer::mittag_leffler(MLParams{0.75, 0.875}, -1.0) ==
        doctest::Approx(ref::kMl_34_78_1).epsilon(1e-13));
  CHECK(hilfer::mittag_leffler(MLParams{0.75, 0.875}, -5.0) ==
        doctest::Approx(ref::kMl_34_78_5).epsilon(1e-12));
  CHECK(hilfer::mittag_leffler(MLParams{0.9, 1.0}, -2.0) ==
        doctest::Approx(ref::kMl_910_1_2).epsilon(1e-13));
  CHECK(hilfer::mittag_leffler(MLParams{0.6, 1.3}, -4.0) ==
        doctest::Approx(ref::kMl_35_1310_4).epsilon(1e-12));
  CHECK(hilfer::mittag_leffler(MLParams{0.25, 1.0}, -1.0) ==
        doctest::Approx(ref::kMl_14_1_1).epsilon(1e-13));
  CHECK(hilfer::mittag_leffler(MLParams{0.75, 2.0}, -6.0) ==
        doctest::Approx(ref::kMl_34_2_6).epsilon(1e-12));
}

TEST_CASE("series seam literal at conditioning 16") {
  // |z| = 8 and alpha = 3/4 sit exactly on the m = |z|^{1/a} = 16 seam, the
  // worst-conditioned point the series is still asked to handle.
  CHECK(hilfer::mittag_leffler(MLParams{0.75, 1.5}, -8.0) ==
        doctest::Approx(ref::kMl_34_32_8).epsilon(5e-11));
  // alpha = 1/2 at |z| = 5 lands just past the seam (m = 25), integral zone.
  CHECK(hilfer::mittag_leffler(MLParams{0.5, 0.5}, -5.0) ==
        doctest::Approx(ref::kMl_12_12_5).epsilon(1e-12));
  CHECK(hilfer::mittag_leffler(MLParams{0.5, 1.0}, -5.0) ==
        doctest::Approx(ref::kMl_12_1_5).epsilon(1e-12));
}

TEST_CASE("spectral integral zone references") {
  // alpha = 3/4, |z| = 12: conditioning 27.5 lies between the seams 16, 30.
  const MittagLeffler e3434(MLParams{0.75, 0.75});
  const MittagLeffler e341(MLParams{0.75, 1.0});
  CHECK(e3434(-12.0) == doctest::Approx(ref::kMl_34_34_12).epsilon(1e-11));
  CHECK(e341(-12.0) == doctest::Approx(ref::kMl_34_1_12).epsilon(1e-11));
  CHECK(e3434.eval_integral(-12.0) ==
        doctest::Approx(ref::kMl_34_34_12).epsilon(1e-11));
}

TEST_CASE("asymptotic zone references") {
  CHECK(hilfer::mittag_leffler(MLParams{0.75, 0.75}, -20.0) ==
        doctest::Approx(ref::kMl_34_34_20).epsilon(1e-10));
  CHECK(hilfer::mittag_leffler(MLParams{0.75, 0.75}, -25.0) ==
        doctest::Approx(ref::kMl_34_34_25).epsilon(1e-10));
  CHECK(hilfer::mittag_leffler(MLParams{0.75, 1.0}, -25.0) ==
        doctest::Approx(ref::kMl_34_1_25).epsilon(1e-10));
  CHECK(hilfer::mittag_leffler(MLParams{0.75, 0.875}, -14.0) ==
        doctest::Approx(ref::kMl_34_78_14).epsilon(1e-10));
  CHECK(hilfer::mittag_leffler(MLParams{0.5, 0.5}, -12.0) ==
        doctest::Approx(ref::kMl_12_12_12).epsilon(1e-10));
  CHECK(hilfer::mittag_leffler(MLParams{0.5, 0.5}, -25.0) ==
        doctest::Approx(ref::kMl_12_12_25).epsilon(1e-10));
  CHECK(hilfer::mittag_leffler(MLParams{0.5, 1.0}, -12.0) ==
        doctest::Approx(ref::kMl_12_1_12).epsilon(1e-10));
  CHECK(hilfer::mittag_leffler(MLParams{0.5, 1.0}, -25.0) ==
        doctest::Approx(ref::kMl_12_1_25).epsilon(1e-10));
  CHECK(hilfer::mittag_leffler(MLParams{0.25, 1.0}, -3.0) ==
        doctest::Approx(ref::kMl_14_1_3).epsilon(1e-10));
  CHECK(hilfer::mittag_leffler(MLParams{0.25, 0.25}, -3.0) ==
        doctest::Approx(ref::kMl_14_14_3).epsilon(1e-10));
  CHECK(hilfer::mittag_leffler(MLParams{0.5, 1.0}, -14.86) ==
        doctest::Approx(ref::kMl_12_1_1486).epsilon(1e-10));
}

TEST_CASE("zone dispatch is continuous across the seams") {
  // values straddling each seam must agree to the tail tolerance
  const MittagLeffler e(MLParams{0.75, 0.75});
  const double z_lo = -std::pow(16.0, 0.75) + 1e-9;
  const double z_hi = -std::pow(16.0, 0.75) - 1e-9;
  CHECK(e(z_lo) == doctest::Approx(e(z_hi)).epsilon(1e-9));
  const double z2_lo = -std::pow(30.0, 0.75) + 1e-9;
  const double z2_hi = -std::pow(30.0, 0.75) - 1e-9;
  CHECK(e(z2_lo) == doctest::Approx(e(z2_hi)).epsilon(1e-8));
}

TEST_CASE("positive arguments use the series") {
  // E_{1/2,1}(x) = e^{x^2} erfc(-x) for x > 0
  const MittagLeffler eh(MLParams{0.5, 1.0});
  for (double x : {0.25, 1.0, 2.0}) {
    const double expected = std::exp(x * x) * std::erfc(-x);
    CHECK(eh(x) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("mittag-leffler rejects bad parameters and arguments") {
  CHECK_THROWS_AS(MittagLeffler(MLParams{0.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(MittagLeffler(MLParams{2.5, 1.0}), std::domain_error);
  CHECK_THROWS_AS(MittagLeffler(MLParams{0.75, -0.5}), std::domain_error);
  const MittagLeffler e(MLParams{0.75, 1.0});
  CHECK_THROWS_AS(e(std::nan("")), std::domain_error);
}

TEST_CASE("middle zone without integral support reports its accuracy") {
  // alpha > 0.95 disables the spectral integral; beta = 1 leaves no
  // reduction, so the middle zone must refuse rather than return garbage.
  const MittagLeffler e(MLParams{0.97, 1.0});
  const double z = -std::pow(20.0, 0.97);
  CHECK_THROWS_AS(e(z), hilfer::accuracy_error);
  try {
    e(z);
  } catch (const hilfer::accuracy_error& err) {
    CHECK(err.achieved() > 0.0);
  }
}

TEST_CASE("series cap surfaces as accuracy_error") {
  EvalPolicy tight;
  tight.series_terms_max = 3;
  CHECK_THROWS_AS(hilfer::mittag_leffler(MLParams{0.75, 0.75}, -5.0, tight),
                  hilfer::accuracy_error);
}

TEST_CASE("wright function reference values") {
  CHECK(hilfer::wright_m(0.25, 0.5) ==
        doctest::Approx(ref::kWright_14_05).epsilon(1e-12));
  CHECK(hilfer::wright_m(0.25, 1.0) ==
        doctest::Approx(ref::kWright_14_1).epsilon(1e-12));
  CHECK(hilfer::wright_m(0.25, 5.0) ==
        doctest::Approx(ref::kWright_14_5).epsilon(1e-12));
  CHECK(hilfer::wright_m(0.25, 12.0) ==
        doctest::Approx(ref::kWright_14_12).epsilon(1e-11));
  CHECK(hilfer::wright_m(0.25, 25.0) ==
        doctest::Approx(ref::kWright_14_25).epsilon(1e-10));
  CHECK(hilfer::wright_m(0.25, 40.0) ==
        doctest::Approx(ref::kWright_14_40).epsilon(1e-10));
  CHECK(hilfer::wright_m(0.5, 0.5) ==
        doctest::Approx(ref::kWright_12_05).epsilon(1e-12));
  CHECK(hilfer::wright_m(0.5, 1.0) ==
        doctest::Approx(ref::kWright_12_1).epsilon(1e-12));
  CHECK(hilfer::wright_m(0.5, 2.0) ==
        doctest::Approx(ref::kWright_12_2).epsilon(1e-12));
  CHECK(hilfer::wright_m(0.5, 5.0) ==
        doctest::Approx(ref::kWright_12_5).epsilon(1e-12));
  CHECK(hilfer::wright_m(0.5, 8.0) ==
        doctest::Approx(ref::kWright_12_8).epsilon(1e-11));
  CHECK(hilfer::wright_m(0.5, 10.0) ==
        doctest::Approx(ref::kWright_12_10).epsilon(1e-11));
  CHECK(hilfer::wright_m(0.5, 12.0) ==
        doctest::Approx(ref::kWright_12_12).epsilon(1e-10));
  CHECK(hilfer::wright_m(0.75, 0.25) ==
        doctest::Approx(ref::kWright_34_025).epsilon(1e-12));
  CHECK(hilfer::wright_m(0.75, 1.0) ==
        doctest::Approx(ref::kWright_34_1).epsilon(1e-12));
  CHECK(hilfer::wright_m(0.75, 1.8) ==
        doctest::Approx(ref::kWright_34_18).epsilon(1e-12));
  CHECK(hilfer::wright_m(0.75, 2.6) ==
        doctest::Approx(ref::kWright_34_26).epsilon(1e-11));
  CHECK(hilfer::wright_m(0.75, 3.5) ==
        doctest::Approx(ref::kWright_34_35).epsilon(1e-10));
  CHECK(hilfer::wright_m(0.9, 0.9) ==
        doctest::Approx(ref::kWright_910_09).epsilon(1e-11));
  CHECK(hilfer::wright_m(0.9, 1.4) ==
        doctest::Approx(ref::kWright_910_14).epsilon(1e-11));
  CHECK(hilfer::wright_m(0.66, 2.0) ==
        doctest::Approx(ref::kWright_66_2).epsilon(1e-11));
}

TEST_CASE("wright at theta = 0 equals 1/Gamma(1-alpha)") {
  for (double a : {0.25, 0.5, 0.75}) {
    CHECK(hilfer::wright_m(a, 0.0) ==
          doctest::Approx(1.0 / hilfer::gamma(1.0 - a)).epsilon(1e-14));
  }
  CHECK(hilfer::wright_m(0.5, 0.0) ==
        doctest::Approx(ref::kRecipGammaHalf).epsilon(1e-14));
}

TEST_CASE("wright rejects parameters outside the open unit interval") {
  CHECK_THROWS_AS(hilfer::wright_m(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(hilfer::wright_m(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(hilfer::wright_m(0.5, -1.0), std::domain_error);
}

TEST_CASE("wright moments match the gamma-ratio identity") {
  CHECK(hilfer::wright_m_moment(0.25, 0.0) ==
        doctest::Approx(ref::kWrightMoment_14_0).epsilon(1e-11));
  CHECK(hilfer::wright_m_moment(0.25, 1.0) ==
        doctest::Approx(ref::kWrightMoment_14_1).epsilon(1e-11));
  CHECK(hilfer::wright_m_moment(0.25, 2.0) ==
        doctest::Approx(ref::kWrightMoment_14_2).epsilon(1e-11));
  CHECK(hilfer::wright_m_moment(0.25, 3.5) ==
        doctest::Approx(ref::kWrightMoment_14_72).epsilon(1e-11));
  CHECK(hilfer::wright_m_moment(0.5, 1.0) ==
        doctest::Approx(ref::kWrightMoment_12_1).epsilon(1e-11));
  CHECK(hilfer::wright_m_moment(0.5, 2.0) ==
        doctest::Approx(ref::kWrightMoment_12_2).epsilon(1e-11));
  CHECK(hilfer::wright_m_moment(0.5, 3.5) ==
        doctest::Approx(ref::kWrightMoment_12_72).epsilon(1e-11));
  CHECK(hilfer::wright_m_moment(0.75, 1.0) ==
        doctest::Approx(ref::kWrightMoment_34_1).epsilon(1e-11));
  CHECK(hilfer::wright_m_moment(0.75, 2.0) ==
        doctest::Approx(ref::kWrightMoment_34_2).epsilon(1e-11));
  CHECK(hilfer::wright_m_moment(0.75, 3.5) ==
        doctest::Approx(ref::kWrightMoment_34_72).epsilon(1e-11));
  // identity form, independent of the frozen table
  for (double a : {0.25, 0.5, 0.75}) {
    for (double s : {0.0, 1.0, 2.0, 3.5}) {
      const double expected = hilfer::gamma(1.0 + s) / hilfer::gamma(1.0 + a * s);
      CHECK(hilfer::wright_m_moment(a, s) ==
            doctest::Approx(expected).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(hilfer::wright_m_moment(0.5, -0.75), std::domain_error);
}

TEST_CASE("wright laplace transform identity") {
  for (double a : {0.5, 0.75}) {
    for (double r : {1.0, 2.0}) {
      CHECK(hilfer::wright_laplace_check(a, r) <= 1e-9);
    }
  }
  CHECK(std::exp(-std::pow(1.0, 0.5)) ==
        doctest::Approx(ref::kLaplaceRhs_12_1).epsilon(1e-15));
  CHECK(std::exp(-std::pow(2.0, 0.5)) ==
        doctest::Approx(ref::kLaplaceRhs_12_2).epsilon(1e-15));
  CHECK(std::exp(-std::pow(1.0, 0.75)) ==
        doctest::Approx(ref::kLaplaceRhs_34_1).epsilon(1e-15));
  CHECK(std::exp(-std::pow(2.0, 0.75)) ==
        doctest::Approx(ref::kLaplaceRhs_34_2).epsilon(1e-15));
  CHECK_THROWS_AS(hilfer::wright_laplace_check(0.5, -1.0), std::domain_error);
}
