#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tcmerton/discounting.hpp"
#include "tcmerton/quadrature.hpp"

using namespace tcmerton;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::ParseError;
}

std::vector<DiscountSpec> sample_specs() {
    return {Exponential{0.1},        Exponential{0.03},          TypeI{0.5, 0.2, 0.1},  TypeI{0.4, 0.1, 0.05},
            TypeI{0.998, 0.09, 0.07}, TypeI{0.0, 0.3, 0.1},       TypeI{1.0, 0.3, 0.1},  TypeII{0.2, 0.1},
            TypeII{1.0, 1.0},         TypeII{0.0, 0.15},          TypeII{0.05, 0.3}};
}

}  // namespace

TEST(Validate, AcceptsValidSpecs) {
    for (const auto& s : sample_specs()) EXPECT_NO_THROW(validate(s));
}

TEST(Validate, RejectsBadParameters) {
    EXPECT_EQ(kind_of([] { validate(TypeI{1.5, 0.1, 0.05}); }), ErrorKind::WeightOutOfRange);
    EXPECT_EQ(kind_of([] { validate(TypeI{-0.1, 0.1, 0.05}); }), ErrorKind::WeightOutOfRange);
    EXPECT_EQ(kind_of([] { validate(TypeII{0.2, 0.0}); }), ErrorKind::NonPositiveRate);
    EXPECT_EQ(kind_of([] { validate(TypeII{-0.2, 0.1}); }), ErrorKind::WeightOutOfRange);
    EXPECT_EQ(kind_of([] { validate(Exponential{0.0}); }), ErrorKind::NonPositiveRate);
    EXPECT_EQ(kind_of([] { validate(Exponential{-1.0}); }), ErrorKind::NonPositiveRate);
    EXPECT_EQ(kind_of([] { validate(TypeI{0.5, 0.1, 0.0}); }), ErrorKind::NonPositiveRate);
    EXPECT_EQ(kind_of([] { validate(Exponential{std::nan("")}); }), ErrorKind::NonPositiveRate);
}

TEST(Evaluate, HandValues) {
    EXPECT_EQ(evaluate(Exponential{0.1}, 0.0), 1.0);
    EXPECT_NEAR(evaluate(TypeI{0.5, 0.1, 0.1}, 2.0), 0.818730753077982, 1e-14);
    // (1 + t) e^{-t} at t = 1, and via its Taylor series as an independent check.
    EXPECT_NEAR(evaluate(TypeII{1.0, 1.0}, 1.0), 0.735758882342885, 1e-14);
    double series = 0.0, term = 1.0;
    for (int n = 0; n < 40; ++n) {
        series += term;
        term *= -1.0 / (n + 1);
    }
    EXPECT_NEAR(evaluate(TypeII{1.0, 1.0}, 1.0), 2.0 * series, 1e-14);
}

TEST(Evaluate, NegativeTimeRejected) {
    EXPECT_EQ(kind_of([] { evaluate(Exponential{0.1}, -1e-9); }), ErrorKind::NegativeTime);
}

TEST(Evaluate, NonNegativeAndUnitAtZero) {
    for (const auto& s : sample_specs()) {
        EXPECT_EQ(evaluate(s, 0.0), 1.0);
        for (int i = 0; i <= 100; ++i) EXPECT_GE(evaluate(s, 0.5 * i), 0.0);
    }
}

TEST(ImpatienceRate, HandValues) {
    for (double t : {0.0, 1.0, 7.5, 100.0}) EXPECT_NEAR(impatience_rate(Exponential{0.1}, t), 0.1, 1e-15);
    EXPECT_NEAR(impatience_rate(TypeII{1.0, 1.0}, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(impatience_rate(TypeI{0.5, 0.2, 0.1}, 500.0), 0.1, 1e-12);
}

TEST(ImpatienceRate, MatchesFiniteDifferenceOfLog) {
    for (const auto& s : sample_specs()) {
        for (double t : {0.5, 2.0, 10.0}) {
            const double h = 1e-5;
            const double fd = -(std::log(evaluate(s, t + h)) - std::log(evaluate(s, t - h))) / (2 * h);
            EXPECT_NEAR(impatience_rate(s, t), fd, 1e-8);
        }
    }
}

TEST(ImpatienceRate, ConstantOnlyForExponential) {
    for (double l : {0.1, 0.5, 0.9})
        for (auto [r1, r2] : {std::pair{0.2, 0.05}, std::pair{0.1, 0.3}}) {
            const TypeI s{l, r1, r2};
            EXPECT_GT(std::abs(impatience_rate(s, 0.0) - impatience_rate(s, 10.0)), 1e-6);
        }
}

TEST(ImpatienceRate, ZeroWeightRejected) {
    EXPECT_EQ(kind_of([] { impatience_rate(Exponential{1.0}, 1e5); }), ErrorKind::ZeroDiscountWeight);
}

TEST(HjbCoefficients, TableValues) {
    auto e = hjb_coefficients(Exponential{0.1});
    EXPECT_EQ(e.alpha1, 0.1);
    EXPECT_EQ(e.alpha2, 0.0);
    EXPECT_EQ(e.beta1, 0.0);
    EXPECT_EQ(e.beta2, 0.0);

    auto t1 = hjb_coefficients(TypeI{0.4, 0.1, 0.05});
    EXPECT_NEAR(t1.alpha1, 0.07, 1e-15);
    EXPECT_NEAR(t1.alpha2, 0.05, 1e-15);
    EXPECT_NEAR(t1.beta1, 0.012, 1e-15);
    EXPECT_NEAR(t1.beta2, 0.08, 1e-15);

    auto t2 = hjb_coefficients(TypeII{0.2, 0.1});
    EXPECT_NEAR(t2.alpha1, -0.1, 1e-15);
    EXPECT_NEAR(t2.alpha2, -0.2, 1e-15);
    EXPECT_NEAR(t2.beta1, 0.2, 1e-15);
    EXPECT_NEAR(t2.beta2, 0.3, 1e-15);
}

TEST(HjbCoefficients, TypeIEndpointsDecouple) {
    EXPECT_EQ(hjb_coefficients(TypeI{0.0, 0.3, 0.1}).beta1, 0.0);
    EXPECT_EQ(hjb_coefficients(TypeI{1.0, 0.3, 0.1}).beta1, 0.0);
}

TEST(ExpWeightedIntegral, HandValues) {
    auto a = exp_weighted_integral(Exponential{1.0}, 0.0);
    EXPECT_TRUE(a.convergent);
    EXPECT_NEAR(a.value, 1.0, 1e-15);
    auto b = exp_weighted_integral(TypeI{0.5, 0.2, 0.1}, 0.05);
    EXPECT_TRUE(b.convergent);
    EXPECT_NEAR(b.value, 0.5 / 0.15 + 0.5 / 0.05, 1e-12);
    EXPECT_FALSE(exp_weighted_integral(TypeII{0.1, 0.2}, 0.3).convergent);
    EXPECT_FALSE(exp_weighted_integral(Exponential{0.1}, 0.1).convergent);
}

TEST(ExpWeightedIntegral, AgreesWithSimpsonOracle) {
    for (const auto& s : sample_specs()) {
        const double rate = dominant_rate(s);
        for (double a : {-0.1, 0.0, 0.5 * rate}) {
            const auto closed = exp_weighted_integral(s, a);
            ASSERT_TRUE(closed.convergent);
            // Integrate far enough that the remainder is below double precision of the total.
            const double U = 60.0 / (rate - a);
            const double num = oracle::simpson([&](double u) { return evaluate(s, u) * std::exp(a * u); }, 0.0, U, 400000);
            EXPECT_LT(oracle::rel_err(closed.value, num), 1e-8) << kind_name(s) << " a=" << a;
        }
    }
}

TEST(ExpWeightedIntegral, AgreesWithAdaptiveQuadrature) {
    for (const auto& s : sample_specs()) {
        const double a = 0.5 * dominant_rate(s);
        const double closed = exp_weighted_integral(s, a).value;
        EXPECT_LT(oracle::rel_err(exp_weighted_integral_quadrature(s, a), closed), 1e-8) << kind_name(s);
    }
}

TEST(ExpWeightedTail, MatchesClosedFormDifference) {
    for (const auto& s : sample_specs()) {
        const double a = 0.3 * dominant_rate(s);
        const double H = 7.0;
        const double head = oracle::simpson([&](double u) { return evaluate(s, u) * std::exp(a * u); }, 0.0, H, 20000);
        EXPECT_NEAR(exp_weighted_tail(s, a, H), exp_weighted_integral(s, a).value - head, 1e-9);
    }
}

TEST(HorizonForTail, TailBelowTolerance) {
    for (const auto& s : sample_specs()) {
        const double a = 0.5 * dominant_rate(s);
        const double H = horizon_for_tail(s, a, 1e-10);
        EXPECT_LE(exp_weighted_tail(s, a, H), 1e-10);
    }
}

TEST(Degenerate, TypeICollapsesToExponential) {
    const double d = 0.1;
    const Exponential e{d};
    for (const DiscountSpec& s : {DiscountSpec{TypeI{0.3, d, d}}, DiscountSpec{TypeI{0.0, 0.4, d}},
                                  DiscountSpec{TypeI{1.0, d, 0.4}}}) {
        for (double t : {0.0, 0.5, 3.0, 20.0}) {
            EXPECT_NEAR(evaluate(s, t), evaluate(e, t), 1e-12);
            EXPECT_NEAR(impatience_rate(s, t), impatience_rate(e, t), 1e-12);
        }
        for (double a : {-0.2, 0.0, 0.05})
            EXPECT_NEAR(exp_weighted_integral(s, a).value, exp_weighted_integral(e, a).value, 1e-12);
    }
}

TEST(Degenerate, TypeIIWithoutSlopeIsExponential) {
    const TypeII s{0.0, 0.15};
    const Exponential e{0.15};
    for (double t : {0.0, 0.5, 3.0, 20.0}) {
        EXPECT_EQ(evaluate(s, t), evaluate(e, t));
        EXPECT_EQ(impatience_rate(s, t), impatience_rate(e, t));
    }
    EXPECT_EQ(exp_weighted_integral(s, 0.05).value, exp_weighted_integral(e, 0.05).value);
}

TEST(Scaled, MatchesProductWhereRepresentable) {
    for (const auto& s : sample_specs())
        for (double t : {0.0, 1.0, 40.0})
            EXPECT_LT(oracle::rel_err(scaled(s, t, 0.3 * t), evaluate(s, t) * std::exp(0.3 * t)), 1e-13);
    EXPECT_TRUE(std::isfinite(scaled(TypeI{0.998, 0.0889, 0.0689}, 5e4, 0.068 * 5e4)));
}
