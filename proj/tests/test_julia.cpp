#include <gtest/gtest.h>

#include <cmath>

#include "chaoscope/julia.hpp"
#include "support.hpp"

using namespace chaoscope;

namespace {

const RationalMap kSquare = RationalMap::quadratic(0.0);

SpherePoint pt(cplx z) { return SpherePoint::from_complex(z); }

TEST(Classify, SquareBasins) {
    const JuliaClassifier jc(kSquare);
    ASSERT_EQ(jc.cycles().size(), 2u);

    const auto in = jc.classify(pt(0.5));
    ASSERT_TRUE(in.convergent());
    EXPECT_LT(spherical_distance(jc.cycles()[in.cycle_id].points[0], pt(0.0)), 1e-12);

    const auto out = jc.classify(pt(2.0));
    ASSERT_TRUE(out.convergent());
    EXPECT_TRUE(jc.cycles()[out.cycle_id].points[0].is_infinity());
    EXPECT_NE(in.cycle_id, out.cycle_id);

    EXPECT_TRUE(jc.classify(SpherePoint::infinity()).convergent());
    EXPECT_EQ(jc.classify(pt(0.0)).iterations, 0u);
}

TEST(Classify, SquareUnitCircle) {
    // Rounding pushes the orbit off |z| = 1 after roughly 50 squarings, so the
    // budget stays below that.
    EXPECT_FALSE(classify_point(kSquare, pt(std::polar(1.0, kPi / 7)), 40).convergent());
    EXPECT_FALSE(classify_point(kSquare, pt(std::polar(1.0, 1.0)), 40).convergent());
}

TEST(Classify, MaxIterValidated) { EXPECT_THROW(classify_point(kSquare, pt(0.5), 0), std::invalid_argument); }

TEST(Classify, PeriodTwoBasin) {
    // z^2 - 1 has the superattracting cycle {0, -1}.
    const JuliaClassifier jc(RationalMap::quadratic(-1.0));
    int finite = -1;
    for (std::size_t i = 0; i < jc.cycles().size(); ++i) {
        if (jc.cycles()[i].points.size() == 2) finite = static_cast<int>(i);
    }
    ASSERT_GE(finite, 0);
    EXPECT_NEAR(jc.cycles()[finite].multiplier, 0.0, 1e-12);
    const auto c0 = jc.classify(pt(0.0));
    const auto c1 = jc.classify(pt(-1.0));
    ASSERT_TRUE(c0.convergent());
    ASSERT_TRUE(c1.convergent());
    EXPECT_EQ(c0.cycle_id, finite);
    EXPECT_EQ(c1.cycle_id, finite);
    EXPECT_NE(c0.phase, c1.phase);
}

TEST(Classify, MisiurewiczHasNoAttractingCycle) {
    // The critical orbit of z^2 + i lands on a repelling 2-cycle.
    const JuliaClassifier jc(RationalMap::quadratic(cplx(0.0, 1.0)));
    for (const auto& c : jc.cycles()) EXPECT_TRUE(c.points[0].is_infinity());
    EXPECT_FALSE(jc.classify(pt(0.0)).convergent());
}

TEST(Classify, LattesGridAllNonConvergent) {
    const JuliaClassifier jc(lattes_f());
    EXPECT_TRUE(jc.cycles().empty());
    int convergent = 0;
    for (int i = 0; i < 200; ++i) {
        for (int j = 0; j < 200; ++j) {
            const cplx z(-2.0 + 4.0 * (i + 0.5) / 200, -2.0 + 4.0 * (j + 0.5) / 200);
            convergent += jc.classify(pt(z)).convergent();
        }
    }
    EXPECT_EQ(convergent, 0);
}

TEST(Classify, ImageAdvancesPhaseProperty) {
    chaoscope::CounterRng rng(60);
    const RationalMap g = RationalMap::quadratic(-1.0);
    const JuliaClassifier jc(g);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        const SpherePoint z = testing_support::random_point(rng);
        const auto a = jc.classify(z);
        const auto b = jc.classify(evaluate(g, z));
        EXPECT_EQ(a.convergent(), b.convergent());
        if (!a.convergent() || !b.convergent()) continue;
        EXPECT_EQ(a.cycle_id, b.cycle_id);
        const int period = static_cast<int>(jc.cycles()[a.cycle_id].points.size());
        EXPECT_EQ(b.phase, (a.phase + 1) % period);
        ++checked;
    }
    EXPECT_GT(checked, 200);
}

TEST(Classify, ConjugationPreservesStability) {
    chaoscope::CounterRng rng(61);
    const Mobius m(cplx(1.0, 0.2), cplx(0.3, -0.1), cplx(-0.2, 0.4), cplx(0.9, 0.1));
    const RationalMap g = RationalMap::quadratic(cplx(-0.12, 0.75));
    const JuliaClassifier direct(g);
    const JuliaClassifier conj(conjugate(g, m));
    EXPECT_EQ(direct.cycles().size(), conj.cycles().size());
    int agree = 0;
    const int n = 300;
    for (int i = 0; i < n; ++i) {
        const SpherePoint z = testing_support::random_point(rng);
        agree += direct.classify(m.apply(z)).convergent() == conj.classify(z).convergent();
    }
    // Points within the tolerance band of the Julia set may flip.
    EXPECT_GE(agree, n - 3);
}

TEST(CaptureExpansion, SquareDistanceEstimate) {
    const JuliaClassifier jc(kSquare);
    // Near |z| = 1 the estimate capture / expansion tracks the distance to the circle.
    for (double r : {0.9, 0.99, 0.999}) {
        const auto le = jc.capture_log_expansion(pt(r), 0.05);
        ASSERT_TRUE(le.has_value());
        const double est = 0.05 / std::exp(*le);
        const double dist = spherical_distance(pt(r), pt(1.0));
        EXPECT_GT(est / dist, 0.1) << r;
        EXPECT_LT(est / dist, 10.0) << r;
    }
    EXPECT_FALSE(JuliaClassifier(lattes_f()).capture_log_expansion(pt(0.3), 0.05).has_value());
}

}  // namespace
