#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "groundflow/warp.hpp"

using namespace groundflow;

namespace {

// Independent scalar oracle in extended precision.
double weight_ref(double l, double lambda) {
    const long double e = 4.0L * lambda * l - 10.0L;
    return static_cast<double>(1.0L / (1.0L + std::exp(e)));
}

std::vector<double> random_values(std::mt19937_64& gen, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(gen);
    return v;
}

// Textbook O(N^2) sum, written independently of the library's dense path.
std::vector<double> reconstruct_ref(const GroundGrid& g, const std::vector<double>& x, const std::vector<double>& dx,
                                    const std::vector<double>& dy, double lambda) {
    std::vector<double> out(g.cells(), 0.0);
    for (int jy = 0; jy < g.height(); ++jy)
        for (int jx = 0; jx < g.width(); ++jx)
            for (int iy = 0; iy < g.height(); ++iy)
                for (int ix = 0; ix < g.width(); ++ix) {
                    const auto i = g.index(ix, iy);
                    const double l = std::hypot(jx - ix - dx[i], jy - iy - dy[i]);
                    out[g.index(jx, jy)] += x[i] * weight_ref(l, lambda);
                }
    return out;
}

}  // namespace

TEST(Weight, Anchors) {
    EXPECT_EQ(weight(0.5, 5.0), 0.5);
    EXPECT_NEAR(weight(0.0, 0.8), 1.0 / (1.0 + std::exp(-10.0)), 1e-15);
    EXPECT_NEAR(weight(0.0, 3.7), 0.9999546021312976, 1e-12);
    EXPECT_NEAR(weight(2.0, 0.8), 0.97340, 5e-6);
    EXPECT_NEAR(weight(2.0, 0.8), weight_ref(2.0, 0.8), 1e-15);
}

TEST(Weight, DecreasingAndSaturating) {
    for (double lambda : {0.8, 2.0, 5.0}) {
        double prev = 2.0;
        for (double l = 0.0; l < 6.0; l += 0.01) {
            const double w = weight(l, lambda);
            // strict until the exponent clamp at 60, flat after it
            if (4 * lambda * l - 10 < 59.9)
                EXPECT_LT(w, prev) << l;
            else
                EXPECT_LE(w, prev) << l;
            EXPECT_GT(w, 0.0);
            prev = w;
        }
    }
    EXPECT_GE(weight(1e6, 5.0), 0.0);
    EXPECT_TRUE(std::isfinite(weight(1e6, 5.0)));
}

TEST(Weight, DerivativeMatchesDifference) {
    for (double lambda : {0.8, 5.0})
        for (double l : {0.1, 0.5, 1.3, 2.9}) {
            const double h = 1e-6;
            const double numeric = (weight(l + h, lambda) - weight(l - h, lambda)) / (2 * h);
            EXPECT_NEAR(weight_derivative(l, lambda), numeric, 1e-6 * (1 + std::abs(numeric)));
        }
}

TEST(ReconstructDense, ZeroInputGivesZero) {
    GroundGrid g(6, 5);
    std::vector<double> x(g.cells(), 0.0), dx(g.cells(), 1.3), dy(g.cells(), -0.4);
    const auto out = reconstruct_dense(g, x, dx, dy, 0.8);
    for (double v : out.values) EXPECT_EQ(v, 0.0);
}

TEST(ReconstructDense, ShiftedPeak) {
    GroundGrid g(16, 16);
    std::vector<double> x(g.cells(), 0.0), dx(g.cells(), 2.0), dy(g.cells(), 1.0);
    x[g.index(5, 5)] = 1.0;
    const auto out = reconstruct_dense(g, x, dx, dy, 5.0);
    const auto best = std::max_element(out.values.begin(), out.values.end()) - out.values.begin();
    EXPECT_EQ(best, static_cast<long>(g.index(7, 6)));
    EXPECT_NEAR(out.at(7, 6), 0.9999546021312976, 1e-12);
    EXPECT_NEAR(out.at(8, 6), 1.0 / (1.0 + std::exp(10.0)), 1e-12);
}

TEST(ReconstructDense, SuperposesCollidingPeaks) {
    GroundGrid g(10, 10);
    std::vector<double> x(g.cells(), 0.0), dx(g.cells(), 0.0), dy(g.cells(), 0.0);
    x[g.index(2, 4)] = 1.0;
    x[g.index(6, 4)] = 1.0;
    dx[g.index(2, 4)] = 2.0;
    dx[g.index(6, 4)] = -2.0;
    const auto out = reconstruct_dense(g, x, dx, dy, 5.0);
    EXPECT_NEAR(out.at(4, 4), 2.0 * weight_ref(0.0, 5.0), 1e-12);
}

TEST(ReconstructDense, MatchesTextbookSum) {
    std::mt19937_64 gen(11);
    GroundGrid g(7, 6);
    const auto x = random_values(gen, g.cells(), 0.0, 1.0);
    const auto dx = random_values(gen, g.cells(), -3.0, 3.0);
    const auto dy = random_values(gen, g.cells(), -3.0, 3.0);
    for (double lambda : {0.8, 2.3, 5.0}) {
        const auto ref = reconstruct_ref(g, x, dx, dy, lambda);
        const auto out = reconstruct_dense(g, x, dx, dy, lambda);
        for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(out.values[k], ref[k], 1e-12);
    }
}

TEST(Reconstruct, WindowedEqualsDenseWithinWindow) {
    std::mt19937_64 gen(5);
    GroundGrid g(32, 32);
    for (double lambda : {0.8, 5.0}) {
        auto x = random_values(gen, g.cells(), 0.0, 1.0);
        for (auto& v : x)
            if (v < 0.6) v = 0.0;  // sparse, like a heatmap
        const auto dx = random_values(gen, g.cells(), -7.0, 7.0);
        const auto dy = random_values(gen, g.cells(), -7.0, 7.0);
        const auto dense = reconstruct_dense(g, x, dx, dy, lambda);
        const auto win = reconstruct(g, x, dx, dy, ReconstructionConfig{lambda, 59});
        for (std::size_t k = 0; k < g.cells(); ++k) EXPECT_NEAR(win.values[k], dense.values[k], 1e-10);
    }
}

TEST(Reconstruct, SmallWindowIsNearIdentityForZeroOffsets) {
    GroundGrid g(8, 8);
    std::vector<double> x(g.cells(), 0.0), z(g.cells(), 0.0);
    x[g.index(3, 4)] = 1.0;
    const auto out = reconstruct(g, x, z, z, ReconstructionConfig{5.0, 3});
    for (int y = 0; y < 8; ++y)
        for (int xx = 0; xx < 8; ++xx) {
            if (xx == 3 && y == 4)
                EXPECT_NEAR(out.at(xx, y), 1.0, 5e-5);
            else
                EXPECT_LT(out.at(xx, y), 5e-5);
        }
}

TEST(Reconstruct, DiagnosticsFlagOffsetsBeyondWindow) {
    GroundGrid g(20, 20);
    std::vector<double> x(g.cells(), 0.0), dx(g.cells(), 0.0), dy(g.cells(), 0.0);
    dx[5] = 4.5;
    WarpDiagnostics diag;
    reconstruct(g, x, dx, dy, ReconstructionConfig{1.0, 7}, &diag);
    EXPECT_TRUE(diag.exceeds_window);
    EXPECT_DOUBLE_EQ(diag.max_offset_norm, 4.5);
    reconstruct(g, x, dx, dy, ReconstructionConfig{1.0, 11}, &diag);
    EXPECT_FALSE(diag.exceeds_window);
}

TEST(Reconstruct, LinearInHeatmap) {
    std::mt19937_64 gen(3);
    GroundGrid g(12, 9);
    const auto x1 = random_values(gen, g.cells(), 0.0, 1.0);
    const auto x2 = random_values(gen, g.cells(), 0.0, 1.0);
    const auto dx = random_values(gen, g.cells(), -2.0, 2.0);
    const auto dy = random_values(gen, g.cells(), -2.0, 2.0);
    const double a = 0.3, b = -1.7;
    std::vector<double> mix(g.cells());
    for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = a * x1[k] + b * x2[k];
    const ReconstructionConfig cfg{1.4, 9};
    const auto r1 = reconstruct(g, x1, dx, dy, cfg), r2 = reconstruct(g, x2, dx, dy, cfg), rm = reconstruct(g, mix, dx, dy, cfg);
    for (std::size_t k = 0; k < mix.size(); ++k) EXPECT_NEAR(rm.values[k], a * r1.values[k] + b * r2.values[k], 1e-9);
}

TEST(Reconstruct, TranslationEquivariance) {
    GroundGrid g(24, 24);
    std::vector<double> x(g.cells(), 0.0);
    x[g.index(10, 11)] = 1.0;
    x[g.index(11, 11)] = 0.5;
    x[g.index(10, 12)] = 0.4;
    const auto delta = OffsetField::constant(g, {3.0, -2.0});
    const auto out = reconstruct(ScalarField(g, x), delta, ReconstructionConfig{5.0, 15});
    const auto best = std::max_element(out.values.begin(), out.values.end()) - out.values.begin();
    EXPECT_EQ(best, static_cast<long>(g.index(13, 9)));
}

TEST(Reconstruct, IndependentOfWorkerCount) {
    std::mt19937_64 gen(8);
    GroundGrid g(30, 21);
    const auto x = random_values(gen, g.cells(), 0.0, 1.0);
    const auto dx = random_values(gen, g.cells(), -4.0, 4.0);
    const auto dy = random_values(gen, g.cells(), -4.0, 4.0);
    const auto up = random_values(gen, g.cells(), -1.0, 1.0);
    const ReconstructionConfig cfg{1.1, 13};
    const auto a = reconstruct(g, x, dx, dy, cfg, nullptr, 1);
    const auto b = reconstruct(g, x, dx, dy, cfg, nullptr, 4);
    EXPECT_EQ(a.values, b.values);
    const auto ga = reconstruct_backward(g, x, dx, dy, cfg, up, true, 1);
    const auto gb = reconstruct_backward(g, x, dx, dy, cfg, up, true, 3);
    EXPECT_EQ(ga.d_heatmap.values, gb.d_heatmap.values);
    EXPECT_EQ(ga.d_dx.values, gb.d_dx.values);
    EXPECT_EQ(ga.d_dy.values, gb.d_dy.values);
}

TEST(Reconstruct, RejectsMismatchedGrids) {
    GroundGrid g(4, 4), h(4, 5);
    EXPECT_THROW(reconstruct(ScalarField(g), OffsetField(h), ReconstructionConfig{}), DimensionError);
    EXPECT_THROW(ReconstructionConfig(0.8, 4).validate(), ConfigError);
    EXPECT_THROW(ReconstructionConfig(0.0, 5).validate(), ConfigError);
}

TEST(Backward, ZeroUpstreamGivesZeroGradients) {
    std::mt19937_64 gen(2);
    GroundGrid g(8, 8);
    const auto x = random_values(gen, g.cells(), 0.0, 1.0);
    const auto dx = random_values(gen, g.cells(), -2.0, 2.0);
    const auto dy = random_values(gen, g.cells(), -2.0, 2.0);
    const std::vector<double> up(g.cells(), 0.0);
    const auto gr = reconstruct_backward(g, x, dx, dy, ReconstructionConfig{0.8, 59}, up);
    for (std::size_t k = 0; k < g.cells(); ++k) {
        EXPECT_EQ(gr.d_heatmap.values[k], 0.0);
        EXPECT_EQ(gr.d_dx.values[k], 0.0);
        EXPECT_EQ(gr.d_dy.values[k], 0.0);
    }
}

// L = sum_j c_j xhat_j, so dL/dxhat = c; compare with central differences.
TEST(Backward, MatchesFiniteDifferencesOnRandomInstances) {
    for (int seed = 0; seed < 20; ++seed) {
        std::mt19937_64 gen(100 + seed);
        GroundGrid g(8, 8);
        auto x = random_values(gen, g.cells(), 0.0, 1.0);
        auto dx = random_values(gen, g.cells(), -2.0, 2.0);
        auto dy = random_values(gen, g.cells(), -2.0, 2.0);
        const auto c = random_values(gen, g.cells(), -1.0, 1.0);
        const double lambda = seed % 2 ? 0.8 : 2.5;
        const ReconstructionConfig cfg{lambda, 59};
        auto loss = [&] {
            const auto r = reconstruct(g, x, dx, dy, cfg, nullptr, 1);
            double s = 0;
            for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * r.values[k];
            return s;
        };
        const auto gr = reconstruct_backward(g, x, dx, dy, cfg, c, true, 1);
        const double eps = 1e-4;
        double worst_delta = 0, worst_x = 0;
        for (std::size_t k = 0; k < g.cells(); ++k) {
            for (auto* v : {&dx, &dy}) {
                const double v0 = (*v)[k];
                (*v)[k] = v0 + eps;
                const double fp = loss();
                (*v)[k] = v0 - eps;
                const double fm = loss();
                (*v)[k] = v0;
                const double num = (fp - fm) / (2 * eps);
                const double ana = v == &dx ? gr.d_dx.values[k] : gr.d_dy.values[k];
                worst_delta = std::max(worst_delta, std::abs(ana - num) / std::max(1e-8, std::abs(ana) + std::abs(num)));
            }
            const double x0 = x[k];
            x[k] = x0 + eps;
            const double fp = loss();
            x[k] = x0 - eps;
            const double fm = loss();
            x[k] = x0;
            const double num = (fp - fm) / (2 * eps);
            const double ana = gr.d_heatmap.values[k];
            worst_x = std::max(worst_x, std::abs(ana - num) / std::max(1e-8, std::abs(ana) + std::abs(num)));
        }
        EXPECT_LT(worst_delta, 1e-4) << "seed " << seed;
        EXPECT_LT(worst_x, 1e-5) << "seed " << seed;
    }
}
