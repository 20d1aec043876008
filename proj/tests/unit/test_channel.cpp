// SPDX-License-Identifier: Apache-2.0
//
// losmimo - line-of-sight MIMO channel modelling and capacity analysis
// Copyright (C) 2026 The losmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "oracles.hpp"
#include "scenes.hpp"

#include "losmimo/capacity.hpp"
#include "losmimo/channel.hpp"
#include "losmimo/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace losmimo;

namespace
{
    constexpr double kPi = std::numbers::pi;
    const WavefrontModel kModels[] = {WavefrontModel::SPHERICAL, WavefrontModel::FRESNEL, WavefrontModel::PLANAR};
}

TEST_CASE("distance matrix")
{
    const auto point = build_ula(1, 0.01);
    const auto s = LinkScene::facing(point, point, 2.0, 1e-3);
    CHECK(distance_matrix(s)(0, 0) == 2.0);

    const double d = 0.3, dist = 5.0;
    const auto pair = LinkScene::facing(build_ula(2, d), build_ula(2, d), dist, 1e-3);
    const auto m = distance_matrix(pair);
    CHECK(m(0, 0) == doctest::Approx(dist).epsilon(1e-15));
    CHECK(m(1, 1) == doctest::Approx(dist).epsilon(1e-15));
    CHECK(m(0, 1) == doctest::Approx(std::hypot(dist, d)).epsilon(1e-15));
    CHECK(m(1, 0) == doctest::Approx(std::hypot(dist, d)).epsilon(1e-15));

    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i)
    {
        const auto sc = testing::random_scene(rng);
        const auto dm = distance_matrix(sc);
        const double slack = sc.tx().aperture_m() + sc.rx().aperture_m();
        CHECK(dm.minCoeff() >= sc.separation_m() - slack);
        CHECK(dm.maxCoeff() <= sc.separation_m() + slack);
        const auto tx = sc.posed_tx();
        const auto rx = sc.posed_rx();
        for (Eigen::Index n = 0; n < dm.rows(); ++n)
            for (Eigen::Index k = 0; k < dm.cols(); ++k)
                CHECK(dm(n, k) == doctest::Approx((rx[std::size_t(n)] - tx[std::size_t(k)]).norm()).epsilon(1e-13));
    }

    // a transmit element sitting on a receive element
    const auto clash = LinkScene::facing(build_custom({{0, 0, -0.5}, {0, 0, 0.5}}), point, 0.5, 1e-3);
    CHECK_THROWS_AS(distance_matrix(clash), DegenerateGeometry);
    CHECK_THROWS_AS(channel_matrix(clash, WavefrontModel::SPHERICAL), DegenerateGeometry);
}

TEST_CASE("channel matrix examples")
{
    const double lambda = 1e-3;
    const auto point = build_ula(1, 0.01);
    const auto h = channel_matrix(LinkScene::facing(point, point, lambda, lambda), WavefrontModel::SPHERICAL);
    CHECK(std::abs(h.entries(0, 0) - std::complex<double>(1.0, 0.0)) < 1e-12);

    const auto planar = channel_matrix(testing::rayleigh_ula(4, 1.0, lambda, 10.0), WavefrontModel::PLANAR);
    const auto g = oracle::gains(planar.entries);
    CHECK(std::sqrt(g[1] / g[0]) < 1e-12);

    const auto fresnel = channel_matrix(testing::rayleigh_ula(4, 1.0, lambda, 10.0), WavefrontModel::FRESNEL);
    for (double x : oracle::gains(fresnel.entries))
        CHECK(x == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("spherical channel agrees with a direct evaluation")
{
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i)
    {
        const auto s = testing::random_scene(rng);
        const auto h = channel_matrix(s, WavefrontModel::SPHERICAL);
        const auto ref = oracle::spherical_channel(s.posed_tx(), s.posed_rx(), s.wavelength_m());
        // distances of up to 20 m at sub-mm wavelengths: phase resolution limited by the distance ulp
        CHECK((h.entries - ref).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("channel invariants over random scenes")
{
    std::mt19937_64 rng(23);
    for (int i = 0; i < 25; ++i)
    {
        const auto s = testing::random_scene(rng);
        const double ntnr = double(s.tx().element_count() * s.rx().element_count());
        for (auto model : kModels)
        {
            CAPTURE(to_string(model));
            const auto h = channel_matrix(s, model);
            CHECK((h.entries.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
            const auto sp = gain_spectrum(h);
            CHECK(sp.total() == doctest::Approx(ntnr).epsilon(1e-9));
            if (model == WavefrontModel::PLANAR && sp.size() > 1)
                CHECK(std::sqrt(sp.gains()[1] / sp.gains()[0]) < 1e-12);

            // reciprocity: swapping roles transposes exactly
            const auto back = channel_matrix(s.swapped(), model);
            CHECK(back.entries == h.entries.transpose());
        }
        CHECK(distance_matrix(s.swapped()) == distance_matrix(s).transpose());
    }
}

TEST_CASE("far-field agreement between spherical and planar models")
{
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i)
    {
        const double lambda = 1e-3 * (0.5 + u(rng));
        const double dist = 10.0 + 90.0 * u(rng);
        const double l = std::sqrt(4.0 * lambda * dist / 100.0) * (0.2 + 0.75 * u(rng));
        const int n = 1 + int(7 * u(rng));
        const auto s = LinkScene::facing(build_ula(n, l / n), build_uca(n + 1, l), dist, lambda);
        REQUIRE(s.tx().aperture_m() * s.rx().aperture_m() < 4.0 * lambda * dist / 100.0);
        const double sph = rate_report(channel_matrix(s, WavefrontModel::SPHERICAL), 10.0).spectral_efficiency_bpshz;
        const double pla = rate_report(channel_matrix(s, WavefrontModel::PLANAR), 10.0).spectral_efficiency_bpshz;
        CHECK(std::abs(sph - pla) / pla < 1e-3);
    }
}

TEST_CASE("Fresnel spectra track the exact model for paraxial broadside links")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i)
    {
        const double lambda = 1e-3 * (0.5 + u(rng));
        const double dist = 2.0 + 18.0 * u(rng);
        const int n = 2 + int(6 * u(rng));
        const double eta = 0.5 + 2.5 * u(rng);
        const auto s = testing::rayleigh_ula(n, eta, lambda, dist);
        REQUIRE(s.tx().aperture_m() < dist / 10);
        const auto fr = oracle::gains(channel_matrix(s, WavefrontModel::FRESNEL).entries);
        const auto sp = oracle::gains(channel_matrix(s, WavefrontModel::SPHERICAL).entries);
        for (std::size_t k = 0; k < fr.size(); ++k)
        {
            CAPTURE(k);
            // gains that are numerically zero in both models are compared against the total instead
            const double scale = std::max(sp[k], 1e-6 * double(n * n));
            CHECK(std::abs(fr[k] - sp[k]) / scale < 0.01);
        }
    }
}

TEST_CASE("coaxial UCAs are diagonalized by the Fourier matrix")
{
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i)
    {
        const int n = 3 + int(14 * u(rng));
        const double offset = 2 * kPi * u(rng);
        const double lambda = 1e-3 * (0.5 + u(rng));
        const double dist = 1.0 + 10.0 * u(rng);
        const auto s = LinkScene::facing(build_uca(n, 0.05 + 0.3 * u(rng), offset), build_uca(n, 0.05 + 0.3 * u(rng), offset),
                                         dist, lambda);
        const auto dm = distance_matrix(s);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                CHECK(dm(a, b) == doctest::Approx(dm((a + 1) % n, (b + 1) % n)).epsilon(1e-13));

        Eigen::MatrixXcd f(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                f(a, b) = std::polar(1.0 / std::sqrt(double(n)), -2 * kPi * double(a * b % n) / n);
        const Eigen::MatrixXcd d = f * channel_matrix(s, WavefrontModel::SPHERICAL).entries * f.adjoint();
        const double total = d.squaredNorm();
        const double off = total - d.diagonal().squaredNorm();
        CHECK(off / total < 1e-10);
    }
}

TEST_CASE("validity regions")
{
    const double lambda = kSpeedOfLight / 300e9;
    CHECK(classify_validity(0.5, 0.5, lambda, 10.0) == Validity::SPHERICAL_REQUIRED);
    CHECK(classify_validity(0.5, 0.5, lambda, 100.0) == Validity::PLANAR_OK);
    CHECK(classify_validity(0.0, 0.5, lambda, 1e-6) == Validity::PLANAR_OK);
    CHECK(to_string(Validity::PLANAR_OK) == "planar");
    CHECK(to_string(Validity::SPHERICAL_REQUIRED) == "spherical");

    // scene form uses the broadside-projected apertures: endfire ULAs have none
    const auto a = build_ula(8, 0.0625);
    CHECK(classify_validity(LinkScene::facing(a, a, 10.0, lambda)) == Validity::SPHERICAL_REQUIRED);
    CHECK(classify_validity(LinkScene::facing(a, a, 10.0, lambda, kPi / 2, kPi / 2)) == Validity::PLANAR_OK);
}

TEST_CASE("Fresnel and planar models need a forward link")
{
    // receive element behind the transmitter along the link axis
    const auto tx = build_custom({{0, 0, -3}, {0, 0, 3}});
    const auto rx = build_ula(1, 0.1);
    const auto s = LinkScene::facing(tx, rx, 1.0, 1e-3);
    CHECK_NOTHROW(channel_matrix(s, WavefrontModel::SPHERICAL));
    CHECK_THROWS_AS(channel_matrix(s, WavefrontModel::FRESNEL), DegenerateGeometry);
    CHECK_THROWS_AS(channel_matrix(s, WavefrontModel::PLANAR), DegenerateGeometry);
}

TEST_CASE("phase unwrapping and polynomial fits")
{
    std::vector<double> truth, wrapped;
    for (int k = 0; k < 200; ++k)
    {
        const double p = -0.37 * k - 0.001 * k * k;
        truth.push_back(p);
        wrapped.push_back(std::remainder(p, 2 * kPi));
    }
    const auto un = unwrap_phase(wrapped);
    for (std::size_t k = 0; k < truth.size(); ++k)
        CHECK(un[k] - un[0] == doctest::Approx(truth[k] - truth[0]).epsilon(1e-12));

    const std::vector<double> x{0.0, 1.0, 2.0};
    const std::vector<double> y{1.0, 0.0, 3.0};
    const auto q = fit_polynomial(x, y, 2);
    CHECK(q.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(q(x[i]) == doctest::Approx(y[i]).epsilon(1e-12));
    CHECK_THROWS_AS(fit_polynomial(x, y, 3), InvalidArgument);
}

TEST_CASE("phase profile")
{
    const double lambda = kSpeedOfLight / 300e9;
    const int steps = 300;
    const double step = 1e-3, dist = 1.8;
    const Vec3 start(-0.5 * (steps - 1) * step, 0.0, dist);
    const auto p = phase_profile(Vec3::Zero(), start, step, steps, Vec3::UnitX(), lambda);
    CHECK(p.c2() / (-kPi / (lambda * dist)) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(p.r2_quadratic() > 0.9999);
    CHECK(p.r2_quadratic() - p.r2_linear() > 0.01);

    const auto lon = phase_profile(Vec3::Zero(), Vec3(0, 0, dist), 1e-4, steps, Vec3::UnitZ(), lambda);
    CHECK(lon.r2_linear() > 0.999999);
    CHECK(std::abs(lon.c2()) < 1e-3);
    CHECK(lon.linear.coefficients[1] == doctest::Approx(-2 * kPi / lambda).epsilon(1e-9));

    const auto three = phase_profile(Vec3::Zero(), start, step, 3, Vec3::UnitX(), lambda);
    CHECK(three.r2_quadratic() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(three.displacements_m.size() == 3);

    CHECK_THROWS_AS(phase_profile(Vec3::Zero(), start, step, 2, Vec3::UnitX(), lambda), InvalidArgument);
    try
    {
        phase_profile(Vec3::Zero(), Vec3(0, 0, dist), 1e-3, steps, Vec3::UnitZ(), lambda);
        FAIL("longitudinal 1 mm steps must violate the sampling condition");
    }
    catch (const NyquistViolation &e)
    {
        CHECK(e.step_index() == 1);
    }
    CHECK_THROWS_AS(phase_profile(Vec3::Zero(), Vec3(-0.001, 0, 0), 1e-3, 3, Vec3::UnitX(), lambda), DegenerateGeometry);
}
