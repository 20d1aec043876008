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

#include "losmimo/optimize.hpp"
#include "losmimo/errors.hpp"
#include "losmimo/search.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

namespace losmimo
{
    namespace
    {
        constexpr double kQuarterTurn = 0.5 * std::numbers::pi;
        constexpr int kRotationGrid = 65;
        constexpr int kCandidateGrid = 33;
        constexpr double kAngleTolerance = 1e-4;

        // a counts as better than b only beyond rounding noise, so ties keep the earlier (smaller) choice
        bool improves(double a, double b) { return a > b + 1e-12 * std::abs(b); }

        double grid_angle(int i, int points) { return kQuarterTurn * double(i) / double(points - 1); }

        bool is_linear(Archetype a) { return a == Archetype::ULA || a == Archetype::AOSA; }

        std::vector<double> to_linear(std::span<const double> snr_db)
        {
            std::vector<double> out;
            out.reserve(snr_db.size());
            for (double s : snr_db)
                out.push_back(db_to_linear(s));
            return out;
        }

        GainSpectrum rotated_spectrum(const LinkScene &scene, double tx_angle, double rx_angle, WavefrontModel model)
        {
            const LinkScene s = scene.with_rotations(link_plane_rotation(tx_angle), link_plane_rotation(rx_angle));
            return gain_spectrum(channel_matrix(s, model));
        }

        template <typename F>
        void parallel_for(std::size_t n, unsigned threads, F &&body)
        {
            if (threads == 0)
                threads = std::max(1u, std::thread::hardware_concurrency());
            threads = unsigned(std::min<std::size_t>(threads, n));
            if (threads <= 1)
            {
                for (std::size_t i = 0; i < n; ++i)
                    body(i);
                return;
            }
            std::atomic<std::size_t> next{0};
            std::vector<std::jthread> workers;
            workers.reserve(threads);
            for (unsigned t = 0; t < threads; ++t)
                workers.emplace_back([&] {
                    for (std::size_t i = next++; i < n; i = next++)
                        body(i);
                });
        }

        std::string layout_tag(const ArrayLayout &l)
        {
            return fmt::format("{}{}", to_string(l.archetype()), l.element_count());
        }
    }

    RotationResult optimize_rotation(const LinkScene &scene, double snr_linear, WavefrontModel model, RotationMode mode)
    {
        if (scene.tx().archetype() != Archetype::ULA || scene.rx().archetype() != Archetype::ULA)
            throw UnsupportedArchetype("rotation search needs ULAs at both ends");
        if (!(snr_linear > 0.0))
            throw InvalidArgument("SNR must be positive");

        const auto se = [&](double tx_angle, double rx_angle) {
            return waterfilling(rotated_spectrum(scene, tx_angle, rx_angle, model), snr_linear).spectral_efficiency_bpshz;
        };
        const double step = grid_angle(1, kRotationGrid);

        double best_tx = 0.0, best_rx = 0.0;
        double best = -1.0;
        if (mode == RotationMode::SYMMETRIC)
        {
            int best_i = 0;
            for (int i = 0; i < kRotationGrid; ++i)
            {
                const double v = se(grid_angle(i, kRotationGrid), grid_angle(i, kRotationGrid));
                if (i == 0 || improves(v, best))
                {
                    best = v;
                    best_i = i;
                }
            }
            best_tx = best_rx = grid_angle(best_i, kRotationGrid);
            const double lo = std::max(0.0, best_tx - step);
            const double hi = std::min(kQuarterTurn, best_tx + step);
            const ScalarOptimum refined =
                golden_section_maximize([&](double a) { return se(a, a); }, lo, hi, kAngleTolerance);
            if (improves(refined.value, best))
            {
                best = refined.value;
                best_tx = best_rx = refined.x;
            }
        }
        else
        {
            for (int i = 0; i < kRotationGrid; ++i)
                for (int j = 0; j < kRotationGrid; ++j)
                {
                    const double v = se(grid_angle(i, kRotationGrid), grid_angle(j, kRotationGrid));
                    if ((i == 0 && j == 0) || improves(v, best))
                    {
                        best = v;
                        best_tx = grid_angle(i, kRotationGrid);
                        best_rx = grid_angle(j, kRotationGrid);
                    }
                }
            // coordinate-wise refinement
            for (int round = 0; round < 2; ++round)
            {
                const ScalarOptimum tx = golden_section_maximize(
                    [&](double a) { return se(a, best_rx); }, std::max(0.0, best_tx - step),
                    std::min(kQuarterTurn, best_tx + step), kAngleTolerance);
                if (improves(tx.value, best))
                {
                    best = tx.value;
                    best_tx = tx.x;
                }
                const ScalarOptimum rx = golden_section_maximize(
                    [&](double a) { return se(best_tx, a); }, std::max(0.0, best_rx - step),
                    std::min(kQuarterTurn, best_rx + step), kAngleTolerance);
                if (improves(rx.value, best))
                {
                    best = rx.value;
                    best_rx = rx.x;
                }
            }
        }

        RotationResult out;
        out.tx_angle_rad = best_tx;
        out.rx_angle_rad = best_rx;
        out.report = rate_report(rotated_spectrum(scene, best_tx, best_rx, model), snr_linear);
        return out;
    }

    ArchitecturePlan rotation_plan(const LinkScene &scene, std::span<const double> snr_grid_db, WavefrontModel model,
                                   RotationMode mode)
    {
        ArchitecturePlan plan;
        for (double snr_db : snr_grid_db)
        {
            const RotationResult r = optimize_rotation(scene, db_to_linear(snr_db), model, mode);
            PlanEntry e;
            e.snr_db = snr_db;
            e.config_value = r.tx_angle_rad;
            e.descriptor = mode == RotationMode::SYMMETRIC
                               ? fmt::format("angle_rad={:.6f}", r.tx_angle_rad)
                               : fmt::format("tx_angle_rad={:.6f};rx_angle_rad={:.6f}", r.tx_angle_rad, r.rx_angle_rad);
            e.report = r.report;
            e.report.snr_db = snr_db;
            plan.entries.push_back(std::move(e));
        }
        std::stable_sort(plan.entries.begin(), plan.entries.end(),
                         [](const PlanEntry &a, const PlanEntry &b) { return a.snr_db < b.snr_db; });
        return plan;
    }

    ArchitecturePlan fixed_angle_plan(const LinkScene &scene, std::span<const double> angles_rad,
                                      std::span<const double> snr_grid_db, WavefrontModel model)
    {
        if (angles_rad.empty())
            throw InvalidArgument("fixed angle plan needs at least one angle");
        std::vector<GainSpectrum> spectra;
        spectra.reserve(angles_rad.size());
        for (double a : angles_rad)
            spectra.push_back(rotated_spectrum(scene, a, a, model));

        ArchitecturePlan plan;
        for (double snr_db : snr_grid_db)
        {
            const double snr = db_to_linear(snr_db);
            std::size_t best_k = 0;
            double best = -1.0;
            for (std::size_t k = 0; k < spectra.size(); ++k)
            {
                const double v = waterfilling(spectra[k], snr).spectral_efficiency_bpshz;
                const bool tie = !improves(v, best) && !improves(best, v);
                if (k == 0 || improves(v, best) || (tie && angles_rad[k] < angles_rad[best_k]))
                {
                    best = v;
                    best_k = k;
                }
            }
            PlanEntry e;
            e.snr_db = snr_db;
            e.config_value = angles_rad[best_k];
            e.descriptor = fmt::format("angle_rad={:.6f}", angles_rad[best_k]);
            e.report = rate_report_db(spectra[best_k], snr_db);
            plan.entries.push_back(std::move(e));
        }
        std::stable_sort(plan.entries.begin(), plan.entries.end(),
                         [](const PlanEntry &a, const PlanEntry &b) { return a.snr_db < b.snr_db; });
        return plan;
    }

    AngleSelection select_fixed_angles(const LinkScene &scene, int k, std::span<const double> snr_grid_db,
                                       WavefrontModel model)
    {
        if (k < 1)
            throw InvalidArgument("need at least one angle");
        if (snr_grid_db.empty())
            throw InvalidArgument("SNR grid is empty");
        if (scene.tx().archetype() != Archetype::ULA || scene.rx().archetype() != Archetype::ULA)
            throw UnsupportedArchetype("fixed-angle selection needs ULAs at both ends");

        const std::vector<double> snr = to_linear(snr_grid_db);
        const std::size_t n_snr = snr.size();

        // table[c][s]: spectral efficiency of candidate c at SNR s
        std::vector<std::vector<double>> table(kCandidateGrid, std::vector<double>(n_snr));
        for (int c = 0; c < kCandidateGrid; ++c)
        {
            const double a = grid_angle(c, kCandidateGrid);
            const GainSpectrum g = rotated_spectrum(scene, a, a, model);
            for (std::size_t s = 0; s < n_snr; ++s)
                table[std::size_t(c)][s] = waterfilling(g, snr[s]).spectral_efficiency_bpshz;
        }
        std::vector<double> reference(n_snr);
        for (std::size_t s = 0; s < n_snr; ++s)
        {
            reference[s] = optimize_rotation(scene, snr[s], model).report.spectral_efficiency_bpshz;
            for (int c = 0; c < kCandidateGrid; ++c)
                reference[s] = std::max(reference[s], table[std::size_t(c)][s]);
        }

        const auto worst_gap = [&](const std::vector<int> &set) {
            double worst = 0.0;
            for (std::size_t s = 0; s < n_snr; ++s)
            {
                double got = 0.0;
                for (int c : set)
                    got = std::max(got, table[std::size_t(c)][s]);
                worst = std::max(worst, (reference[s] - got) / reference[s]);
            }
            return worst;
        };

        const int exhaustive = std::min(k, 3);
        std::vector<int> best_set;
        double best_gap = 2.0;
        std::vector<int> idx(static_cast<std::size_t>(exhaustive));
        // lexicographic enumeration of combinations; strict improvement keeps the earliest on ties
        std::function<void(int, int)> enumerate = [&](int pos, int start) {
            if (pos == exhaustive)
            {
                const double g = worst_gap(idx);
                if (g < best_gap - 1e-15)
                {
                    best_gap = g;
                    best_set = idx;
                }
                return;
            }
            for (int c = start; c <= kCandidateGrid - (exhaustive - pos); ++c)
            {
                idx[std::size_t(pos)] = c;
                enumerate(pos + 1, c + 1);
            }
        };
        enumerate(0, 0);

        while (int(best_set.size()) < k && int(best_set.size()) < kCandidateGrid)
        {
            int pick = -1;
            double pick_gap = 2.0;
            for (int c = 0; c < kCandidateGrid; ++c)
            {
                if (std::find(best_set.begin(), best_set.end(), c) != best_set.end())
                    continue;
                auto trial = best_set;
                trial.push_back(c);
                const double g = worst_gap(trial);
                if (g < pick_gap - 1e-15)
                {
                    pick_gap = g;
                    pick = c;
                }
            }
            best_set.push_back(pick);
            best_gap = pick_gap;
        }

        std::sort(best_set.begin(), best_set.end());
        AngleSelection out;
        for (int c : best_set)
            out.angles_rad.push_back(grid_angle(c, kCandidateGrid));
        out.worst_relative_gap = best_gap;
        return out;
    }

    ArchitecturePlan aosa_schedule(int n_total, const LinkScene &scene_template, std::span<const double> snr_grid_db,
                                   WavefrontModel model, std::optional<double> element_spacing_m)
    {
        if (n_total < 1)
            throw InvalidArgument("element count must be positive");
        const double lambda = scene_template.wavelength_m();
        const double distance = scene_template.separation_m();
        const double element_spacing = element_spacing_m.value_or(0.25 * lambda);

        std::vector<int> ranks;
        std::vector<GainSpectrum> spectra;
        for (int r = 1; r <= n_total; ++r)
        {
            if (n_total % r != 0)
                continue;
            const double spacing = std::sqrt(lambda * distance / double(r));
            const ArrayLayout a = build_aosa(n_total, r, spacing, element_spacing);
            ranks.push_back(r);
            spectra.push_back(gain_spectrum(channel_matrix(LinkScene::facing(a, a, distance, lambda), model)));
        }

        ArchitecturePlan plan;
        for (double snr_db : snr_grid_db)
        {
            const double snr = db_to_linear(snr_db);
            std::size_t best_k = 0;
            double best = -1.0;
            for (std::size_t k = 0; k < spectra.size(); ++k)
            {
                const double v = waterfilling(spectra[k], snr).spectral_efficiency_bpshz;
                if (k == 0 || improves(v, best))
                {
                    best = v;
                    best_k = k;
                }
            }
            PlanEntry e;
            e.snr_db = snr_db;
            e.config_value = double(ranks[best_k]);
            e.descriptor = fmt::format("r={}", ranks[best_k]);
            e.report = rate_report_db(spectra[best_k], snr_db);
            plan.entries.push_back(std::move(e));
        }
        std::stable_sort(plan.entries.begin(), plan.entries.end(),
                         [](const PlanEntry &a, const PlanEntry &b) { return a.snr_db < b.snr_db; });
        return plan;
    }

    std::string_view to_string(SweepVariable v)
    {
        switch (v)
        {
        case SweepVariable::SNR_DB:
            return "snr";
        case SweepVariable::ETA:
            return "eta";
        case SweepVariable::FREQUENCY_HZ:
            return "freq";
        case SweepVariable::ROTATION_RAD:
            return "rotation";
        case SweepVariable::TILT_RAD:
            return "tilt";
        case SweepVariable::OFFSET_M:
            return "offset";
        }
        return "snr";
    }

    LinkScene sweep_scene(const SweepSpec &spec, double x)
    {
        const LinkScene &base = spec.base_scene;
        switch (spec.variable)
        {
        case SweepVariable::SNR_DB:
            return base;
        case SweepVariable::ETA:
        {
            if (!(x > 0.0))
                throw InvalidArgument("eta must be positive to realize a geometry");
            const Vec3 axis = base.link_axis();
            const double lt = broadside_projected_aperture(base.tx(), base.tx_pose().rotation, axis);
            const double lr = broadside_projected_aperture(base.rx(), base.rx_pose().rotation, axis);
            if (!(lt > 0.0) || !(lr > 0.0))
                throw UnsupportedArchetype("eta sweep needs arrays with a non-zero aperture");
            const auto n_min = double(std::min(base.tx().element_count(), base.rx().element_count()));
            const double aperture = std::sqrt(x * base.wavelength_m() * base.separation_m() * n_min);
            return base.with_layouts(base.tx().scaled(aperture / lt), base.rx().scaled(aperture / lr));
        }
        case SweepVariable::FREQUENCY_HZ:
            return base.with_wavelength(wavelength_from_frequency(x));
        case SweepVariable::ROTATION_RAD:
            return base.with_rotations(link_plane_rotation(x), link_plane_rotation(x));
        case SweepVariable::TILT_RAD:
            return base.with_rotations(base.tx_pose().rotation, link_plane_rotation(x) * base.rx_pose().rotation);
        case SweepVariable::OFFSET_M:
            return base.with_rx_translation(base.rx_pose().translation + Vec3(x, 0.0, 0.0));
        }
        return base;
    }

    std::vector<SweepPoint> sweep(const SweepSpec &spec, unsigned threads)
    {
        if (spec.grid.empty())
            throw InvalidArgument("sweep grid is empty");
        for (std::size_t i = 1; i < spec.grid.size(); ++i)
            if (!(spec.grid[i] > spec.grid[i - 1]))
                throw InvalidArgument("sweep grid must be strictly increasing");

        const LinkScene &base = spec.base_scene;
        if (spec.variable == SweepVariable::ROTATION_RAD &&
            (!is_linear(base.tx().archetype()) || !is_linear(base.rx().archetype())))
            throw UnsupportedArchetype("rotation sweep needs linear arrays (ULA or AOSA) at both ends");
        if (spec.variable == SweepVariable::ETA)
        {
            const Vec3 axis = base.link_axis();
            if (!(broadside_projected_aperture(base.tx(), base.tx_pose().rotation, axis) > 0.0) ||
                !(broadside_projected_aperture(base.rx(), base.rx_pose().rotation, axis) > 0.0))
                throw UnsupportedArchetype("eta sweep needs arrays with a non-zero aperture");
        }

        const std::string tag = layout_tag(base.tx()) + "/" + layout_tag(base.rx());
        const int n_t = int(base.tx().element_count());
        const int n_r = int(base.rx().element_count());

        std::optional<GainSpectrum> fixed;
        if (spec.variable == SweepVariable::SNR_DB)
            fixed = gain_spectrum(channel_matrix(base, spec.model));

        std::vector<SweepPoint> out(spec.grid.size());
        parallel_for(spec.grid.size(), threads, [&](std::size_t i) {
            SweepPoint &p = out[i];
            p.x_value = spec.grid[i];
            p.snr_db = spec.variable == SweepVariable::SNR_DB ? p.x_value : spec.snr_db;
            p.descriptor = fmt::format("{};{}={}", tag, to_string(spec.variable), p.x_value);
            try
            {
                if (fixed)
                    p.report = rate_report_db(*fixed, p.snr_db);
                else if (spec.variable == SweepVariable::ETA && p.x_value == 0.0)
                {
                    // zero-aperture limit: a single beamforming mode with the full array gain
                    std::vector<double> g(std::size_t(std::min(n_t, n_r)), 0.0);
                    g[0] = double(n_t) * double(n_r);
                    p.report = rate_report_db(GainSpectrum(std::move(g), n_t, n_r), p.snr_db);
                }
                else
                    p.report = rate_report_db(gain_spectrum(channel_matrix(sweep_scene(spec, p.x_value), spec.model)), p.snr_db);
            }
            catch (const std::exception &e)
            {
                p.error = e.what();
            }
        });
        return out;
    }
}
