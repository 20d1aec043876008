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

#ifndef LOSMIMO_OPTIMIZE_HPP
#define LOSMIMO_OPTIMIZE_HPP

#include "losmimo/capacity.hpp"
#include "losmimo/channel.hpp"
#include "losmimo/geometry.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace losmimo
{
    enum class RotationMode
    {
        SYMMETRIC,  // both arrays turned by the same angle (parallel)
        INDEPENDENT // separate tx and rx angles
    };

    struct RotationResult
    {
        double tx_angle_rad = 0.0;
        double rx_angle_rad = 0.0;
        RateReport report;

        double angle_rad() const { return tx_angle_rad; }
    };

    // Rotation angle(s) in [0, pi/2] maximizing the waterfilling spectral efficiency of a ULA link.
    // 65-point scan, then golden-section refinement to 1e-4 rad around the best scan point.
    // Ties go to the smaller angle. Both layouts must be ULAs.
    RotationResult optimize_rotation(const LinkScene &scene, double snr_linear, WavefrontModel model,
                                     RotationMode mode = RotationMode::SYMMETRIC);

    struct PlanEntry
    {
        double snr_db = 0.0;
        std::string descriptor; // e.g. "angle_rad=0.785398" or "r=2"
        double config_value = 0.0;
        RateReport report;
    };

    // One entry per SNR, sorted by SNR
    struct ArchitecturePlan
    {
        std::vector<PlanEntry> entries;
    };

    ArchitecturePlan rotation_plan(const LinkScene &scene, std::span<const double> snr_grid_db, WavefrontModel model,
                                   RotationMode mode = RotationMode::SYMMETRIC);

    // Best of a fixed set of (symmetric) rotation angles at every SNR
    ArchitecturePlan fixed_angle_plan(const LinkScene &scene, std::span<const double> angles_rad,
                                      std::span<const double> snr_grid_db, WavefrontModel model);

    struct AngleSelection
    {
        std::vector<double> angles_rad; // ascending
        double worst_relative_gap = 0.0; // max over SNR of (optimized - selected) / optimized
    };

    // k angles from a 33-point grid on [0, pi/2] minimizing the worst-case relative gap to
    // optimize_rotation over the SNR grid. Exhaustive for k <= 3, greedy augmentation beyond.
    // At most 33 angles are returned.
    AngleSelection select_fixed_angles(const LinkScene &scene, int k, std::span<const double> snr_grid_db,
                                       WavefrontModel model);

    // R-AOSA with r subarrays for every divisor r of n_total, centre spacing sqrt(lambda D / r) at both ends;
    // the best r is picked per SNR (ties to the smaller r). Element spacing defaults to lambda / 4.
    ArchitecturePlan aosa_schedule(int n_total, const LinkScene &scene_template, std::span<const double> snr_grid_db,
                                   WavefrontModel model, std::optional<double> element_spacing_m = std::nullopt);

    enum class SweepVariable
    {
        SNR_DB,
        ETA,
        FREQUENCY_HZ,
        ROTATION_RAD,
        TILT_RAD,
        OFFSET_M
    };

    std::string_view to_string(SweepVariable v);

    struct SweepSpec
    {
        SweepVariable variable;
        std::vector<double> grid; // strictly increasing
        LinkScene base_scene;
        WavefrontModel model;
        double snr_db; // used unless the SNR itself is swept
    };

    struct SweepPoint
    {
        double x_value = 0.0;
        double snr_db = 0.0;
        std::optional<RateReport> report; // empty when the point failed
        std::string descriptor;
        std::string error;
    };

    // Scene evaluated at one grid value:
    //   ETA       both apertures rescaled to sqrt(eta lambda D N_min)
    //   FREQUENCY wavelength c / f
    //   ROTATION  both arrays rotated in the link plane by x
    //   TILT      receive array additionally turned by x about the y axis
    //   OFFSET    receive centroid displaced by x along the x axis
    LinkScene sweep_scene(const SweepSpec &spec, double x);

    // Points are independent and evaluated on `threads` workers (0 = hardware concurrency);
    // results come back in grid order. Points with degenerate geometry carry an error instead of a report.
    std::vector<SweepPoint> sweep(const SweepSpec &spec, unsigned threads = 0);
}

#endif
