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

#ifndef LOSMIMO_CLI_CONFIG_HPP
#define LOSMIMO_CLI_CONFIG_HPP

#include "losmimo/channel.hpp"
#include "losmimo/errors.hpp"
#include "losmimo/geometry.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace losmimo::cli
{
    // Unreadable, malformed or inconsistent scene configuration; the message names the key and line
    class ConfigError : public InvalidArgument
    {
    public:
        using InvalidArgument::InvalidArgument;
    };

    struct ArrayConfig
    {
        Archetype type = Archetype::ULA;
        int n = 0;
        std::optional<double> spacing_m;
        std::optional<double> aperture_m;
        std::optional<double> diameter_m;
        std::optional<int> n_subarrays;
        std::optional<double> element_spacing_m;
        double rotation_deg = 0.0;
        std::vector<Vec3> positions; // custom only
    };

    struct SceneConfig
    {
        double carrier_hz = 0.0;
        double distance_m = 0.0;
        WavefrontModel model = WavefrontModel::SPHERICAL;
        ArrayConfig tx;
        ArrayConfig rx;
        std::vector<double> snr_db;

        double wavelength_m() const { return wavelength_from_frequency(carrier_hz); }
    };

    // YAML scene file:
    //
    //   carrier_hz: 300e9
    //   distance_m: 10
    //   model: fresnel            # spherical | fresnel | planar
    //   snr_db: [0, 10]           # scalar or list
    //   tx: {type: ula, n: 4, spacing_m: 0.05, rotation_deg: 0}
    //   rx: {type: aosa, n: 4, n_subarrays: 2, spacing_m: 0.07, element_spacing_m: 0.00025}
    //
    // Sizing keys per type: ula/ura/aosa take spacing_m or aperture_m, uca takes diameter_m or aperture_m,
    // custom takes positions: [[x, y, z], ...]. Unknown keys are rejected.
    SceneConfig parse_scene_config(std::string_view yaml_text);
    SceneConfig load_scene_config(const std::filesystem::path &path);

    ArrayLayout build_layout(const ArrayConfig &config, double wavelength_m);
    LinkScene build_scene(const SceneConfig &config);
}

#endif
