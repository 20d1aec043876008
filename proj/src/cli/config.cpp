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

#include "config.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace losmimo::cli
{
    namespace
    {
        [[noreturn]] void fail(const YAML::Node &node, std::string_view key, std::string_view what)
        {
            const YAML::Mark mark = node.Mark();
            if (mark.is_null())
                throw ConfigError(fmt::format("key '{}': {}", key, what));
            throw ConfigError(fmt::format("line {}: key '{}': {}", mark.line + 1, key, what));
        }

        template <typename T>
        T scalar(const YAML::Node &node, std::string_view key, std::string_view expected)
        {
            if (!node.IsScalar())
                fail(node, key, fmt::format("expected {}", expected));
            try
            {
                return node.as<T>();
            }
            catch (const YAML::Exception &)
            {
                fail(node, key, fmt::format("expected {}, got '{}'", expected, node.Scalar()));
            }
        }

        double positive(const YAML::Node &node, std::string_view key)
        {
            const double v = scalar<double>(node, key, "a number");
            if (!(v > 0.0) || !std::isfinite(v))
                fail(node, key, "must be positive");
            return v;
        }

        void check_keys(const YAML::Node &map, const std::set<std::string> &allowed, std::string_view where)
        {
            for (const auto &kv : map)
            {
                const auto key = kv.first.as<std::string>();
                if (!allowed.contains(key))
                    fail(kv.first, key, fmt::format("unknown key in {}", where));
            }
        }

        Archetype parse_type(const YAML::Node &node, std::string_view key)
        {
            const auto s = scalar<std::string>(node, key, "an array type");
            if (s == "ula")
                return Archetype::ULA;
            if (s == "ura")
                return Archetype::URA;
            if (s == "uca")
                return Archetype::UCA;
            if (s == "aosa")
                return Archetype::AOSA;
            if (s == "custom")
                return Archetype::CUSTOM;
            fail(node, key, fmt::format("unknown array type '{}' (ula, ura, uca, aosa, custom)", s));
        }

        ArrayConfig parse_array(const YAML::Node &node, std::string_view name)
        {
            if (!node.IsMap())
                fail(node, name, "expected a block of array settings");
            const YAML::Node type_node = node["type"];
            if (!type_node)
                fail(node, fmt::format("{}.type", name), "missing");

            ArrayConfig a;
            a.type = parse_type(type_node, fmt::format("{}.type", name));

            std::set<std::string> allowed{"type", "n", "rotation_deg"};
            switch (a.type)
            {
            case Archetype::ULA:
            case Archetype::URA:
                allowed.insert({"spacing_m", "aperture_m"});
                break;
            case Archetype::UCA:
                allowed.insert({"diameter_m", "aperture_m"});
                break;
            case Archetype::AOSA:
                allowed.insert({"spacing_m", "aperture_m", "n_subarrays", "element_spacing_m"});
                break;
            case Archetype::CUSTOM:
                allowed.insert("positions");
                break;
            }
            check_keys(node, allowed, fmt::format("'{}' block of type {}", name, type_node.Scalar()));

            const auto key = [&](std::string_view k) { return fmt::format("{}.{}", name, k); };
            if (const auto n = node["n"])
            {
                a.n = scalar<int>(n, key("n"), "an integer");
                if (a.n < 1)
                    fail(n, key("n"), "must be a positive integer");
            }
            if (const auto v = node["spacing_m"])
                a.spacing_m = positive(v, key("spacing_m"));
            if (const auto v = node["aperture_m"])
                a.aperture_m = positive(v, key("aperture_m"));
            if (const auto v = node["diameter_m"])
                a.diameter_m = positive(v, key("diameter_m"));
            if (const auto v = node["element_spacing_m"])
                a.element_spacing_m = positive(v, key("element_spacing_m"));
            if (const auto v = node["n_subarrays"])
            {
                a.n_subarrays = scalar<int>(v, key("n_subarrays"), "an integer");
                if (*a.n_subarrays < 1)
                    fail(v, key("n_subarrays"), "must be a positive integer");
            }
            if (const auto v = node["rotation_deg"])
                a.rotation_deg = scalar<double>(v, key("rotation_deg"), "a number");

            if (a.type == Archetype::CUSTOM)
            {
                const YAML::Node p = node["positions"];
                if (!p || !p.IsSequence() || p.size() == 0)
                    fail(p ? p : node, key("positions"), "expected a non-empty list of [x, y, z]");
                for (const auto &pt : p)
                {
                    if (!pt.IsSequence() || pt.size() != 3)
                        fail(pt, key("positions"), "each position must be [x, y, z]");
                    a.positions.emplace_back(scalar<double>(pt[0], key("positions"), "a number"),
                                             scalar<double>(pt[1], key("positions"), "a number"),
                                             scalar<double>(pt[2], key("positions"), "a number"));
                }
                if (a.n != 0 && std::size_t(a.n) != a.positions.size())
                    fail(node["n"], key("n"), "does not match the number of positions");
                a.n = int(a.positions.size());
                return a;
            }

            if (a.n == 0)
                fail(node, key("n"), "missing");
            const int sizing = int(a.spacing_m.has_value()) + int(a.aperture_m.has_value()) + int(a.diameter_m.has_value());
            if (sizing != 1)
                fail(node, name, a.type == Archetype::UCA ? "give exactly one of diameter_m, aperture_m"
                                                          : "give exactly one of spacing_m, aperture_m");
            if (a.type == Archetype::URA)
            {
                const int side = int(std::lround(std::sqrt(double(a.n))));
                if (side * side != a.n)
                    fail(node["n"], key("n"), "a URA needs a square element count");
            }
            if (a.type == Archetype::AOSA && !a.n_subarrays)
                fail(node, key("n_subarrays"), "missing");
            return a;
        }
    }

    SceneConfig parse_scene_config(std::string_view yaml_text)
    {
        YAML::Node root;
        try
        {
            root = YAML::Load(std::string(yaml_text));
        }
        catch (const YAML::ParserException &e)
        {
            throw ConfigError(fmt::format("line {}: {}", e.mark.line + 1, e.msg));
        }
        if (!root.IsMap())
            throw ConfigError("scene configuration must be a mapping of keys");
        check_keys(root, {"carrier_hz", "distance_m", "model", "snr_db", "tx", "rx"}, "scene");

        SceneConfig c;
        for (const char *required : {"carrier_hz", "distance_m", "tx", "rx"})
            if (!root[required])
                throw ConfigError(fmt::format("key '{}': missing", required));
        c.carrier_hz = positive(root["carrier_hz"], "carrier_hz");
        c.distance_m = positive(root["distance_m"], "distance_m");
        if (const auto m = root["model"])
        {
            const auto name = scalar<std::string>(m, "model", "a wavefront model");
            const auto model = parse_wavefront_model(name);
            if (!model)
                fail(m, "model", fmt::format("unknown model '{}' (spherical, fresnel, planar)", name));
            c.model = *model;
        }
        if (const auto s = root["snr_db"])
        {
            if (s.IsSequence())
                for (const auto &v : s)
                    c.snr_db.push_back(scalar<double>(v, "snr_db", "a number"));
            else
                c.snr_db.push_back(scalar<double>(s, "snr_db", "a number"));
            for (double v : c.snr_db)
                if (!std::isfinite(v))
                    fail(s, "snr_db", "must be finite");
        }
        c.tx = parse_array(root["tx"], "tx");
        c.rx = parse_array(root["rx"], "rx");
        return c;
    }

    SceneConfig load_scene_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError(fmt::format("cannot read scene configuration '{}'", path.string()));
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_scene_config(ss.str());
    }

    ArrayLayout build_layout(const ArrayConfig &a, double wavelength_m)
    {
        switch (a.type)
        {
        case Archetype::ULA:
            return build_ula(a.n, a.spacing_m ? *a.spacing_m : *a.aperture_m / double(a.n));
        case Archetype::URA:
        {
            const int side = int(std::lround(std::sqrt(double(a.n))));
            return build_ura(side, a.spacing_m ? *a.spacing_m : *a.aperture_m / double(side));
        }
        case Archetype::UCA:
            return build_uca(a.n, a.diameter_m ? *a.diameter_m : *a.aperture_m);
        case Archetype::AOSA:
        {
            const int r = *a.n_subarrays;
            return build_aosa(a.n, r, a.spacing_m ? *a.spacing_m : *a.aperture_m / double(r),
                              a.element_spacing_m.value_or(0.25 * wavelength_m));
        }
        case Archetype::CUSTOM:
            return build_custom(a.positions);
        }
        throw ConfigError("unknown array type");
    }

    LinkScene build_scene(const SceneConfig &c)
    {
        const double lambda = c.wavelength_m();
        constexpr double kDeg = std::numbers::pi / 180.0;
        return LinkScene::facing(build_layout(c.tx, lambda), build_layout(c.rx, lambda), c.distance_m, lambda,
                                 c.tx.rotation_deg * kDeg, c.rx.rotation_deg * kDeg);
    }
}
