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

#include "commands.hpp"
#include "config.hpp"

#include "losmimo/capacity.hpp"
#include "losmimo/channel.hpp"
#include "losmimo/errors.hpp"
#include "losmimo/io.hpp"
#include "losmimo/optimize.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

namespace losmimo::cli
{
    namespace fs = std::filesystem;

    std::vector<double> parse_grid(const std::string &text)
    {
        const auto number = [&](const std::string &s) {
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(s, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (used == 0 || used != s.size() || !std::isfinite(v))
                throw InvalidArgument(fmt::format("grid '{}': '{}' is not a number", text, s));
            return v;
        };
        const auto split = [](const std::string &s, char sep) {
            std::vector<std::string> parts;
            std::stringstream ss(s);
            for (std::string p; std::getline(ss, p, sep);)
                parts.push_back(p);
            if (!s.empty() && s.back() == sep)
                parts.emplace_back();
            return parts;
        };

        std::vector<double> grid;
        if (text.find(':') != std::string::npos)
        {
            const auto parts = split(text, ':');
            if (parts.size() != 3)
                throw InvalidArgument(fmt::format("grid '{}': expected start:step:stop", text));
            const double start = number(parts[0]), step = number(parts[1]), stop = number(parts[2]);
            if (!(step > 0.0))
                throw InvalidArgument(fmt::format("grid '{}': step must be positive", text));
            if (start <= stop)
            {
                // a few ulps of slack so that 0.05:0.05:3 ends on 3
                const auto count = std::size_t(std::floor((stop - start) / step * (1.0 + 1e-12) + 1e-9)) + 1;
                grid.reserve(count);
                for (std::size_t i = 0; i < count; ++i)
                    grid.push_back(start + double(i) * step);
            }
        }
        else
        {
            for (const auto &p : split(text, ','))
                grid.push_back(number(p));
        }
        if (grid.empty())
            throw InvalidArgument(fmt::format("grid '{}' is empty", text));
        return grid;
    }

    namespace
    {
        // Writes to the file named by `path`, or to `fallback` when the path is empty
        void emit(const std::string &path, std::ostream &fallback, const std::function<void(std::ostream &)> &write)
        {
            if (path.empty())
            {
                write(fallback);
                return;
            }
            std::ofstream file(path, std::ios::binary);
            if (!file)
                throw InvalidArgument(fmt::format("cannot write '{}'", path));
            write(file);
            if (!file)
                throw InvalidArgument(fmt::format("error while writing '{}'", path));
        }

        std::string sidecar_path(const std::string &out, const char *extension)
        {
            return fs::path(out).replace_extension(extension).string();
        }

        std::vector<double> snr_list(const std::vector<std::string> &flag, const SceneConfig &config)
        {
            std::vector<double> snr;
            for (const auto &s : flag)
            {
                const auto g = parse_grid(s);
                snr.insert(snr.end(), g.begin(), g.end());
            }
            if (snr.empty())
                snr = config.snr_db;
            if (snr.empty())
                throw InvalidArgument("no SNR given: pass --snr-db or set snr_db in the configuration");
            return snr;
        }

        std::optional<SweepVariable> parse_variable(const std::string &s)
        {
            for (auto v : {SweepVariable::SNR_DB, SweepVariable::ETA, SweepVariable::FREQUENCY_HZ,
                           SweepVariable::ROTATION_RAD, SweepVariable::TILT_RAD, SweepVariable::OFFSET_M})
                if (to_string(v) == s)
                    return v;
            return std::nullopt;
        }

        struct Options
        {
            std::string config;
            std::string out;
            std::string format = "csv";
            std::string model;
            std::vector<std::string> snr_db;
            // sweep
            std::string variable;
            std::string grid;
            unsigned threads = 0;
            // optimize
            std::string mode = "rotation";
            int k = 3;
            std::string snr_grid;
            bool independent = false;
            // validity
            std::string freq_grid;
            std::string dist_grid;
            double tx_aperture = 0.0;
            double rx_aperture = 0.0;
            // phase-profile
            double freq = 0.0;
            double distance = 0.0;
            int steps = 0;
            double step_size = 1e-3;
            std::string direction = "transverse";
        };

        WavefrontModel model_of(const Options &o, const SceneConfig &config)
        {
            if (o.model.empty())
                return config.model;
            return *parse_wavefront_model(o.model);
        }

        int cmd_channel(const Options &o, std::ostream &out)
        {
            const auto config = load_scene_config(o.config);
            const auto h = channel_matrix(build_scene(config), model_of(o, config));
            if (o.format == "json")
            {
                emit(o.out, out, [&](std::ostream &os) { os << io::channel_to_json(h); });
                return EXIT_OK;
            }
            emit(o.out, out, [&](std::ostream &os) { io::write_channel_csv(os, h); });
            if (!o.out.empty())
                emit(sidecar_path(o.out, ".json"), out, [&](std::ostream &os) { os << io::channel_sidecar_json(h); });
            return EXIT_OK;
        }

        int cmd_capacity(const Options &o, std::ostream &out)
        {
            const auto config = load_scene_config(o.config);
            const auto snr = snr_list(o.snr_db, config);
            const auto h = channel_matrix(build_scene(config), model_of(o, config));
            const auto spectrum = gain_spectrum(h);
            std::vector<RateReport> reports;
            for (double s : snr)
                reports.push_back(rate_report_db(spectrum, s));
            emit(o.out, out, [&](std::ostream &os) {
                if (o.format == "json")
                    os << io::rate_reports_json(reports);
                else
                    io::write_rate_reports_csv(os, reports);
            });
            return EXIT_OK;
        }

        void write_rows(const Options &o, std::ostream &out, const std::vector<io::TableRow> &rows)
        {
            emit(o.out, out, [&](std::ostream &os) {
                if (o.format == "json")
                    os << io::table_json(rows);
                else
                    io::write_table_csv(os, rows);
            });
        }

        int cmd_sweep(const Options &o, std::ostream &out)
        {
            const auto config = load_scene_config(o.config);
            const auto variable = parse_variable(o.variable);
            if (!variable)
                throw InvalidArgument(fmt::format("unknown sweep variable '{}'", o.variable));
            double snr_db = 0.0;
            if (*variable != SweepVariable::SNR_DB)
            {
                const auto snr = snr_list(o.snr_db, config);
                if (snr.size() != 1)
                    throw InvalidArgument("a sweep takes a single --snr-db value");
                snr_db = snr.front();
            }
            SweepSpec spec{*variable, parse_grid(o.grid), build_scene(config), model_of(o, config), snr_db};
            const auto points = sweep(spec, o.threads);
            write_rows(o, out, io::table_rows(points));
            return EXIT_OK;
        }

        int cmd_optimize(const Options &o, std::ostream &out, std::ostream &err)
        {
            const auto config = load_scene_config(o.config);
            const auto snr = o.snr_grid.empty() ? snr_list({}, config) : parse_grid(o.snr_grid);
            const auto scene = build_scene(config);
            const auto model = model_of(o, config);
            const auto mode = o.independent ? RotationMode::INDEPENDENT : RotationMode::SYMMETRIC;

            if (o.mode == "rotation")
            {
                write_rows(o, out, io::table_rows(rotation_plan(scene, snr, model, mode)));
                return EXIT_OK;
            }
            if (o.mode == "aosa")
            {
                if (config.tx.n != config.rx.n)
                    throw UnsupportedArchetype("aosa mode needs the same antenna count at both ends");
                std::optional<double> element_spacing;
                if (config.tx.type == Archetype::AOSA)
                    element_spacing = config.tx.element_spacing_m;
                write_rows(o, out, io::table_rows(aosa_schedule(config.tx.n, scene, snr, model, element_spacing)));
                return EXIT_OK;
            }
            // angles
            const auto selection = select_fixed_angles(scene, o.k, snr, model);
            write_rows(o, out, io::table_rows(fixed_angle_plan(scene, selection.angles_rad, snr, model)));
            nlohmann::json summary;
            summary["k"] = o.k;
            summary["angles_rad"] = selection.angles_rad;
            summary["worst_relative_gap"] = selection.worst_relative_gap;
            if (o.out.empty())
                err << summary.dump() << '\n';
            else
                emit(sidecar_path(o.out, ".angles.json"), out, [&](std::ostream &os) { os << summary.dump(2) << '\n'; });
            return EXIT_OK;
        }

        int cmd_validity(const Options &o, std::ostream &out)
        {
            if (!(o.tx_aperture > 0.0) || !(o.rx_aperture > 0.0))
                throw InvalidArgument("apertures must be positive");
            const auto freqs = parse_grid(o.freq_grid);
            const auto dists = parse_grid(o.dist_grid);
            for (double f : freqs)
                if (!(f > 0.0))
                    throw InvalidArgument("frequencies must be positive");
            for (double d : dists)
                if (!(d > 0.0))
                    throw InvalidArgument("distances must be positive");
            emit(o.out, out, [&](std::ostream &os) {
                os << "freq_hz,dist_m,regime\n";
                for (double f : freqs)
                    for (double d : dists)
                        os << io::format_double(f) << ',' << io::format_double(d) << ','
                           << to_string(classify_validity(o.tx_aperture, o.rx_aperture, wavelength_from_frequency(f), d))
                           << '\n';
            });
            return EXIT_OK;
        }

        int cmd_phase_profile(const Options &o, std::ostream &out, std::ostream &err)
        {
            if (!(o.freq > 0.0) || !(o.distance > 0.0) || !(o.step_size > 0.0))
                throw InvalidArgument("--freq, --distance and --step-size must be positive");
            const double lambda = wavelength_from_frequency(o.freq);
            const Vec3 tx = Vec3::Zero();
            Vec3 start, direction;
            if (o.direction == "transverse")
            {
                // centred on broadside
                start = Vec3(-0.5 * double(o.steps - 1) * o.step_size, 0.0, o.distance);
                direction = Vec3::UnitX();
            }
            else
            {
                start = Vec3(0.0, 0.0, o.distance);
                direction = Vec3::UnitZ();
            }
            const auto profile = phase_profile(tx, start, o.step_size, o.steps, direction, lambda);
            const double c2_predicted = -std::numbers::pi / (lambda * o.distance);
            emit(o.out, out, [&](std::ostream &os) { io::write_phase_profile_csv(os, profile); });
            const auto summary = io::phase_profile_summary_json(profile, c2_predicted);
            if (o.out.empty())
                err << summary;
            else
                emit(sidecar_path(o.out, ".json"), out, [&](std::ostream &os) { os << summary; });
            return EXIT_OK;
        }
    }

    int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"Line-of-sight MIMO channels, capacity and array architectures", "losmimo"};
        app.require_subcommand(1);
        Options o;

        const auto add_config = [&](CLI::App *c) {
            c->add_option("config", o.config, "Scene configuration (YAML)")->required()->check(CLI::ExistingFile);
            c->add_option("--model", o.model, "Override the configured wavefront model")
                ->check(CLI::IsMember({"spherical", "fresnel", "planar"}));
        };
        const auto add_output = [&](CLI::App *c) {
            c->add_option("--out", o.out, "Output file (stdout if omitted)");
            c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        };

        auto *channel = app.add_subcommand("channel", "Channel matrix of a scene");
        add_config(channel);
        add_output(channel);

        auto *capacity = app.add_subcommand("capacity", "Waterfilling rate and bounds at one or more SNRs");
        add_config(capacity);
        add_output(capacity);
        capacity->add_option("--snr-db", o.snr_db, "SNR values in dB (list or start:step:stop)");

        auto *sweep_cmd = app.add_subcommand("sweep", "Rate table over one scene variable");
        add_config(sweep_cmd);
        add_output(sweep_cmd);
        sweep_cmd->add_option("--var", o.variable, "Swept variable")
            ->required()
            ->check(CLI::IsMember({"snr", "eta", "freq", "rotation", "tilt", "offset"}));
        sweep_cmd->add_option("--grid", o.grid, "start:step:stop or a comma separated list")->required();
        sweep_cmd->add_option("--snr-db", o.snr_db, "SNR in dB when another variable is swept");
        sweep_cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

        auto *optimize = app.add_subcommand("optimize", "Best architecture configuration per SNR");
        add_config(optimize);
        add_output(optimize);
        optimize->add_option("--mode", o.mode, "rotation, aosa or angles")
            ->check(CLI::IsMember({"rotation", "aosa", "angles"}));
        optimize->add_option("--k", o.k, "Number of fixed angles (angles mode)")->check(CLI::PositiveNumber);
        optimize->add_option("--snr-grid", o.snr_grid, "SNR grid in dB, start:step:stop or a list");
        optimize->add_flag("--independent", o.independent, "Rotate transmitter and receiver independently");

        auto *validity = app.add_subcommand("validity", "Planar/spherical wavefront regime map");
        validity->add_option("--freq-grid", o.freq_grid, "Carrier frequencies in Hz")->required();
        validity->add_option("--dist-grid", o.dist_grid, "Link distances in m")->required();
        validity->add_option("--tx-aperture", o.tx_aperture, "Transmit aperture in m")->required();
        validity->add_option("--rx-aperture", o.rx_aperture, "Receive aperture in m")->required();
        validity->add_option("--out", o.out, "Output file (stdout if omitted)");

        auto *profile = app.add_subcommand("phase-profile", "Phase along a synthetic receive aperture");
        profile->add_option("--freq", o.freq, "Carrier frequency in Hz")->required();
        profile->add_option("--distance", o.distance, "Link distance in m")->required();
        profile->add_option("--steps", o.steps, "Number of receive positions")->required();
        profile->add_option("--step-size", o.step_size, "Displacement per step in m");
        profile->add_option("--direction", o.direction, "transverse or longitudinal")
            ->check(CLI::IsMember({"transverse", "longitudinal"}));
        profile->add_option("--out", o.out, "Profile CSV; the summary goes next to it as .json");

        try
        {
            std::vector<std::string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);
        }
        catch (const CLI::CallForHelp &)
        {
            out << app.help();
            return EXIT_OK;
        }
        catch (const CLI::CallForAllHelp &)
        {
            out << app.help("", CLI::AppFormatMode::All);
            return EXIT_OK;
        }
        catch (const CLI::ParseError &e)
        {
            err << "error: " << e.what() << '\n';
            return EXIT_CONFIG;
        }

        try
        {
            if (channel->parsed())
                return cmd_channel(o, out);
            if (capacity->parsed())
                return cmd_capacity(o, out);
            if (sweep_cmd->parsed())
                return cmd_sweep(o, out);
            if (optimize->parsed())
                return cmd_optimize(o, out, err);
            if (validity->parsed())
                return cmd_validity(o, out);
            return cmd_phase_profile(o, out, err);
        }
        catch (const NyquistViolation &e)
        {
            err << "error: " << e.what() << " (step " << e.step_index() << ")\n";
            return EXIT_NUMERICAL;
        }
        catch (const NoSignal &e)
        {
            err << "error: " << e.what() << '\n';
            return EXIT_NUMERICAL;
        }
        catch (const DegenerateGeometry &e)
        {
            err << "error: degenerate geometry: " << e.what() << '\n';
            return EXIT_DEGENERATE;
        }
        catch (const UnsupportedArchetype &e)
        {
            err << "error: " << e.what() << '\n';
            return EXIT_INCOMPATIBLE;
        }
        catch (const std::invalid_argument &e)
        {
            err << "error: " << e.what() << '\n';
            return EXIT_CONFIG;
        }
        catch (const std::exception &e)
        {
            err << "error: " << e.what() << '\n';
            return EXIT_NUMERICAL;
        }
    }
}
