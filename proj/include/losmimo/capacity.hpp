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

#ifndef LOSMIMO_CAPACITY_HPP
#define LOSMIMO_CAPACITY_HPP

#include "losmimo/channel.hpp"

#include <Eigen/Dense>
#include <vector>

namespace losmimo
{
    double db_to_linear(double db);
    double linear_to_db(double linear);

    // Squared singular values, sorted descending; length min(n_t, n_r).
    class GainSpectrum
    {
    public:
        GainSpectrum(std::vector<double> gains, int n_t, int n_r);
        explicit GainSpectrum(std::vector<double> gains); // square link with n_t = n_r = gains.size()

        const std::vector<double> &gains() const noexcept { return gains_; }
        int n_t() const noexcept { return n_t_; }
        int n_r() const noexcept { return n_r_; }
        std::size_t size() const noexcept { return gains_.size(); }
        double total() const;

        // Number of gains above 1e-12 of the strongest
        int numerical_rank() const;

    private:
        std::vector<double> gains_;
        int n_t_;
        int n_r_;
    };

    GainSpectrum gain_spectrum(const Eigen::MatrixXcd &h);
    GainSpectrum gain_spectrum(const ChannelMatrix &h);

    struct PowerAllocation
    {
        std::vector<double> fractions; // of the total transmit power, summing to 1
    };

    struct WaterfillingResult
    {
        PowerAllocation allocation;
        double spectral_efficiency_bpshz = 0.0;
        int active_rank = 0;
    };

    // Maximizes sum_i log2(1 + snr p_i g_i) subject to sum_i p_i = 1, p_i >= 0.
    // Unit-variance noise per receive antenna, total transmit power = snr.
    WaterfillingResult waterfilling(const GainSpectrum &spectrum, double snr_linear);

    // Equal power over the `rank` strongest gains
    double uniform_rate(const GainSpectrum &spectrum, double snr_linear, int rank);

    // r equal gains of n_t n_r / r with uniform power: r log2(1 + snr n_t n_r / r^2)
    double polarized_rate(int n_t, int n_r, int rank, double snr_linear);
    double polarized_rate(int n_t, int n_r, double rank, double snr_linear); // continuous rank

    struct UpperBound
    {
        double bpshz;
        double rank; // maximizing (real-valued) rank
    };

    // Polarized rate maximized over real rank in [1, min(n_t, n_r)]: coarse 64-point scan,
    // then golden-section refinement around the best grid point.
    UpperBound capacity_upper_bound_solution(int n_t, int n_r, double snr_linear);
    double capacity_upper_bound(int n_t, int n_r, double snr_linear);

    // Polarized rate maximized over integer rank only (never above capacity_upper_bound)
    double integer_capacity_bound(int n_t, int n_r, double snr_linear);

    struct RateReport
    {
        double snr_linear = 0.0;
        double spectral_efficiency_bpshz = 0.0;
        PowerAllocation allocation;
        int active_rank = 0;
        double upper_bound_bpshz = 0.0;
        double integer_bound_bpshz = 0.0;
        double snr_db = 0.0; // as requested by the caller; dB -> linear -> dB does not round-trip exactly
    };

    RateReport rate_report(const GainSpectrum &spectrum, double snr_linear);
    RateReport rate_report(const ChannelMatrix &h, double snr_linear);
    // Same report for an SNR given in dB, which is kept verbatim in `snr_db`
    RateReport rate_report_db(const GainSpectrum &spectrum, double snr_db);
}

#endif
