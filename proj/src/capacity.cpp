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

#include "losmimo/capacity.hpp"
#include "losmimo/errors.hpp"
#include "losmimo/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

namespace losmimo
{
    namespace
    {
        constexpr double kZeroGain = 1e-12; // relative to the strongest gain

        double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

        void require_snr(double snr_linear)
        {
            if (!(snr_linear > 0.0) || !std::isfinite(snr_linear))
                throw InvalidArgument("SNR must be positive and finite");
        }

        void require_counts(int n_t, int n_r)
        {
            if (n_t < 1 || n_r < 1)
                throw InvalidArgument("antenna counts must be positive");
        }
    }

    double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

    GainSpectrum::GainSpectrum(std::vector<double> gains, int n_t, int n_r)
        : gains_(std::move(gains)), n_t_(n_t), n_r_(n_r)
    {
        require_counts(n_t, n_r);
        if (gains_.size() != std::size_t(std::min(n_t, n_r)))
            throw InvalidArgument("spectrum length must be min(n_t, n_r)");
        for (double g : gains_)
            if (!(g >= 0.0) || !std::isfinite(g))
                throw InvalidArgument("gains must be non-negative and finite");
        std::sort(gains_.begin(), gains_.end(), std::greater<>());
    }

    GainSpectrum::GainSpectrum(std::vector<double> gains)
        : GainSpectrum(gains, int(gains.size()), int(gains.size()))
    {
    }

    double GainSpectrum::total() const { return std::accumulate(gains_.begin(), gains_.end(), 0.0); }

    int GainSpectrum::numerical_rank() const
    {
        if (gains_.empty() || !(gains_.front() > 0.0))
            return 0;
        const double floor = kZeroGain * gains_.front();
        return int(std::count_if(gains_.begin(), gains_.end(), [floor](double g) { return g > floor; }));
    }

    GainSpectrum gain_spectrum(const Eigen::MatrixXcd &h)
    {
        if (h.size() == 0)
            throw InvalidArgument("empty channel matrix");
        if (!h.allFinite())
            throw InvalidArgument("channel matrix has non-finite entries");
        const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXcd>(h).singularValues();
        std::vector<double> gains(std::size_t(s.size()));
        for (Eigen::Index i = 0; i < s.size(); ++i)
            gains[std::size_t(i)] = s(i) * s(i);
        return GainSpectrum(std::move(gains), int(h.cols()), int(h.rows()));
    }

    GainSpectrum gain_spectrum(const ChannelMatrix &h) { return gain_spectrum(h.entries); }

    WaterfillingResult waterfilling(const GainSpectrum &spectrum, double snr_linear)
    {
        require_snr(snr_linear);
        const auto &g = spectrum.gains();
        const int usable = spectrum.numerical_rank();
        if (usable == 0)
            throw NoSignal("spectrum has no positive gain");

        // largest k whose weakest stream still gets positive power at water level mu
        int k = usable;
        double mu = 0.0;
        for (; k >= 1; --k)
        {
            double inv_sum = 0.0;
            for (int i = 0; i < k; ++i)
                inv_sum += 1.0 / (snr_linear * g[std::size_t(i)]);
            mu = (1.0 + inv_sum) / double(k);
            if (mu - 1.0 / (snr_linear * g[std::size_t(k - 1)]) > 0.0)
                break;
        }

        WaterfillingResult out;
        out.allocation.fractions.assign(g.size(), 0.0);
        double sum = 0.0;
        for (int i = 0; i < k; ++i)
        {
            const double p = mu - 1.0 / (snr_linear * g[std::size_t(i)]);
            out.allocation.fractions[std::size_t(i)] = p;
            sum += p;
        }
        for (int i = 0; i < k; ++i)
        {
            double &p = out.allocation.fractions[std::size_t(i)];
            p /= sum;
            out.spectral_efficiency_bpshz += log2_1p(snr_linear * p * g[std::size_t(i)]);
        }
        out.active_rank = k;
        return out;
    }

    double uniform_rate(const GainSpectrum &spectrum, double snr_linear, int rank)
    {
        require_snr(snr_linear);
        if (rank < 1 || std::size_t(rank) > spectrum.size())
            throw InvalidArgument("rank must lie in [1, spectrum length]");
        double se = 0.0;
        for (int i = 0; i < rank; ++i)
            se += log2_1p(snr_linear * spectrum.gains()[std::size_t(i)] / double(rank));
        return se;
    }

    double polarized_rate(int n_t, int n_r, double rank, double snr_linear)
    {
        require_counts(n_t, n_r);
        require_snr(snr_linear);
        if (!(rank >= 1.0) || rank > double(std::min(n_t, n_r)))
            throw InvalidArgument("rank must lie in [1, min(n_t, n_r)]");
        return rank * log2_1p(snr_linear * double(n_t) * double(n_r) / (rank * rank));
    }

    double polarized_rate(int n_t, int n_r, int rank, double snr_linear)
    {
        return polarized_rate(n_t, n_r, double(rank), snr_linear);
    }

    double integer_capacity_bound(int n_t, int n_r, double snr_linear)
    {
        require_counts(n_t, n_r);
        double best = 0.0;
        for (int r = 1; r <= std::min(n_t, n_r); ++r)
            best = std::max(best, polarized_rate(n_t, n_r, r, snr_linear));
        return best;
    }

    UpperBound capacity_upper_bound_solution(int n_t, int n_r, double snr_linear)
    {
        require_counts(n_t, n_r);
        require_snr(snr_linear);
        const int n_min = std::min(n_t, n_r);
        const auto rate = [&](double r) { return polarized_rate(n_t, n_r, r, snr_linear); };
        if (n_min == 1)
            return {rate(1.0), 1.0};

        constexpr int kGrid = 64;
        const double step = double(n_min - 1) / double(kGrid - 1);
        int best_i = 0;
        double best = rate(1.0);
        for (int i = 1; i < kGrid; ++i)
        {
            const double v = rate(i == kGrid - 1 ? double(n_min) : 1.0 + step * double(i));
            if (v > best)
            {
                best = v;
                best_i = i;
            }
        }
        UpperBound out{best, best_i == kGrid - 1 ? double(n_min) : 1.0 + step * double(best_i)};

        const double lo = 1.0 + step * double(std::max(best_i - 1, 0));
        const double hi = std::min(double(n_min), 1.0 + step * double(std::min(best_i + 1, kGrid - 1)));
        const ScalarOptimum refined = golden_section_maximize(rate, lo, hi, 1e-10 * double(n_min));
        if (refined.value > out.bpshz)
            out = {refined.value, refined.x};

        // the relaxation must dominate every integer rank; guards a non-unimodal scan
        for (int r = 1; r <= n_min; ++r)
        {
            const double v = rate(double(r));
            if (v > out.bpshz)
                out = {v, double(r)};
        }
        return out;
    }

    double capacity_upper_bound(int n_t, int n_r, double snr_linear)
    {
        return capacity_upper_bound_solution(n_t, n_r, snr_linear).bpshz;
    }

    RateReport rate_report(const GainSpectrum &spectrum, double snr_linear)
    {
        const WaterfillingResult wf = waterfilling(spectrum, snr_linear);
        RateReport r;
        r.snr_linear = snr_linear;
        r.spectral_efficiency_bpshz = wf.spectral_efficiency_bpshz;
        r.allocation = wf.allocation;
        r.active_rank = wf.active_rank;
        r.upper_bound_bpshz = capacity_upper_bound(spectrum.n_t(), spectrum.n_r(), snr_linear);
        r.integer_bound_bpshz = integer_capacity_bound(spectrum.n_t(), spectrum.n_r(), snr_linear);
        r.snr_db = linear_to_db(snr_linear);
        return r;
    }

    RateReport rate_report(const ChannelMatrix &h, double snr_linear)
    {
        return rate_report(gain_spectrum(h), snr_linear);
    }

    RateReport rate_report_db(const GainSpectrum &spectrum, double snr_db)
    {
        RateReport r = rate_report(spectrum, db_to_linear(snr_db));
        r.snr_db = snr_db;
        return r;
    }
}
