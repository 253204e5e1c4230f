/*
   Copyright 2026 The mcd2d Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cmath>
#include <numbers>

namespace mcd2d {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

/// Distance-based attenuation l(r) = A r^alpha.
struct PathLossModel {
    double intercept = 1.0;
    double exponent = 3.5;

    double operator()(double r) const { return intercept * std::pow(r, exponent); }
    double inverse(double attenuation) const {
        return std::pow(attenuation / intercept, 1.0 / exponent);
    }
};

/// Thermal noise as it is usually quoted: PSD, receiver noise figure, bandwidth.
struct NoiseSpec {
    double psd_dbm_per_hz = -174.0;
    double noise_figure_db = 9.0;
    double bandwidth_hz = 10.0e6;

    /// sigma^2 in watts.
    double power_watts() const {
        return dbm_to_watts(psd_dbm_per_hz + noise_figure_db + 10.0 * std::log10(bandwidth_hz));
    }
};

/// Every scalar of the multicast model. All quantities are linear scale and SI.
struct SystemParams {
    double lambda_b = 0.0;         ///< BS density [1/m^2]
    double lambda_m = 0.0;         ///< D2D transmitter density [1/m^2]
    double lambda_r = 0.0;         ///< receiver density inside a cluster [1/m^2]
    double cluster_radius = 0.0;   ///< R [m]
    double threshold = 0.0;        ///< detection threshold T (linear SINR)
    int tau_m = 1;                 ///< number of multicast transmissions
    double alpha = 3.5;            ///< path-loss exponent, > 2
    double pathloss_intercept = 1.0;
    double p_bs = 0.0;             ///< BS transmit power [W]
    double p_d2d = 0.0;            ///< D2D transmit power [W]
    double noise_power = 0.0;      ///< sigma^2 [W]
    double eta = 0.95;             ///< reliability target (optimizer)
    int budget = 2;                ///< assistance budget per cell (optimizer)

    /// Table I of the reference scenario. Cluster radius is not part of the
    /// table; 150 m is used unless a sweep overrides it.
    static SystemParams table_one();

    PathLossModel path_loss() const { return {pathloss_intercept, alpha}; }
    double snr_inv() const { return noise_power / p_d2d; }
    double snr_c_inv() const { return noise_power / p_bs; }
    double n_max() const { return lambda_r * std::numbers::pi * cluster_radius * cluster_radius; }

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;
};

/// Stable 64-bit fingerprint of every field, for CSV preambles.
unsigned long long params_hash(const SystemParams& p);

} // namespace mcd2d
