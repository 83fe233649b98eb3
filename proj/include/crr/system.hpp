// SPDX-License-Identifier: Apache-2.0
//
// crregion: Pareto boundary of the CRB-rate region for a point-to-point
// MIMO integrated-sensing-and-communication link.

#ifndef CRR_SYSTEM_HPP
#define CRR_SYSTEM_HPP

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace crr {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Sensing performance measure. PointAngle is the angle-estimation bound for
// a point target; Trace/MaxEig/LogDet are scalarizations of the bound matrix
// for full response-matrix estimation of an extended target.
enum class CrbMetric { PointAngle = 1, Trace = 2, MaxEig = 3, LogDet = 4 };

inline int scenario_index(CrbMetric m) { return static_cast<int>(m); }

inline CrbMetric metric_from_scenario(int s) {
    if (s < 1 || s > 4) throw std::invalid_argument("scenario must be 1..4");
    return static_cast<CrbMetric>(s);
}

inline const char* metric_name(CrbMetric m) {
    switch (m) {
        case CrbMetric::PointAngle: return "point_angle";
        case CrbMetric::Trace:      return "trace";
        case CrbMetric::MaxEig:     return "maxeig";
        case CrbMetric::LogDet:     return "logdet";
    }
    return "?";
}

// All scalar parameters of the link. Powers and noise variances are linear
// (not dB). target_angle and the LOS angles are radians.
struct SystemParams {
    int m_tx = 8;          // transmit antennas M
    int n_rx_sense = 12;   // sensing receive antennas N_s
    int n_rx_comm = 6;     // communication receive antennas N_c
    int cpi_len = 128;     // coherent processing interval L, must exceed m_tx
    double power = 800.0;  // transmit power budget P
    double noise_comm = 1.0;
    double noise_sense = 1.0;
    cplx reflect_coeff{1e-3, 0.0};  // point-target reflection coefficient
    double target_angle = 0.0;
    double rician_k = 100.0;        // Rician K-factor of the comm channel
    double los_aod = 0.5235987755982988;  // pi/6
    double los_aoa = 0.5235987755982988;
    std::uint64_t seed = 1;
    double eta_epsilon = 1e-6;  // perturbation for the eta -> 1 sensing corner

    void validate() const {
        if (m_tx <= 1) throw std::invalid_argument("m_tx must be > 1");
        if (n_rx_comm <= 1) throw std::invalid_argument("n_rx_comm must be > 1");
        if (n_rx_sense < 1) throw std::invalid_argument("n_rx_sense must be >= 1");
        if (cpi_len <= m_tx) throw std::invalid_argument("cpi_len must be > m_tx");
        if (!(power > 0)) throw std::invalid_argument("power must be > 0");
        if (!(noise_comm > 0)) throw std::invalid_argument("noise_comm must be > 0");
        if (!(noise_sense > 0)) throw std::invalid_argument("noise_sense must be > 0");
        if (rician_k < 0) throw std::invalid_argument("rician_k must be >= 0");
        if (!(eta_epsilon > 0 && eta_epsilon < 1))
            throw std::invalid_argument("eta_epsilon must be in (0,1)");
    }
};

}  // namespace crr

#endif
