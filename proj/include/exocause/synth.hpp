#pragma once

#include <cstdint>
#include <vector>

#include "exocause/dataset.hpp"

namespace exocause {

/// Generator settings for the synthetic families:
///   no confounder:  y = (x + b x^3) e^{alpha_mix E} + (1 - alpha_mix) E
///   with confounder: x = (2 - beta) E_x + beta Z,
///                    y = 0.3 (2 - beta) [(x + b x^3) e^{alpha_mix E} + (1 - alpha_mix) E] + beta Z
/// where every base variable is a power-transformed standard Gaussian with
/// exponent q.
struct SynthConfig {
    std::size_t n = 500;
    double q = 1.0;          // power-nonlinearity exponent
    double b = 0.0;          // cubic coefficient
    double alpha_mix = 0.0;  // additive (0) .. multiplicative (1) noise
    double beta_conf = 0.0;  // confounder strength; 0 disables it
    std::uint64_t seed = 0;

    void validate() const;
};

/// z ~ N(0,1) mapped to sign(z) |z|^q.
std::vector<double> power_nongaussian(std::size_t n, double q, std::uint64_t seed);

PairedSample gen_pair(const SynthConfig& cfg);

PairedSample gen_confounded(const SynthConfig& cfg);

}  // namespace exocause
