// SPDX-License-Identifier: Apache-2.0
#include "crdra/scenario.hpp"

#include "crdra/errors.hpp"

#include <cmath>

namespace crdra {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

Matrix complex_gaussian(Index rows, Index cols, double variance, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(variance / 2.0);
  Matrix m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      const double re = scale * normal(rng);
      const double im = scale * normal(rng);
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

NetworkInstance generate_instance(const Topology& topology, const FadingProcess& fading, std::size_t dim) {
  topology.validate();
  if (fading.dimensions < 1) throw ConfigError("fading: dimension count must be at least 1");
  if (dim >= fading.dimensions) throw ConfigError("fading: dimension index out of range");
  for (double v : {fading.direct_variance, fading.cross_variance, fading.pu_variance}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("fading: variances must be finite and nonnegative");
  }

  auto rng = seeded_engine(fading.seed, dim);
  const std::size_t k_count = topology.users;
  const std::size_t j_count = topology.pus;

  NetworkInstance inst;
  inst.role = topology.role;
  inst.weights.assign(k_count, 1.0);

  // Transmit antenna count of user k's signal.
  auto tx_of = [&](std::size_t k) -> Index {
    return topology.role == Role::BC ? topology.bs_antennas : topology.tx_antennas[k];
  };

  for (std::size_t k = 0; k < k_count; ++k) {
    switch (topology.role) {
      case Role::P2P:
      case Role::IC:
        inst.direct.push_back(complex_gaussian(topology.rx_antennas[k], topology.tx_antennas[k], fading.direct_variance, rng));
        break;
      case Role::MAC:
        inst.direct.push_back(complex_gaussian(topology.bs_antennas, topology.tx_antennas[k], fading.direct_variance, rng));
        break;
      case Role::BC:
        inst.direct.push_back(complex_gaussian(topology.bs_antennas, topology.rx_antennas[k], fading.direct_variance, rng));
        break;
    }
  }

  if (topology.role == Role::IC) {
    inst.cross.assign(k_count, std::vector<ChannelMatrix>(k_count));
    for (std::size_t i = 0; i < k_count; ++i) {
      for (std::size_t k = 0; k < k_count; ++k) {
        if (i == k) continue;
        inst.cross[i][k] = complex_gaussian(topology.rx_antennas[k], topology.tx_antennas[i], fading.cross_variance, rng);
      }
    }
  }

  const std::size_t transmitters = topology.role == Role::BC ? 1 : k_count;
  inst.pu.assign(transmitters, std::vector<ChannelMatrix>(j_count));
  for (std::size_t t = 0; t < transmitters; ++t) {
    for (std::size_t j = 0; j < j_count; ++j) {
      inst.pu[t][j] = complex_gaussian(topology.pu_antennas[j], tx_of(t), fading.pu_variance, rng);
    }
  }

  inst.validate();
  return inst;
}

}  // namespace crdra
