// SPDX-License-Identifier: Apache-2.0
#include "crdra/types.hpp"

#include "crdra/errors.hpp"
#include "crdra/linalg.hpp"

#include <cmath>

namespace crdra {

std::string to_string(Role role) {
  switch (role) {
    case Role::P2P: return "p2p";
    case Role::MAC: return "mac";
    case Role::BC: return "bc";
    case Role::IC: return "ic";
  }
  return "unknown";
}

Topology Topology::point_to_point(Index tx, Index rx, std::vector<Index> pu_antennas) {
  Topology t;
  t.role = Role::P2P;
  t.users = 1;
  t.pus = pu_antennas.size();
  t.tx_antennas = {tx};
  t.rx_antennas = {rx};
  t.pu_antennas = std::move(pu_antennas);
  return t;
}

Topology Topology::mac(Index bs, std::vector<Index> tx, std::vector<Index> pu_antennas) {
  Topology t;
  t.role = Role::MAC;
  t.users = tx.size();
  t.pus = pu_antennas.size();
  t.bs_antennas = bs;
  t.tx_antennas = std::move(tx);
  t.pu_antennas = std::move(pu_antennas);
  return t;
}

Topology Topology::bc(Index bs, std::vector<Index> rx, std::vector<Index> pu_antennas) {
  Topology t;
  t.role = Role::BC;
  t.users = rx.size();
  t.pus = pu_antennas.size();
  t.bs_antennas = bs;
  t.rx_antennas = std::move(rx);
  t.pu_antennas = std::move(pu_antennas);
  return t;
}

Topology Topology::ic(std::vector<Index> tx, std::vector<Index> rx, std::vector<Index> pu_antennas) {
  Topology t;
  t.role = Role::IC;
  t.users = tx.size();
  t.pus = pu_antennas.size();
  t.tx_antennas = std::move(tx);
  t.rx_antennas = std::move(rx);
  t.pu_antennas = std::move(pu_antennas);
  return t;
}

namespace {

void check_count(Index n, const char* what) {
  if (n < 1 || static_cast<std::size_t>(n) > kMaxDimension) {
    throw ConfigError(std::string("topology: ") + what + " must lie in [1, " + std::to_string(kMaxDimension) + "]");
  }
}

void check_list(const std::vector<Index>& v, std::size_t expected, const char* what) {
  if (v.size() != expected) throw ConfigError(std::string("topology: wrong number of ") + what);
  for (Index n : v) check_count(n, what);
}

}  // namespace

void Topology::validate() const {
  check_count(static_cast<Index>(users), "user count");
  if (pus > kMaxDimension) throw ConfigError("topology: PU count exceeds limit");
  check_list(pu_antennas, pus, "PU antenna counts");
  switch (role) {
    case Role::P2P:
      if (users != 1) throw ConfigError("topology: point-to-point requires exactly one link");
      check_list(tx_antennas, 1, "transmit antenna counts");
      check_list(rx_antennas, 1, "receive antenna counts");
      break;
    case Role::MAC:
      check_count(bs_antennas, "base-station antennas");
      check_list(tx_antennas, users, "transmit antenna counts");
      break;
    case Role::BC:
      check_count(bs_antennas, "base-station antennas");
      check_list(rx_antennas, users, "receive antenna counts");
      break;
    case Role::IC:
      check_list(tx_antennas, users, "transmit antenna counts");
      check_list(rx_antennas, users, "receive antenna counts");
      break;
  }
}

Index NetworkInstance::covariance_size(std::size_t user) const {
  if (role == Role::BC) return direct.at(user).rows();
  return direct.at(user).cols();
}

const ChannelMatrix& NetworkInstance::pu_channel(std::size_t user, std::size_t j) const {
  if (role == Role::BC) return pu.at(0).at(j);
  return pu.at(user).at(j);
}

void NetworkInstance::validate() const {
  const std::size_t k_count = users();
  if (k_count == 0) throw DomainError("instance: no users");
  for (const auto& h : direct) {
    if (h.rows() < 1 || h.cols() < 1) throw DomainError("instance: empty direct channel");
    if (!all_finite(h)) throw DomainError("instance: non-finite direct channel entry");
  }
  if (!weights.empty() && weights.size() != k_count) throw DomainError("instance: weight count differs from user count");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("instance: weights must be finite and nonnegative");
  }
  const std::size_t transmitters = role == Role::BC ? 1 : k_count;
  if (pu.size() != transmitters && !(pu.empty())) throw DomainError("instance: PU channel table has wrong size");
  const std::size_t j_count = pus();
  for (std::size_t t = 0; t < pu.size(); ++t) {
    if (pu[t].size() != j_count) throw DomainError("instance: ragged PU channel table");
    const Index tx = role == Role::BC ? direct[0].rows() : direct[t].cols();
    for (std::size_t j = 0; j < j_count; ++j) {
      const auto& g = pu[t][j];
      if (g.cols() != tx || g.rows() < 1) throw DomainError("instance: PU channel shape mismatch");
      if (!all_finite(g)) throw DomainError("instance: non-finite PU channel entry");
      if (pu[0][j].rows() != g.rows()) throw DomainError("instance: PU antenna count differs across transmitters");
    }
  }
  switch (role) {
    case Role::P2P:
      if (k_count != 1) throw DomainError("instance: point-to-point needs exactly one link");
      break;
    case Role::MAC:
    case Role::BC:
      for (const auto& h : direct) {
        if (h.rows() != direct[0].rows()) throw DomainError("instance: base-station antenna count differs across users");
      }
      break;
    case Role::IC:
      if (cross.size() != k_count) throw DomainError("instance: cross-channel table has wrong size");
      for (std::size_t i = 0; i < k_count; ++i) {
        if (cross[i].size() != k_count) throw DomainError("instance: ragged cross-channel table");
        for (std::size_t k = 0; k < k_count; ++k) {
          if (i == k) continue;
          const auto& c = cross[i][k];
          if (c.rows() != direct[k].rows() || c.cols() != direct[i].cols()) {
            throw DomainError("instance: cross channel shape mismatch");
          }
          if (!all_finite(c)) throw DomainError("instance: non-finite cross channel entry");
        }
      }
      break;
  }
}

void NetworkInstance::require_sorted_weights() const {
  if (weights.size() != users()) throw DomainError("instance: one weight per user is required");
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] < 0.0) throw DomainError("instance: negative rate weight");
    if (k > 0 && weights[k] > weights[k - 1]) {
      throw DomainError("instance: rate weights must be sorted nonincreasing");
    }
  }
}

void ConstraintSet::validate() const {
  auto check = [](const std::vector<Budget>& list, const char* what) {
    for (const auto& b : list) {
      if (!(b.value >= 0.0)) throw DomainError(std::string("constraints: negative ") + what + " budget");
    }
  };
  check(ptpc, "PTPC");
  check(atpc, "ATPC");
  check(pipc, "PIPC");
  check(aipc, "AIPC");
  for (const auto& g : gltcc) {
    if (!(g.threshold >= 0.0)) throw DomainError("constraints: negative GLTCC threshold");
    for (const auto& w : g.weight) {
      if (w.size() == 0) continue;
      require_psd(w, "GLTCC weight");
    }
  }
}

std::vector<Gltcc> ConstraintSet::peak_as_gltcc(const NetworkInstance& instance) const {
  const std::size_t k_count = instance.users();
  auto zero_weights = [&] {
    std::vector<Matrix> w(k_count);
    for (std::size_t i = 0; i < k_count; ++i) {
      const Index n = instance.covariance_size(i);
      w[i] = Matrix::Zero(n, n);
    }
    return w;
  };
  std::vector<Gltcc> out;
  for (const auto& b : ptpc) {
    Gltcc g{zero_weights(), b.value};
    if (instance.role == Role::BC) {
      for (std::size_t i = 0; i < k_count; ++i) g.weight[i].setIdentity();
    } else {
      g.weight.at(b.index).setIdentity();
    }
    out.push_back(std::move(g));
  }
  for (const auto& b : pipc) {
    Gltcc g{zero_weights(), b.value};
    for (std::size_t i = 0; i < k_count; ++i) {
      const auto& ch = instance.pu_channel(i, b.index);
      g.weight[i] = ch.adjoint() * ch;
    }
    out.push_back(std::move(g));
  }
  out.insert(out.end(), gltcc.begin(), gltcc.end());
  return out;
}

CovarianceSet CovarianceSet::zeros(const std::vector<Index>& sizes, std::size_t dims) {
  CovarianceSet s(sizes.size(), dims);
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    for (std::size_t l = 0; l < dims; ++l) s(k, l) = Matrix::Zero(sizes[k], sizes[k]);
  }
  return s;
}

CovarianceSet CovarianceSet::scaled(double factor) const {
  CovarianceSet out = *this;
  for (auto& m : out.data_) m *= factor;
  return out;
}

CovarianceSet CovarianceSet::blend(const CovarianceSet& a, const CovarianceSet& b, double t) {
  if (a.users_ != b.users_ || a.dims_ != b.dims_) throw DomainError("CovarianceSet::blend: shape mismatch");
  CovarianceSet out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] = (1.0 - t) * a.data_[i] + t * b.data_[i];
  return out;
}

void CovarianceSet::validate() const {
  for (const auto& m : data_) require_psd(m, "CovarianceSet");
}

}  // namespace crdra
