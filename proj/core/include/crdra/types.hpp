// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace crdra {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Dense complex channel gains; rows are receive antennas, columns transmit
/// antennas. Validated on entry to every solver (finite, non-empty).
using ChannelMatrix = Matrix;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Upper bound on any antenna, user or PU count accepted by the generator.
inline constexpr std::size_t kMaxDimension = 64;

/// Relative PSD tolerance: min eigenvalue >= -kPsdTolerance * trace.
inline constexpr double kPsdTolerance = 1e-9;

enum class Role { P2P, MAC, BC, IC };

std::string to_string(Role role);

/// Antenna layout of one secondary network.
///
/// - P2P: one link, `tx_antennas[0]` = N, `rx_antennas[0]` = M.
/// - MAC: `bs_antennas` = M at the receiving base station, `tx_antennas[k]` = N_k.
/// - BC:  `bs_antennas` = M at the transmitting base station, `rx_antennas[k]` = N_k.
/// - IC:  `tx_antennas[k]` = A_k, `rx_antennas[k]` = B_k.
///
/// `pu_antennas[j]` = D_j for every role.
struct Topology {
  Role role = Role::P2P;
  std::size_t users = 1;
  std::size_t pus = 0;
  Index bs_antennas = 0;
  std::vector<Index> tx_antennas;
  std::vector<Index> rx_antennas;
  std::vector<Index> pu_antennas;

  static Topology point_to_point(Index tx, Index rx, std::vector<Index> pu_antennas);
  static Topology mac(Index bs, std::vector<Index> tx, std::vector<Index> pu_antennas);
  static Topology bc(Index bs, std::vector<Index> rx, std::vector<Index> pu_antennas);
  static Topology ic(std::vector<Index> tx, std::vector<Index> rx, std::vector<Index> pu_antennas);

  /// Throws ConfigError on inconsistent or out-of-range counts.
  void validate() const;
};

/// Channel realization of one network at one transmit dimension.
///
/// Channel conventions:
/// - `direct[k]`: P2P `H` (M x N); MAC `H_k` (M x N_k); BC `H_k` (M x N_k) in
///   uplink form, so the downlink channel to user k is `H_k^H`; IC `H_kk`.
/// - `cross[i][k]`: IC only, channel from transmitter i to receiver k
///   (B_k x A_i). Diagonal entries are unused and left empty.
/// - `pu[t][j]`: channel from secondary transmitter t to PU j. BC has a single
///   transmitter, so only `pu[0]` exists and holds `F_j`.
struct NetworkInstance {
  Role role = Role::P2P;
  std::vector<ChannelMatrix> direct;
  std::vector<std::vector<ChannelMatrix>> cross;
  std::vector<std::vector<ChannelMatrix>> pu;
  std::vector<double> weights;

  std::size_t users() const { return direct.size(); }
  std::size_t pus() const { return pu.empty() ? 0 : pu.front().size(); }

  /// Side length of user k's transmit covariance.
  Index covariance_size(std::size_t user) const;

  /// Channel from the transmitter serving `user` to PU `j`.
  const ChannelMatrix& pu_channel(std::size_t user, std::size_t j) const;

  /// Throws DomainError if channel shapes disagree or entries are not finite.
  void validate() const;

  /// Throws DomainError unless weights are nonnegative and nonincreasing.
  void require_sorted_weights() const;
};

/// Generalized linear transmit covariance constraint:
/// sum_i Tr(W_i S_i) <= threshold.
struct Gltcc {
  std::vector<Matrix> weight;  // one Hermitian PSD matrix per user
  double threshold = 0.0;
};

/// Transmit and interference power budgets for one network.
struct ConstraintSet {
  struct Budget {
    std::size_t index = 0;  // user index for transmit budgets, PU index otherwise
    double value = 0.0;
  };
  std::vector<Budget> ptpc;
  std::vector<Budget> atpc;
  std::vector<Budget> pipc;
  std::vector<Budget> aipc;
  std::vector<Gltcc> gltcc;

  void validate() const;

  /// Peak constraints rewritten as GLTCCs for the given single-dimension
  /// instance (PTPC first, then PIPC), followed by any explicit GLTCC terms.
  std::vector<Gltcc> peak_as_gltcc(const NetworkInstance& instance) const;
};

/// One transmit covariance per user per dimension.
class CovarianceSet {
 public:
  CovarianceSet() = default;
  CovarianceSet(std::size_t users, std::size_t dims) : users_(users), dims_(dims), data_(users * dims) {}

  /// Zero covariances with the given side length per user.
  static CovarianceSet zeros(const std::vector<Index>& sizes, std::size_t dims = 1);

  std::size_t users() const { return users_; }
  std::size_t dims() const { return dims_; }

  Matrix& operator()(std::size_t user, std::size_t dim = 0) { return data_[user * dims_ + dim]; }
  const Matrix& operator()(std::size_t user, std::size_t dim = 0) const { return data_[user * dims_ + dim]; }

  CovarianceSet scaled(double factor) const;

  /// (1 - t) a + t b, elementwise.
  static CovarianceSet blend(const CovarianceSet& a, const CovarianceSet& b, double t);

  /// Throws DomainError if any matrix is non-Hermitian or not PSD within tolerance.
  void validate() const;

 private:
  std::size_t users_ = 0;
  std::size_t dims_ = 0;
  std::vector<Matrix> data_;
};

enum class FadingDistribution { RayleighIid };

/// Seeded generator description for channel realizations over L dimensions.
struct FadingProcess {
  std::size_t dimensions = 1;
  std::uint64_t seed = 0;
  FadingDistribution distribution = FadingDistribution::RayleighIid;
  double direct_variance = 1.0;
  double cross_variance = 1.0;
  double pu_variance = 1.0;
};

}  // namespace crdra
