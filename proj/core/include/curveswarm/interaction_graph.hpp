#pragma once

#include <span>
#include <utility>
#include <vector>

namespace curveswarm {

/// Dense row-major symmetric matrix, sized for desk-scale agent counts.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * n_ + c]; }
  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * n_ + c]; }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> jacobi_eigenvalues(SymmetricMatrix a, double tolerance = 1e-14, int max_sweeps = 100);

/// Unordered edge {first, second} with first < second.
using Edge = std::pair<int, int>;

/// Undirected, connected, unweighted interaction graph and its Laplacian.
class InteractionGraph {
 public:
  /// Node k is adjacent to k +/- o (mod n) for every offset o in [1, n/2].
  /// Throws Disconnected when gcd(n, offsets...) != 1.
  static InteractionGraph circulant(int n, std::vector<int> offsets);

  /// Explicit edge list; duplicate and reversed pairs are merged.
  /// Throws Disconnected for a disconnected graph.
  static InteractionGraph from_edges(int n, std::vector<Edge> edges);

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<int>& neighbors(int k) const { return neighbors_[static_cast<std::size_t>(k)]; }
  const SymmetricMatrix& laplacian() const { return laplacian_; }
  bool is_circulant() const { return circulant_; }
  /// Circulant offsets; empty for a non-circulant graph.
  const std::vector<int>& offsets() const { return offsets_; }

  /// Ascending Laplacian spectrum.
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  double lambda_max() const { return eigenvalues_.back(); }
  double algebraic_connectivity() const { return eigenvalues_.size() > 1 ? eigenvalues_[1] : 0.0; }

 private:
  InteractionGraph(int n, std::vector<Edge> edges);

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
  SymmetricMatrix laplacian_;
  bool circulant_ = false;
  std::vector<int> offsets_;
  std::vector<double> eigenvalues_;
};

/// lambda_l = sum_o 2(1 - cos(2 pi (l-1) o / n)), l = 1..n (offset n/2 counts once).
std::vector<double> circulant_eigenvalues(int n, std::span<const int> offsets);

/// True when every row of the matrix is a cyclic shift of the first row.
bool is_circulant_matrix(const SymmetricMatrix& m);

/// Curve-phase potential W = 1/2 sum_{edges} |e^{i psi_j} - e^{i psi_k}|^2.
double phase_potential(const InteractionGraph& graph, std::span<const double> psi);

/// Same potential through the Laplacian quadratic form 1/2 <e^{i psi}, L e^{i psi}>.
double phase_potential_quadratic(const InteractionGraph& graph, std::span<const double> psi);

/// Gradient dW/dpsi_k = -sum_{j in N_k} sin(psi_j - psi_k).
std::vector<double> phase_potential_gradient(const InteractionGraph& graph, std::span<const double> psi);
double phase_potential_gradient(const InteractionGraph& graph, std::span<const double> psi, int k);

/// H = sum_{edges} |e^{i psi_j} - e^{i psi_k}|^2 = 2 W.
double edge_disagreement(const InteractionGraph& graph, std::span<const double> psi);

/// Phase order parameter p = (1/N) sum e^{i psi_k}, returned as (|p|, arg p).
std::pair<double, double> phase_order(std::span<const double> psi);

}  // namespace curveswarm
