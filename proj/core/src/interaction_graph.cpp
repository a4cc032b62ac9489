#include "curveswarm/interaction_graph.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <set>
#include <string>

#include "curveswarm/curve_geometry.hpp"
#include "curveswarm/errors.hpp"

namespace curveswarm {

std::vector<double> jacobi_eigenvalues(SymmetricMatrix a, double tolerance, int max_sweeps) {
  const int n = a.size();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    double scale = 0.0;
    for (int p = 0; p < n; ++p) {
      scale += a(p, p) * a(p, p);
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off <= tolerance * tolerance * std::max(scale, 1.0)) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::vector<double> circulant_eigenvalues(int n, std::span<const int> offsets) {
  std::vector<double> eig(static_cast<std::size_t>(n), 0.0);
  for (int l = 0; l < n; ++l) {
    double sum = 0.0;
    for (const int o : offsets) {
      const double c = std::cos(kTwoPi * l * o / n);
      sum += (2 * o == n) ? 1.0 - c : 2.0 * (1.0 - c);
    }
    eig[static_cast<std::size_t>(l)] = sum;
  }
  return eig;
}

bool is_circulant_matrix(const SymmetricMatrix& m) {
  const int n = m.size();
  for (int r = 1; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (m(r, c) != m(0, ((c - r) % n + n) % n)) return false;
    }
  }
  return true;
}

InteractionGraph::InteractionGraph(int n, std::vector<Edge> edges) : n_(n), laplacian_(n) {
  if (n < 2) throw InvalidArgument("a graph needs at least 2 nodes");
  std::set<Edge> unique;
  for (auto [j, k] : edges) {
    if (j < 0 || k < 0 || j >= n || k >= n) throw InvalidArgument("edge endpoint out of range");
    if (j == k) throw InvalidArgument("self loops are not allowed");
    unique.insert({std::min(j, k), std::max(j, k)});
  }
  edges_.assign(unique.begin(), unique.end());
  neighbors_.assign(static_cast<std::size_t>(n), {});
  for (auto [j, k] : edges_) {
    neighbors_[static_cast<std::size_t>(j)].push_back(k);
    neighbors_[static_cast<std::size_t>(k)].push_back(j);
    laplacian_(j, k) = -1.0;
    laplacian_(k, j) = -1.0;
    laplacian_(j, j) += 1.0;
    laplacian_(k, k) += 1.0;
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
  circulant_ = is_circulant_matrix(laplacian_);
}

InteractionGraph InteractionGraph::circulant(int n, std::vector<int> offsets) {
  if (n < 2) throw InvalidArgument("a circulant graph needs at least 2 nodes");
  if (offsets.empty()) throw InvalidArgument("circulant offsets must be nonempty");
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
  int g = n;
  for (const int o : offsets) {
    if (o < 1 || 2 * o > n) throw InvalidArgument("circulant offset " + std::to_string(o) + " outside [1, n/2]");
    g = std::gcd(g, o);
  }
  if (g != 1) throw Disconnected("circulant offsets share a common factor with n; graph is disconnected");

  std::vector<Edge> edges;
  for (int k = 0; k < n; ++k) {
    for (const int o : offsets) edges.push_back({k, (k + o) % n});
  }
  InteractionGraph graph(n, std::move(edges));
  graph.offsets_ = offsets;
  graph.eigenvalues_ = circulant_eigenvalues(n, offsets);
  std::sort(graph.eigenvalues_.begin(), graph.eigenvalues_.end());
  return graph;
}

InteractionGraph InteractionGraph::from_edges(int n, std::vector<Edge> edges) {
  InteractionGraph graph(n, std::move(edges));
  graph.eigenvalues_ = jacobi_eigenvalues(graph.laplacian_);
  if (!(graph.algebraic_connectivity() > 1e-10)) throw Disconnected("edge list does not connect every node");
  if (graph.circulant_) {
    for (int c = 1; 2 * c <= n; ++c) {
      if (graph.laplacian_(0, c) != 0.0) graph.offsets_.push_back(c);
    }
  }
  return graph;
}

double phase_potential(const InteractionGraph& graph, std::span<const double> psi) {
  return 0.5 * edge_disagreement(graph, psi);
}

double phase_potential_quadratic(const InteractionGraph& graph, std::span<const double> psi) {
  const int n = graph.size();
  const SymmetricMatrix& lap = graph.laplacian();
  double form = 0.0;
  for (int j = 0; j < n; ++j) {
    std::complex<double> row{0.0, 0.0};
    for (int k = 0; k < n; ++k) row += lap(j, k) * std::polar(1.0, psi[static_cast<std::size_t>(k)]);
    form += (std::conj(std::polar(1.0, psi[static_cast<std::size_t>(j)])) * row).real();
  }
  return 0.5 * form;
}

double phase_potential_gradient(const InteractionGraph& graph, std::span<const double> psi, int k) {
  double g = 0.0;
  const double pk = psi[static_cast<std::size_t>(k)];
  for (const int j : graph.neighbors(k)) g -= std::sin(psi[static_cast<std::size_t>(j)] - pk);
  return g;
}

std::vector<double> phase_potential_gradient(const InteractionGraph& graph, std::span<const double> psi) {
  std::vector<double> grad(static_cast<std::size_t>(graph.size()));
  for (int k = 0; k < graph.size(); ++k) grad[static_cast<std::size_t>(k)] = phase_potential_gradient(graph, psi, k);
  return grad;
}

double edge_disagreement(const InteractionGraph& graph, std::span<const double> psi) {
  double h = 0.0;
  for (auto [j, k] : graph.edges()) {
    h += std::norm(std::polar(1.0, psi[static_cast<std::size_t>(j)]) - std::polar(1.0, psi[static_cast<std::size_t>(k)]));
  }
  return h;
}

std::pair<double, double> phase_order(std::span<const double> psi) {
  if (psi.empty()) return {0.0, 0.0};
  std::complex<double> sum{0.0, 0.0};
  for (const double p : psi) sum += std::polar(1.0, p);
  sum /= static_cast<double>(psi.size());
  return {std::abs(sum), std::arg(sum)};
}

}  // namespace curveswarm
