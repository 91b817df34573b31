#include "hsb/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "hsb/error.hpp"

namespace hsb {

Mesh Mesh::uniform(int n) {
  if (n < 2) raise(Errc::invalid_argument, "uniform mesh needs n >= 2 cells");
  Mesh m;
  m.nodes_.resize(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i)
    m.nodes_[static_cast<std::size_t>(i)] =
        static_cast<double>(i) / static_cast<double>(n);
  m.nodes_.front() = 0.0;
  m.nodes_.back() = 1.0;
  return m;
}

Mesh Mesh::shishkin(int n, double eps, double qbar, LayerSide side) {
  if (n < 4 || n % 2 != 0)
    raise(Errc::invalid_argument, "Shishkin mesh needs even n >= 4");
  if (!(eps > 0.0) || !(qbar > 0.0))
    raise(Errc::invalid_argument, "Shishkin mesh needs eps > 0 and qbar > 0");

  const double tau =
      std::min(0.5, (2.0 * eps / qbar) * std::log(static_cast<double>(n)));
  const int half = n / 2;

  // Left-layer node set; the right variant is its exact reflection.
  std::vector<double> left(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= half; ++i)
    left[static_cast<std::size_t>(i)] =
        tau * static_cast<double>(i) / static_cast<double>(half);
  for (int i = half + 1; i <= n; ++i)
    left[static_cast<std::size_t>(i)] =
        tau + (1.0 - tau) * static_cast<double>(i - half) /
                  static_cast<double>(half);
  left.front() = 0.0;
  left.back() = 1.0;

  Mesh m;
  if (side == LayerSide::Left) {
    m.nodes_ = std::move(left);
  } else {
    m.nodes_.resize(left.size());
    for (std::size_t i = 0; i < left.size(); ++i)
      m.nodes_[i] = 1.0 - left[left.size() - 1 - i];
    m.nodes_.front() = 0.0;
    m.nodes_.back() = 1.0;
  }

  for (std::size_t i = 1; i < m.nodes_.size(); ++i)
    if (!(m.nodes_[i] > m.nodes_[i - 1]))
      raise(Errc::invalid_argument,
            "Shishkin mesh degenerated; eps or n out of range");
  return m;
}

Mesh Mesh::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 3)
    raise(Errc::invalid_argument, "mesh needs at least 3 nodes");
  if (nodes.front() != 0.0 || nodes.back() != 1.0)
    raise(Errc::invalid_argument, "mesh must span [0,1] exactly");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1]))
      raise(Errc::invalid_argument, "mesh nodes must be strictly increasing");
  Mesh m;
  m.nodes_ = std::move(nodes);
  return m;
}

}  // namespace hsb
