#pragma once

#include <span>
#include <vector>

#include "hsb/logreal.hpp"

namespace hsb {

enum class LayerSide { Left, Right };

/// Strictly increasing node set on [0,1], first node exactly 0, last exactly 1.
class Mesh {
 public:
  /// n cells, n >= 2, equispaced nodes.
  static Mesh uniform(int n);

  /// Piecewise-uniform layer-adapted mesh: transition point
  /// tau = min(1/2, (2*eps/qbar) * ln n), n/2 cells inside the layer region
  /// and n/2 outside. n even, n >= 4.
  static Mesh shishkin(int n, double eps, double qbar, LayerSide side);

  static Mesh from_nodes(std::vector<double> nodes);

  std::span<const double> nodes() const { return nodes_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int cell_count() const { return node_count() - 1; }
  double operator[](int i) const { return nodes_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<double> nodes_;
};

/// Values attached to the nodes of a mesh.
struct GridFunction {
  Mesh mesh;
  std::vector<double> values;
};

/// Log-domain grid function: carrier of the transformed variable u whose
/// dynamic range exceeds doubles.
struct LogGridFunction {
  Mesh mesh;
  std::vector<LogReal> values;
};

/// Tensor-product grid on the unit square.
struct TensorGrid2D {
  Mesh x1;
  Mesh x2;
};

/// Log-domain field on a tensor grid, row-major: values[j * nx + i] holds
/// the node (x1[i], x2[j]).
struct LogField2D {
  TensorGrid2D grid;
  std::vector<LogReal> values;
};

}  // namespace hsb
