#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ehencky/constitutive.hpp"
#include "ehencky/tensor2.hpp"

namespace ehencky {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

/// P1 triangulation of a planar reference domain with the current (deformed) nodal positions.
struct MeshState {
  std::vector<Vec2> nodes;
  /// Counterclockwise node-index triples.
  std::vector<std::array<int, 3>> triangles;
  /// Node indices with Dirichlet data, sorted.
  std::vector<int> boundary_nodes;
  /// Current positions phi(X), one per node.
  std::vector<Vec2> deformed;

  std::size_t node_count() const noexcept { return nodes.size(); }
};

/// Structured mesh of [0, width] x [0, height]; each cell is split along its (0,0)-(1,1) diagonal.
/// Every boundary node is Dirichlet and the deformed state is the identity.
MeshState build_rect_mesh(int nx, int ny, double width, double height);

/// Signed reference area of triangle `t`.
double reference_area(const MeshState& m, std::size_t t);

/// Constant deformation gradient of the affine map on triangle `t`.
Mat2 element_gradient(const MeshState& m, std::size_t t);

/// Smallest det F over elements.
double min_element_det(const MeshState& m);

/// Sum of area * W(F_element); +inf if any element has det F <= 0.
double total_energy(const MaterialParams& p, const MeshState& m);

/// dI/dx per node, assembled from element S1 and the shape-function gradients. Dirichlet entries
/// are zero. Throws InadmissibleState when the total energy is +inf.
std::vector<Vec2> energy_gradient(const MaterialParams& p, const MeshState& m);

using BoundaryMap = std::function<Vec2(const Vec2&)>;

/// x -> F0 x.
BoundaryMap affine_map(const Mat2& f0);

/// Places the Dirichlet data on boundary nodes and extends the least-squares affine fit of that
/// data to interior nodes. Returns false (and leaves interior nodes at the identity) when the fit
/// produces an inverted element.
bool apply_dirichlet(MeshState& m, const BoundaryMap& phi0);

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 20000;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_halvings = 60;
  /// Keep the energy of every accepted iterate in SolveResult::energy_history.
  bool record_history = true;
};

enum class SolveStatus {
  converged,
  /// Line search failed max_halvings consecutive times; the best state is returned.
  no_descent,
  max_iterations,
};

struct SolveResult {
  SolveStatus status = SolveStatus::converged;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  /// Minimum over accepted iterates of the smallest element determinant.
  double min_element_det = 0.0;
  std::vector<double> energy_history;
  MeshState deformed;
};

/// Gradient descent with Armijo backtracking on the free nodal positions.
///
/// The trial step starts from the Barzilai-Borwein length and is halved until the Armijo condition
/// holds; a trial with +inf energy simply fails the test, so det F > 0 is kept on every element.
/// Energy decreases too small to show in the difference of two totals are measured by integrating
/// the gradient along the step; energy_history accumulates these decreases and is nonincreasing.
/// Stops when |grad| <= tol (1 + |I|). Throws InadmissibleState if the initial energy is +inf.
SolveResult minimize(const MaterialParams& p, MeshState m, const SolveOptions& opts = {});

/// Plain-text export: `node x y u v` lines (reference position and displacement phi(X) - X),
/// then `tri i j k` lines.
void write_mesh(std::ostream& out, const MeshState& m);

/// Reads the format of write_mesh; boundary nodes are recovered as nodes of the domain's bounding box.
MeshState read_mesh(std::istream& in);

std::string solve_status_name(SolveStatus s);

}  // namespace ehencky
