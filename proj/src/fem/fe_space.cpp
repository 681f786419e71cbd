#include "fem/fe_space.hpp"

#include <algorithm>

namespace cornerfem {

namespace {
std::pair<int, int> sorted_pair(int a, int b) { return {std::min(a, b), std::max(a, b)}; }
}

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree) {
  if (degree_ != 1 && degree_ != 2) throw ValidationError("polynomial degree must be 1 or 2");
  const Mesh& m = *mesh_;

  n_dofs_ = m.n_nodes();
  if (degree_ == 2) {
    element_edge_dofs_.resize(std::size_t(m.n_triangles()));
    for (int t = 0; t < m.n_triangles(); ++t) {
      const auto& tri = m.triangle(t);
      for (int k = 0; k < 3; ++k) {
        auto key = sorted_pair(tri[std::size_t(k)], tri[std::size_t((k + 1) % 3)]);
        auto it = edge_index_.find(key);
        int id;
        if (it == edge_index_.end()) {
          id = n_dofs_++;
          edge_index_[key] = id;
        } else {
          id = it->second;
        }
        element_edge_dofs_[std::size_t(t)][std::size_t(k)] = id;
      }
    }
  }

  dof_points_.resize(std::size_t(n_dofs_));
  for (int v = 0; v < m.n_nodes(); ++v) dof_points_[std::size_t(v)] = m.node(v);
  for (const auto& [key, id] : edge_index_)
    dof_points_[std::size_t(id)] = 0.5 * (m.node(key.first) + m.node(key.second));

  dirichlet_.assign(std::size_t(n_dofs_), false);
  for (const auto& be : m.boundary_edges()) {
    if (be.label != BcLabel::Dirichlet) continue;
    dirichlet_[std::size_t(be.a)] = true;
    dirichlet_[std::size_t(be.b)] = true;
    if (degree_ == 2) {
      auto it = edge_index_.find(sorted_pair(be.a, be.b));
      if (it != edge_index_.end()) dirichlet_[std::size_t(it->second)] = true;
    }
  }

  free_index_.assign(std::size_t(n_dofs_), -1);
  for (int d = 0; d < n_dofs_; ++d) {
    if (!dirichlet_[std::size_t(d)]) {
      free_index_[std::size_t(d)] = n_free_++;
      free_dofs_.push_back(d);
    }
  }

  geom_.resize(std::size_t(m.n_triangles()));
  for (int t = 0; t < m.n_triangles(); ++t) {
    auto c = m.corners(t);
    double det = cross2(c[1] - c[0], c[2] - c[0]);
    ElementGeometry& g = geom_[std::size_t(t)];
    // lambda_k(x) = (cross(p, q) + cross(q - p, x)) / det with p, q the other corners
    for (int k = 0; k < 3; ++k) {
      const Vec2& p = c[std::size_t((k + 1) % 3)];
      const Vec2& q = c[std::size_t((k + 2) % 3)];
      g.grad_lambda[k] = Vec2(p.y() - q.y(), q.x() - p.x()) / det;
      g.lambda0[k] = cross2(p, q) / det;
    }
  }
}

Vec2 FeSpace::dof_point(int dof) const { return dof_points_[std::size_t(dof)]; }

int FeSpace::edge_dof(int a, int b) const {
  auto it = edge_index_.find(sorted_pair(a, b));
  return it == edge_index_.end() ? -1 : it->second;
}

int FeSpace::element_dof(int t, int local) const {
  const auto& tri = mesh_->triangle(t);
  if (local < 3) return tri[std::size_t(local)];
  return element_edge_dofs_[std::size_t(t)][std::size_t(local - 3)];
}

void FeSpace::basis(int t, const Vec2& x, double* values, Vec2* gradients) const {
  const ElementGeometry& g = geom(t);
  double lam[3];
  for (int k = 0; k < 3; ++k) lam[k] = g.lambda0[k] + g.grad_lambda[k].dot(x);
  if (degree_ == 1) {
    for (int k = 0; k < 3; ++k) {
      values[k] = lam[k];
      gradients[k] = g.grad_lambda[k];
    }
    return;
  }
  for (int k = 0; k < 3; ++k) {
    values[k] = lam[k] * (2 * lam[k] - 1);
    gradients[k] = (4 * lam[k] - 1) * g.grad_lambda[k];
  }
  for (int k = 0; k < 3; ++k) {  // edge dof on (k, k+1)
    int i = k, j = (k + 1) % 3;
    values[3 + k] = 4 * lam[i] * lam[j];
    gradients[3 + k] = 4 * (lam[i] * g.grad_lambda[j] + lam[j] * g.grad_lambda[i]);
  }
}

Jet FeSpace::basis_jet(int t, int local, const Vec2& x, int order) const {
  const ElementGeometry& g = geom(t);
  auto lambda_jet = [&](int k) {
    Jet j = Jet::variable_x(x.x(), order) * Complex(g.grad_lambda[k].x()) +
            Jet::variable_y(x.y(), order) * Complex(g.grad_lambda[k].y());
    j += Complex(g.lambda0[k]);
    return j;
  };
  if (degree_ == 1) return lambda_jet(local);
  if (local < 3) {
    Jet l = lambda_jet(local);
    return l * (2.0 * l - Complex(1.0));
  }
  int i = local - 3, j = (local - 3 + 1) % 3;
  return 4.0 * lambda_jet(i) * lambda_jet(j);
}

Jet FeFunction::element_jet(int t, const Vec2& x, int order) const {
  Jet out = Jet::constant(0.0, order);
  for (int k = 0; k < space->n_local(); ++k) {
    Complex v = values[space->element_dof(t, k)];
    if (v == Complex(0.0)) continue;
    out += v * space->basis_jet(t, k, x, order);
  }
  return out;
}

FeFunction FeFunction::interpolate(std::shared_ptr<const FeSpace> space, const FieldPtr& u) {
  FeFunction f;
  f.space = space;
  f.values.resize(space->n_dofs());
  for (int d = 0; d < space->n_dofs(); ++d) f.values[d] = u->value(space->dof_point(d));
  return f;
}

FeFunction FeFunction::prolong(std::shared_ptr<const FeSpace> fine) const {
  const Mesh& fm = fine->mesh();
  if (fm.n_triangles() != 4 * space->mesh().n_triangles())
    throw ValidationError("prolong expects one uniform refinement of the coarse mesh");
  FeFunction out;
  out.space = fine;
  out.values.resize(fine->n_dofs());
  for (int ft = 0; ft < fm.n_triangles(); ++ft) {
    int parent = ft / 4;
    for (int k = 0; k < fine->n_local(); ++k) {
      int dof = fine->element_dof(ft, k);
      out.values[dof] = eval(parent, fine->dof_point(dof));
    }
  }
  return out;
}

}  // namespace cornerfem
