#include "fem/assembly.hpp"

#include <Eigen/SparseLU>
#include <iostream>

#include "mesh/quadrature.hpp"

namespace cornerfem {

namespace {

using Triplet = Eigen::Triplet<Complex>;

// Element loop shared by the form assemblers. Emits triplets per chunk and
// merges them in chunk order so the result is independent of the worker count.
void element_triplets(const CoefficientSet& beta, const FeSpace& space, int quad_order,
                      std::vector<Triplet>& out) {
  const Mesh& mesh = space.mesh();
  const int nl = space.n_local();
  const TriangleRule& rule = TriangleRule::get(quad_order);

  std::size_t nchunks = 0;
  std::vector<std::vector<Triplet>> chunk_triplets(std::size_t(num_threads()) + 1);
  parallel_chunks(
      std::size_t(mesh.n_triangles()),
      [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        std::vector<Triplet>& buf = chunk_triplets[chunk];
        std::vector<double> val(static_cast<std::size_t>(nl));
        std::vector<Vec2> grad(static_cast<std::size_t>(nl));
        Eigen::MatrixXcd local(nl, nl);
        for (std::size_t t = begin; t < end; ++t) {
          auto c = mesh.corners(int(t));
          MappedQuadrature q = map_rule(rule, c[0], c[1], c[2]);
          local.setZero();
          for (std::size_t k = 0; k < q.points.size(); ++k) {
            const Vec2& x = q.points[k];
            double w = q.weights[k];
            space.basis(int(t), x, val.data(), grad.data());
            Complex a11 = beta.a[0][0]->value(x), a12 = beta.a[0][1]->value(x);
            Complex a21 = beta.a[1][0]->value(x), a22 = beta.a[1][1]->value(x);
            Complex b1 = beta.b[0]->value(x), b2 = beta.b[1]->value(x);
            Complex b3 = beta.b[2]->value(x), b4 = beta.b[3]->value(x);
            Complex cc = beta.c->value(x);
            for (int j = 0; j < nl; ++j) {    // trial
              Complex fx = a11 * grad[std::size_t(j)].x() + a12 * grad[std::size_t(j)].y() +
                           b3 * val[std::size_t(j)];
              Complex fy = a21 * grad[std::size_t(j)].x() + a22 * grad[std::size_t(j)].y() +
                           b4 * val[std::size_t(j)];
              Complex conv = b1 * grad[std::size_t(j)].x() + b2 * grad[std::size_t(j)].y() +
                             cc * val[std::size_t(j)];
              for (int i = 0; i < nl; ++i) {  // test
                local(i, j) += w * (fx * grad[std::size_t(i)].x() + fy * grad[std::size_t(i)].y() +
                                    conv * val[std::size_t(i)]);
              }
            }
          }
          for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nl; ++j)
              buf.emplace_back(space.element_dof(int(t), i), space.element_dof(int(t), j),
                               local(i, j));
        }
      },
      &nchunks);
  for (std::size_t c = 0; c < nchunks; ++c)
    out.insert(out.end(), chunk_triplets[c].begin(), chunk_triplets[c].end());
}

int default_order(const FeSpace& space, int quad_order) {
  return quad_order > 0 ? quad_order : 2 * space.degree() + 4;
}

}  // namespace

SparseC assemble_form(const CoefficientSet& beta, const FeSpace& space, int quad_order) {
  std::vector<Triplet> trips;
  element_triplets(beta, space, default_order(space, quad_order), trips);
  SparseC full(space.n_dofs(), space.n_dofs());
  full.setFromTriplets(trips.begin(), trips.end());
  return full;
}

Eigen::VectorXcd assemble_load(const FeSpace& space, const FieldPtr& f, const NeumannData& h,
                               int quad_order) {
  const Mesh& mesh = space.mesh();
  const int nl = space.n_local();
  const int order = default_order(space, quad_order);
  Eigen::VectorXcd F = Eigen::VectorXcd::Zero(space.n_dofs());

  if (f && !is_zero_field(f)) {
    const TriangleRule& rule = TriangleRule::get(order);
    std::vector<double> val(static_cast<std::size_t>(nl));
    std::vector<Vec2> grad(static_cast<std::size_t>(nl));
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      auto c = mesh.corners(t);
      MappedQuadrature q = map_rule(rule, c[0], c[1], c[2]);
      for (std::size_t k = 0; k < q.points.size(); ++k) {
        Complex fv = f->value(q.points[k]);
        if (fv == Complex(0.0)) continue;
        space.basis(t, q.points[k], val.data(), grad.data());
        for (int i = 0; i < nl; ++i)
          F[space.element_dof(t, i)] += q.weights[k] * fv * val[std::size_t(i)];
      }
    }
  }

  if (h) {
    const GaussLegendre& gl = GaussLegendre::get(space.degree() + 3);
    for (const auto& be : mesh.boundary_edges()) {
      if (be.label != BcLabel::Neumann) continue;
      Vec2 pa = mesh.node(be.a), pb = mesh.node(be.b);
      Vec2 d = pb - pa;
      double len = d.norm();
      Vec2 nu(d.y() / len, -d.x() / len);  // interior on the left of a->b
      int mid_dof = space.edge_dof(be.a, be.b);
      for (std::size_t k = 0; k < gl.points.size(); ++k) {
        double s = gl.points[k];
        Vec2 x = pa + s * d;
        Complex hv = h(x, nu);
        double w = gl.weights[k] * len;
        if (space.degree() == 1) {
          F[be.a] += w * hv * (1 - s);
          F[be.b] += w * hv * s;
        } else {
          F[be.a] += w * hv * (1 - s) * (1 - 2 * s);
          F[be.b] += w * hv * s * (2 * s - 1);
          F[mid_dof] += w * hv * (4 * s * (1 - s));
        }
      }
    }
  }
  return F;
}

LinearSystem assemble(const CoefficientSet& beta, std::shared_ptr<const FeSpace> space,
                      const FieldPtr& f, const NeumannData& h, const FieldPtr& dirichlet_data,
                      int quad_order) {
  LinearSystem sys;
  sys.space = space;
  sys.full = assemble_form(beta, *space, quad_order);
  sys.F_full = assemble_load(*space, f, h, quad_order);

  const int n = space->n_dofs();
  sys.constrained_values = Eigen::VectorXcd::Zero(n);
  if (dirichlet_data) {
    for (int d = 0; d < n; ++d)
      if (space->is_dirichlet(d)) sys.constrained_values[d] = dirichlet_data->value(space->dof_point(d));
  }

  // symmetric elimination: keep the free block, move lifting to the rhs
  const int nf = space->n_free();
  sys.F.resize(nf);
  Eigen::VectorXcd lift = sys.full * sys.constrained_values;
  for (int d = 0; d < n; ++d) {
    int fi = space->free_index(d);
    if (fi >= 0) sys.F[fi] = sys.F_full[d] - lift[d];
  }
  std::vector<Triplet> trips;
  for (int col = 0; col < sys.full.outerSize(); ++col)
    for (SparseC::InnerIterator it(sys.full, col); it; ++it) {
      int fi = space->free_index(int(it.row()));
      int fj = space->free_index(int(it.col()));
      if (fi >= 0 && fj >= 0) trips.emplace_back(fi, fj, it.value());
    }
  sys.A.resize(nf, nf);
  sys.A.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

SparseR h1_gram(const FeSpace& space) {
  const Mesh& mesh = space.mesh();
  const int nl = space.n_local();
  const TriangleRule& rule = TriangleRule::get(2 * space.degree() + 2);
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> val(static_cast<std::size_t>(nl));
  std::vector<Vec2> grad(static_cast<std::size_t>(nl));
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    auto c = mesh.corners(t);
    MappedQuadrature q = map_rule(rule, c[0], c[1], c[2]);
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      space.basis(t, q.points[k], val.data(), grad.data());
      for (int i = 0; i < nl; ++i) {
        int fi = space.free_index(space.element_dof(t, i));
        if (fi < 0) continue;
        for (int j = 0; j < nl; ++j) {
          int fj = space.free_index(space.element_dof(t, j));
          if (fj < 0) continue;
          double v = q.weights[k] * (val[std::size_t(i)] * val[std::size_t(j)] +
                                     grad[std::size_t(i)].dot(grad[std::size_t(j)]));
          trips.emplace_back(fi, fj, v);
        }
      }
    }
  }
  SparseR M(space.n_free(), space.n_free());
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

FeFunction solve(const LinearSystem& sys, double rtol) {
  Eigen::SparseLU<SparseC> lu;
  lu.compute(sys.A);
  if (lu.info() != Eigen::Success)
    throw NumericalError("not coercive / singular system (sparse LU factorization failed)");
  Eigen::VectorXcd u = lu.solve(sys.F);

  double fnorm = sys.F.norm();
  double res = (sys.A * u - sys.F).norm();
  if (fnorm > 0 && res > rtol * fnorm) {
    // one step of iterative refinement before giving up
    Eigen::VectorXcd corr = lu.solve(sys.F - sys.A * u);
    u += corr;
    res = (sys.A * u - sys.F).norm();
  }
  if (!u.allFinite() || (fnorm > 0 && res > rtol * fnorm))
    throw NumericalError("not coercive / singular system (residual " + format_double(res) +
                         " exceeds contract; log|det| = " + format_double(lu.logAbsDeterminant().real()) +
                         ")");

  FeFunction out;
  out.space = sys.space;
  out.values = sys.constrained_values;
  for (int k = 0; k < sys.space->n_free(); ++k) out.values[sys.space->dof_of_free(k)] = u[k];
  return out;
}

double residual(const LinearSystem& sys, const FeFunction& u) {
  Eigen::VectorXcd uf(sys.space->n_free());
  for (int k = 0; k < sys.space->n_free(); ++k) uf[k] = u.values[sys.space->dof_of_free(k)];
  double fnorm = sys.F.norm();
  return (sys.A * uf - sys.F).norm() / (fnorm > 0 ? fnorm : 1.0);
}

void write_solution(const FeFunction& u, std::ostream& out) {
  out << "solution 1\n" << u.values.size() << '\n';
  for (Eigen::Index k = 0; k < u.values.size(); ++k)
    out << format_double(u.values[k].real()) << ' ' << format_double(u.values[k].imag()) << '\n';
}

Eigen::VectorXcd read_solution(std::istream& in) {
  std::string word, version;
  if (!(in >> word >> version) || word != "solution" || version != "1")
    throw ValidationError("malformed solution header");
  long long n;
  if (!(in >> n) || n < 0) throw ValidationError("malformed solution count");
  Eigen::VectorXcd v(n);
  for (long long k = 0; k < n; ++k) {
    double re, im;
    if (!(in >> re >> im)) throw ValidationError("malformed solution line");
    v[k] = Complex(re, im);
  }
  return v;
}

}  // namespace cornerfem
