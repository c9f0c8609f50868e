#include "locsys/cohom.hpp"

#include <algorithm>

#include "locsys/errors.hpp"

namespace locsys {

namespace {

std::size_t sq(int n) { return static_cast<std::size_t>(n * n); }

Matrix vector_to_matrix(const ModVector& v, std::size_t offset, int n) {
  Matrix m(n);
  for (std::size_t i = 0; i < sq(n); ++i) m.entries[i] = v[offset + i];
  return m;
}

struct Residual {
  CoeffRing field;
  std::vector<Matrix> images;
  std::vector<Matrix> inverses;
};

Residual residual_of(const Representation& rep) {
  Residual out{rep.ring.residue_field(), {}, {}};
  for (const auto& m : rep.images) out.images.push_back(reduce_to(m, out.field));
  out.inverses = invert_all(out.images, out.field);
  return out;
}

// Rows of the commutator system M X - X M = 0 for every image.
ModMatrix commutator_system(const std::vector<Matrix>& images, int n, const CoeffRing& ring) {
  const std::size_t dim = sq(n);
  ModMatrix sys(images.size() * dim, dim);
  for (std::size_t g = 0; g < images.size(); ++g) {
    const Matrix& m = images[g];
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const std::size_t row = g * dim + static_cast<std::size_t>(a * n + b);
        for (int c = 0; c < n; ++c) {
          // (M X)_{ab} picks X_{cb} with M_{ac}; (X M)_{ab} picks X_{ac} with M_{cb}.
          auto& left = sys.at(row, static_cast<std::size_t>(c * n + b));
          left = ring.add(left, m.at(a, c));
          auto& right = sys.at(row, static_cast<std::size_t>(a * n + c));
          right = ring.sub(right, m.at(c, b));
        }
      }
    }
  }
  return sys;
}

}  // namespace

ModMatrix ad_matrix(const Matrix& g, const Matrix& g_inverse, const CoeffRing& field) {
  const int n = g.n;
  ModMatrix ad(sq(n), sq(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          ad.at(static_cast<std::size_t>(a * n + b), static_cast<std::size_t>(c * n + d)) =
              field.mul(g.at(a, c), g_inverse.at(d, b));
  return ad;
}

std::vector<Matrix> h0_basis(const Representation& rep) {
  const Residual res = residual_of(rep);
  const auto basis = nullspace_basis(commutator_system(res.images, rep.n, res.field), res.field);
  std::vector<Matrix> out;
  out.reserve(basis.size());
  for (const auto& v : basis) out.push_back(vector_to_matrix(v, 0, rep.n));
  return out;
}

std::vector<Matrix> cochain_matrices(const ModVector& v, int n, int r) {
  std::vector<Matrix> out;
  for (int i = 0; i < r; ++i) out.push_back(vector_to_matrix(v, static_cast<std::size_t>(i) * sq(n), n));
  return out;
}

ModMatrix linearized_relator_map(const Representation& rep) {
  const Residual res = residual_of(rep);
  const std::size_t dim = sq(rep.n);
  const auto r = static_cast<std::size_t>(rep.pres->rank());
  const auto& relators = rep.pres->relators();
  ModMatrix lin(relators.size() * dim, r * dim);
  for (std::size_t w = 0; w < relators.size(); ++w) {
    for (std::size_t i = 0; i < r; ++i) {
      const FoxDerivative d = fox_derivative(relators[w], static_cast<int>(i));
      for (const auto& term : d.terms) {
        const Matrix u = word_eval(term.prefix, res.images, res.inverses, res.field);
        const ModMatrix ad = ad_matrix(u, mat_inverse(u, res.field), res.field);
        for (std::size_t a = 0; a < dim; ++a) {
          for (std::size_t b = 0; b < dim; ++b) {
            auto& cell = lin.at(w * dim + a, i * dim + b);
            cell = term.sign > 0 ? res.field.add(cell, ad.at(a, b))
                                 : res.field.sub(cell, ad.at(a, b));
          }
        }
      }
    }
  }
  return lin;
}

CocycleSpace cocycle_spaces(const Representation& rep) {
  const Residual res = residual_of(rep);
  const CoeffRing& field = res.field;
  const std::size_t dim = sq(rep.n);
  const auto r = static_cast<std::size_t>(rep.pres->rank());

  CocycleSpace out;
  out.n = rep.n;
  out.r = rep.pres->rank();
  out.ambient_dim = r * dim;

  const ModMatrix lin = linearized_relator_map(rep);
  out.z1_basis = nullspace_basis(lin, field);

  // Coboundaries of the standard basis E_cd.
  std::vector<ModMatrix> ads;
  for (std::size_t i = 0; i < r; ++i) ads.push_back(ad_matrix(res.images[i], res.inverses[i], field));
  std::vector<ModVector> coboundaries;
  for (std::size_t e = 0; e < dim; ++e) {
    ModVector v(r * dim, 0);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t a = 0; a < dim; ++a) {
        v[i * dim + a] = field.sub(a == e ? 1 : 0, ads[i].at(a, e));
      }
    }
    coboundaries.push_back(std::move(v));
  }
  out.b1_basis = span_basis(coboundaries, r * dim, field);

  out.z1 = out.z1_basis.size();
  out.b1 = out.b1_basis.size();
  out.h0 = h0_basis(rep).size();
  out.h1 = out.z1 - out.b1;

  for (const auto& b : out.b1_basis) {
    for (std::size_t row = 0; row < lin.rows(); ++row) {
      Residue acc = 0;
      for (std::size_t c = 0; c < lin.cols(); ++c) acc = field.add(acc, field.mul(lin.at(row, c), b[c]));
      if (acc != 0) throw StructuralError("cocycle_spaces: coboundary fails the cocycle condition");
    }
  }
  if (out.h0 + out.b1 != dim) {
    throw StructuralError("cocycle_spaces: h0 + b1 != n^2");
  }
  if (out.b1 > out.z1) throw StructuralError("cocycle_spaces: b1 > z1");
  return out;
}

std::vector<Matrix> naive_lift(const Representation& rep) {
  const CoeffRing up = rep.ring.with_level(rep.ring.level() + 1);
  std::vector<Matrix> out;
  for (const auto& m : rep.images) out.push_back(reinterpret_in(m, up));
  return out;
}

ObstructionVector lift_obstruction(const Representation& rep,
                                   const std::vector<Matrix>& lift) {
  const int k = rep.ring.level();
  if (!rep.ring.can_lift()) throw StructuralError("lift_obstruction: p^(k+1) exceeds the modulus cap");
  const CoeffRing up = rep.ring.with_level(k + 1);
  const CoeffRing field = rep.ring.residue_field();
  if (lift.size() != rep.images.size()) throw StructuralError("lift_obstruction: tuple size mismatch");
  for (std::size_t i = 0; i < lift.size(); ++i) {
    if (!is_reduced(lift[i], up) || reduce_to(lift[i], rep.ring) != rep.images[i]) {
      throw StructuralError("lift_obstruction: naive lift does not reduce to the representation");
    }
  }

  const std::size_t dim = sq(rep.n);
  const std::uint64_t pk = rep.ring.modulus();
  ObstructionVector out;
  const auto& relators = rep.pres->relators();
  out.epsilon.assign(relators.size() * dim, 0);
  if (!lift.empty()) {
    const auto inverses = invert_all(lift, up);
    for (std::size_t w = 0; w < relators.size(); ++w) {
      const Matrix value = word_eval(relators[w], lift, inverses, up);
      const Matrix defect = mat_sub(value, Matrix::identity(rep.n), up);
      Matrix eps(rep.n);
      for (std::size_t e = 0; e < dim; ++e) {
        if (defect.entries[e] % pk != 0) {
          throw ShapeViolation("lift_obstruction: relator " + std::to_string(w + 1) +
                               " is not Id mod p^" + std::to_string(k));
        }
        eps.entries[e] = defect.entries[e] / pk;
        out.epsilon[w * dim + e] = eps.entries[e];
      }
      out.per_relator.push_back(eps);
    }
  }

  const ModMatrix lin = linearized_relator_map(rep);
  // Image of lin = row space of its transpose.
  std::vector<ModVector> columns;
  for (std::size_t c = 0; c < lin.cols(); ++c) {
    ModVector col(lin.rows());
    for (std::size_t r = 0; r < lin.rows(); ++r) col[r] = lin.at(r, c);
    columns.push_back(std::move(col));
  }
  const auto image = span_basis(columns, lin.rows(), field);
  out.cokernel_dim = lin.rows() - image.size();
  out.residue = reduce_modulo(out.epsilon, image, field);
  out.liftable = std::ranges::all_of(out.residue, [](Residue x) { return x == 0; });
  if (out.liftable) {
    ModVector rhs(out.epsilon.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = field.neg(out.epsilon[i]);
    out.correction = solve(lin, rhs, field);
    if (!out.correction) throw StructuralError("lift_obstruction: zero class but no correction");
  }
  return out;
}

KernelModule centralizer_module(const Representation& rep) {
  return kernel_module(commutator_system(rep.images, rep.n, rep.ring), rep.ring);
}

std::uint64_t centralizer_unit_count(const Representation& rep) {
  std::uint64_t count = 0;
  const int n = rep.n;
  if (rep.ring.level() == 1) {
    const auto basis = h0_basis(rep);
    std::vector<ModVector> vecs;
    for (const auto& m : basis) vecs.emplace_back(m.flat().begin(), m.flat().end());
    for_each_combination(vecs, sq(n), rep.ring, [&](const ModVector& v) {
      if (is_invertible(vector_to_matrix(v, 0, n), rep.ring)) ++count;
    });
    return count;
  }
  for_each_element(centralizer_module(rep), sq(n), rep.ring, [&](const ModVector& v) {
    if (is_invertible(vector_to_matrix(v, 0, n), rep.ring)) ++count;
  });
  return count;
}

}  // namespace locsys
