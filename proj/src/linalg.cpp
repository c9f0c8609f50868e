#include "locsys/linalg.hpp"

#include <utility>

#include "locsys/errors.hpp"

namespace locsys {

namespace {

void require_field(const CoeffRing& field) {
  if (field.level() != 1) {
    throw StructuralError("field linear algebra called over " + field.to_string());
  }
}

}  // namespace

ModVector ModMatrix::row(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

void ModMatrix::append_row(const ModVector& v) {
  if (v.size() != cols_) throw StructuralError("append_row: width mismatch");
  data_.insert(data_.end(), v.begin(), v.end());
  ++rows_;
}

ModMatrix ModMatrix::from_rows(const std::vector<ModVector>& rows, std::size_t cols) {
  ModMatrix m(0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

std::vector<std::size_t> rref(ModMatrix& a, const CoeffRing& field) {
  require_field(field);
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = row;
    while (piv < a.rows() && a.at(piv, col) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != row) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(piv, j), a.at(row, j));
    }
    const Residue s = field.inverse(a.at(row, col));
    for (std::size_t j = col; j < a.cols(); ++j) a.at(row, j) = field.mul(a.at(row, j), s);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row) continue;
      const Residue f = a.at(r, col);
      if (f == 0) continue;
      for (std::size_t j = col; j < a.cols(); ++j) {
        a.at(r, j) = field.sub(a.at(r, j), field.mul(f, a.at(row, j)));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank(ModMatrix a, const CoeffRing& field) { return rref(a, field).size(); }

std::vector<ModVector> nullspace_basis(const ModMatrix& a, const CoeffRing& field) {
  ModMatrix r = a;
  const auto pivots = rref(r, field);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<ModVector> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    ModVector v(a.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = field.neg(r.at(i, free));
    basis.push_back(std::move(v));
  }
  return span_basis(basis, a.cols(), field);
}

std::vector<ModVector> span_basis(const std::vector<ModVector>& vectors, std::size_t dim,
                                  const CoeffRing& field) {
  ModMatrix m = ModMatrix::from_rows(vectors, dim);
  const auto pivots = rref(m, field);
  std::vector<ModVector> out;
  out.reserve(pivots.size());
  for (std::size_t i = 0; i < pivots.size(); ++i) out.push_back(m.row(i));
  return out;
}

std::optional<ModVector> solve(const ModMatrix& a, const ModVector& b, const CoeffRing& field) {
  if (b.size() != a.rows()) throw StructuralError("solve: right-hand side length mismatch");
  ModMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols()) = b[r];
  }
  const auto pivots = rref(aug, field);
  ModVector x(a.cols(), 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == a.cols()) return std::nullopt;
    x[pivots[i]] = aug.at(i, a.cols());
  }
  return x;
}

ModVector reduce_modulo(const ModVector& v, const std::vector<ModVector>& rref_basis,
                        const CoeffRing& field) {
  ModVector out = v;
  for (const auto& row : rref_basis) {
    std::size_t lead = 0;
    while (lead < row.size() && row[lead] == 0) ++lead;
    if (lead == row.size()) continue;
    const Residue f = out[lead];
    if (f == 0) continue;
    for (std::size_t j = lead; j < out.size(); ++j) {
      out[j] = field.sub(out[j], field.mul(f, row[j]));
    }
  }
  return out;
}

void for_each_combination(const std::vector<ModVector>& basis, std::size_t dim,
                          const CoeffRing& field,
                          const std::function<void(const ModVector&)>& visit) {
  KernelModule module;
  module.generators = basis;
  module.orders.assign(basis.size(), field.p());
  for_each_element(module, dim, field, visit);
}

std::uint64_t KernelModule::size() const {
  std::uint64_t total = 1;
  for (auto o : orders) {
    if (o != 0 && total > UINT64_MAX / o) throw StructuralError("kernel module size overflow");
    total *= o;
  }
  return total;
}

KernelModule kernel_module(const ModMatrix& a, const CoeffRing& ring) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  ModMatrix d = a;
  // Column operations applied to d are mirrored on v, so a * v = u^{-1} * d.
  ModMatrix v(cols, cols);
  for (std::size_t i = 0; i < cols; ++i) v.at(i, i) = 1;

  auto swap_cols = [&](ModMatrix& m, std::size_t c1, std::size_t c2) {
    for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m.at(r, c1), m.at(r, c2));
  };
  // col c2 -= f * col c1
  auto sub_col = [&](ModMatrix& m, std::size_t c2, std::size_t c1, Residue f) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      m.at(r, c2) = ring.sub(m.at(r, c2), ring.mul(f, m.at(r, c1)));
    }
  };

  std::vector<int> pivot_valuations;
  std::size_t t = 0;
  for (; t < rows && t < cols; ++t) {
    // Pivot of minimal valuation in the trailing block.
    int best = ring.level();
    std::size_t br = t, bc = t;
    for (std::size_t r = t; r < rows; ++r) {
      for (std::size_t c = t; c < cols; ++c) {
        const int val = ring.valuation(d.at(r, c));
        if (val < best) {
          best = val;
          br = r;
          bc = c;
        }
      }
    }
    if (best == ring.level()) break;
    if (br != t) {
      for (std::size_t c = 0; c < cols; ++c) std::swap(d.at(br, c), d.at(t, c));
    }
    if (bc != t) {
      swap_cols(d, bc, t);
      swap_cols(v, bc, t);
    }
    // pivot = unit * p^best; every other entry in the block is divisible by p^best.
    const std::uint64_t pb = ring.p_power(best);
    const Residue unit = ring.inverse(d.at(t, t) / pb);
    for (std::size_t r = t + 1; r < rows; ++r) {
      const Residue f = ring.mul(d.at(r, t) / pb, unit);
      if (f == 0) continue;
      for (std::size_t c = t; c < cols; ++c) {
        d.at(r, c) = ring.sub(d.at(r, c), ring.mul(f, d.at(t, c)));
      }
    }
    for (std::size_t c = t + 1; c < cols; ++c) {
      const Residue f = ring.mul(d.at(t, c) / pb, unit);
      if (f == 0) continue;
      sub_col(d, c, t, f);
      sub_col(v, c, t, f);
    }
    pivot_valuations.push_back(best);
  }

  // Solutions are x = v y with p^{val_t} y_t = 0 for pivot t, y_t free otherwise.
  KernelModule out;
  auto column = [&](std::size_t c, std::uint64_t scale) {
    ModVector g(cols);
    for (std::size_t r = 0; r < cols; ++r) g[r] = ring.mul(v.at(r, c), ring.reduce_u(scale));
    return g;
  };
  for (std::size_t i = 0; i < pivot_valuations.size(); ++i) {
    const int val = pivot_valuations[i];
    if (val == 0) continue;
    out.generators.push_back(column(i, ring.p_power(ring.level() - val)));
    out.orders.push_back(ring.p_power(val));
  }
  for (std::size_t c = pivot_valuations.size(); c < cols; ++c) {
    out.generators.push_back(column(c, 1));
    out.orders.push_back(ring.modulus());
  }
  return out;
}

void for_each_element(const KernelModule& module, std::size_t dim, const CoeffRing& ring,
                      const std::function<void(const ModVector&)>& visit) {
  const std::size_t g = module.generators.size();
  std::vector<std::uint64_t> coeff(g, 0);
  ModVector current(dim, 0);
  while (true) {
    visit(current);
    // Odometer step, last coefficient fastest; update `current` incrementally.
    std::size_t i = g;
    while (i > 0) {
      --i;
      const auto& gen = module.generators[i];
      if (++coeff[i] < module.orders[i]) {
        for (std::size_t j = 0; j < dim; ++j) current[j] = ring.add(current[j], gen[j]);
        break;
      }
      // Wrap: subtract (order - 1) * gen, i.e. add gen once more (order * gen == 0).
      coeff[i] = 0;
      for (std::size_t j = 0; j < dim; ++j) current[j] = ring.add(current[j], gen[j]);
      if (i == 0) return;
    }
    if (g == 0) return;
  }
}

}  // namespace locsys
