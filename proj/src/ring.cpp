#include "locsys/ring.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "locsys/errors.hpp"

namespace locsys {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, b, m);
    b = mulmod_u64(b, b, m);
    e >>= 1;
  }
  return r;
}

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.n != b.n) {
    throw StructuralError("matrix dimension mismatch: " + std::to_string(a.n) + " vs " +
                          std::to_string(b.n));
  }
}

}  // namespace

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                          31ULL, 37ULL}) {
    if (p % q == 0) return p == q;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  std::uint64_t d = p - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                          31ULL, 37ULL}) {
    std::uint64_t x = powmod_u64(a, d, p);
    if (x == 1 || x == p - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, p);
      if (x == p - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base) {
      throw StructuralError("integer overflow computing " + std::to_string(base) + "^" +
                            std::to_string(exp));
    }
    r *= base;
  }
  return r;
}

// ---------------------------------------------------------------------------
// CoeffRing

CoeffRing::CoeffRing(std::uint64_t p, int k) : p_(p), k_(k), modulus_(1) {
  if (!is_prime(p)) throw StructuralError("coefficient ring: " + std::to_string(p) +
                                          " is not prime");
  if (k < 1) throw StructuralError("coefficient ring: level must be >= 1");
  for (int i = 0; i < k; ++i) {
    if (modulus_ > (kModulusCap - 1) / p) {
      throw StructuralError("coefficient ring: " + std::to_string(p) + "^" +
                            std::to_string(k) + " exceeds the 63-bit modulus cap");
    }
    modulus_ *= p;
  }
}

std::uint64_t CoeffRing::p_power(int j) const {
  if (j < 0 || j > k_) throw StructuralError("p_power: exponent out of range");
  std::uint64_t r = 1;
  for (int i = 0; i < j; ++i) r *= p_;
  return r;
}

bool CoeffRing::can_lift() const noexcept { return modulus_ <= (kModulusCap - 1) / p_; }

Residue CoeffRing::reduce(std::int64_t x) const noexcept {
  const auto m = static_cast<std::int64_t>(modulus_);
  std::int64_t r = x % m;
  if (r < 0) r += m;
  return static_cast<Residue>(r);
}

Residue CoeffRing::add(Residue a, Residue b) const noexcept {
  Residue s = a + b;  // both < 2^63, no wrap
  return s >= modulus_ ? s - modulus_ : s;
}

Residue CoeffRing::sub(Residue a, Residue b) const noexcept {
  return a >= b ? a - b : a + (modulus_ - b);
}

Residue CoeffRing::inverse(Residue a) const {
  if (!is_unit(a)) throw NotAUnit(std::to_string(a) + " is not a unit mod " +
                                  std::to_string(modulus_));
  // Extended Euclid on signed 128-bit values.
  __int128 old_r = a, r = modulus_, old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    std::tie(old_r, r) = std::pair<__int128, __int128>{r, old_r - q * r};
    std::tie(old_s, s) = std::pair<__int128, __int128>{s, old_s - q * s};
  }
  __int128 m = modulus_;
  __int128 res = old_s % m;
  if (res < 0) res += m;
  return static_cast<Residue>(res);
}

int CoeffRing::valuation(Residue a) const noexcept {
  if (a == 0) return k_;
  int v = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++v;
  }
  return v;
}

std::string CoeffRing::to_string() const {
  return "Z/" + std::to_string(p_) + "^" + std::to_string(k_);
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(int dim) : n(dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw StructuralError("matrix dimension " + std::to_string(dim) + " outside [1, " +
                          std::to_string(kMaxDim) + "]");
  }
}

Matrix Matrix::identity(int dim) {
  Matrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::elementary(int dim, int i, int j, Residue c, const CoeffRing& ring) {
  Matrix m = identity(dim);
  m.at(i, j) = ring.add(m.at(i, j), ring.reduce_u(c));
  return m;
}

Matrix Matrix::from_values(int dim, std::span<const std::int64_t> values,
                           const CoeffRing& ring) {
  if (values.size() != static_cast<std::size_t>(dim * dim)) {
    throw StructuralError("matrix: expected " + std::to_string(dim * dim) + " entries, got " +
                          std::to_string(values.size()));
  }
  Matrix m(dim);
  for (std::size_t i = 0; i < values.size(); ++i) m.entries[i] = ring.reduce(values[i]);
  return m;
}

Matrix Matrix::from_values(int dim, std::initializer_list<std::int64_t> values,
                           const CoeffRing& ring) {
  return from_values(dim, std::span<const std::int64_t>(values.begin(), values.size()), ring);
}

bool Matrix::is_identity() const noexcept {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (at(i, j) != (i == j ? 1u : 0u)) return false;
  return true;
}

std::size_t MatrixHash::operator()(const Matrix& m) const noexcept {
  // FNV-1a over the used entries.
  std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(m.n);
  for (Residue x : m.flat()) {
    h ^= x;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

bool is_reduced(const Matrix& a, const CoeffRing& ring) noexcept {
  return std::ranges::all_of(a.flat(), [&](Residue x) { return x < ring.modulus(); });
}

Matrix mat_mul(const Matrix& a, const Matrix& b, const CoeffRing& ring) {
  require_same_shape(a, b);
  const int n = a.n;
  const std::uint64_t m = ring.modulus();
  Matrix c(n);
  if (m < (std::uint64_t{1} << 31)) {
    // Products fit in 62 bits; at most kMaxDim of them fit a 64-bit sum.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        std::uint64_t acc = 0;
        for (int t = 0; t < n; ++t) acc += a.at(i, t) * b.at(t, j);
        c.at(i, j) = acc % m;
      }
    }
    return c;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      unsigned __int128 acc = 0;
      for (int t = 0; t < n; ++t) {
        acc += (static_cast<unsigned __int128>(a.at(i, t)) * b.at(t, j)) % m;
      }
      c.at(i, j) = static_cast<Residue>(acc % m);
    }
  }
  return c;
}

Matrix mat_add(const Matrix& a, const Matrix& b, const CoeffRing& ring) {
  require_same_shape(a, b);
  Matrix c(a.n);
  for (int i = 0; i < a.n * a.n; ++i) c.entries[i] = ring.add(a.entries[i], b.entries[i]);
  return c;
}

Matrix mat_sub(const Matrix& a, const Matrix& b, const CoeffRing& ring) {
  require_same_shape(a, b);
  Matrix c(a.n);
  for (int i = 0; i < a.n * a.n; ++i) c.entries[i] = ring.sub(a.entries[i], b.entries[i]);
  return c;
}

Matrix mat_scale(const Matrix& a, Residue c, const CoeffRing& ring) {
  Matrix r(a.n);
  c = ring.reduce_u(c);
  for (int i = 0; i < a.n * a.n; ++i) r.entries[i] = ring.mul(a.entries[i], c);
  return r;
}

Matrix mat_pow(const Matrix& a, std::uint64_t e, const CoeffRing& ring) {
  Matrix result = Matrix::identity(a.n);
  Matrix base = a;
  while (e) {
    if (e & 1) result = mat_mul(result, base, ring);
    e >>= 1;
    if (e) base = mat_mul(base, base, ring);
  }
  return result;
}

std::optional<Matrix> try_inverse(const Matrix& a, const CoeffRing& ring) {
  const int n = a.n;
  Matrix work = a;
  Matrix inv = Matrix::identity(n);
  for (int col = 0; col < n; ++col) {
    // Non-units form the maximal ideal, so any unit in the column is a valid pivot.
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (ring.is_unit(work.at(r, col))) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(work.at(pivot, j), work.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    const Residue s = ring.inverse(work.at(col, col));
    for (int j = 0; j < n; ++j) {
      work.at(col, j) = ring.mul(work.at(col, j), s);
      inv.at(col, j) = ring.mul(inv.at(col, j), s);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Residue f = work.at(r, col);
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) {
        work.at(r, j) = ring.sub(work.at(r, j), ring.mul(f, work.at(col, j)));
        inv.at(r, j) = ring.sub(inv.at(r, j), ring.mul(f, inv.at(col, j)));
      }
    }
  }
  return inv;
}

Matrix mat_inverse(const Matrix& a, const CoeffRing& ring) {
  if (auto inv = try_inverse(a, ring)) return *inv;
  throw NotAUnit("matrix " + to_string(a) + " is not invertible over " + ring.to_string());
}

bool is_invertible(const Matrix& a, const CoeffRing& ring) {
  // Invertibility only depends on the residue mod p.
  const CoeffRing field = ring.residue_field();
  return try_inverse(reduce_to(a, field), field).has_value();
}

Matrix reduce_to(const Matrix& a, const CoeffRing& target) {
  Matrix r(a.n);
  for (int i = 0; i < a.n * a.n; ++i) r.entries[i] = a.entries[i] % target.modulus();
  return r;
}

Matrix reinterpret_in(const Matrix& a, const CoeffRing& target) {
  if (!is_reduced(a, target)) throw StructuralError("reinterpret_in: entry out of range");
  return a;
}

CongruenceLevel congruence_level(const Matrix& a, const CoeffRing& ring) {
  int best = ring.level();
  for (int i = 0; i < a.n; ++i) {
    for (int j = 0; j < a.n; ++j) {
      const Residue d = ring.sub(a.at(i, j), i == j ? 1 : 0);
      best = std::min(best, ring.valuation(d));
    }
  }
  return {best};
}

std::uint64_t gl_order(const CoeffRing& ring, int n) {
  const std::uint64_t p = ring.p();
  const auto nn = static_cast<std::uint64_t>(n);
  std::uint64_t order = checked_pow(p, static_cast<std::uint64_t>(ring.level() - 1) * nn * nn);
  const std::uint64_t pn = checked_pow(p, nn);
  for (std::uint64_t i = 0; i < nn; ++i) {
    const std::uint64_t factor = pn - checked_pow(p, i);
    if (factor != 0 && order > UINT64_MAX / factor) {
      throw StructuralError("gl_order overflows 64 bits");
    }
    order *= factor;
  }
  return order;
}

std::uint64_t congruence_element_order(const Matrix& a, const CoeffRing& ring) {
  if (congruence_level(a, ring).j < 1) {
    throw NotInCongruenceSubgroup("element " + to_string(a) + " is not congruent to Id mod p");
  }
  // The order is a power of p; each p-th power raises the level.
  std::uint64_t order = 1;
  Matrix x = a;
  while (!x.is_identity()) {
    x = mat_pow(x, ring.p(), ring);
    order *= ring.p();
  }
  return order;
}

std::vector<Matrix> gl_elements(const CoeffRing& ring, int n, std::uint64_t budget) {
  const auto cells = static_cast<std::uint64_t>(n * n);
  std::uint64_t total = 0;
  try {
    total = checked_pow(ring.modulus(), cells);
  } catch (const StructuralError&) {
    throw BudgetExceeded("GL_n enumeration exceeds 64-bit search space", 0);
  }
  if (total > budget) {
    throw BudgetExceeded("GL_" + std::to_string(n) + "(" + ring.to_string() +
                             ") enumeration needs " + std::to_string(total) + " candidates",
                         0);
  }
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(gl_order(ring, n)));
  Matrix m(n);
  // Odometer over entries; the last entry varies fastest so the order is lexicographic.
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    if (is_invertible(m, ring)) out.push_back(m);
    for (int c = static_cast<int>(cells) - 1; c >= 0; --c) {
      if (++m.entries[static_cast<std::size_t>(c)] < ring.modulus()) break;
      m.entries[static_cast<std::size_t>(c)] = 0;
    }
  }
  return out;
}

nlohmann::json matrix_to_json(const Matrix& a, const CoeffRing& ring) {
  nlohmann::json j;
  j["n"] = a.n;
  j["p"] = ring.p();
  j["k"] = ring.level();
  j["entries"] = std::vector<Residue>(a.flat().begin(), a.flat().end());
  return j;
}

RingMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    const auto p = j.at("p").get<std::uint64_t>();
    const int k = j.at("k").get<int>();
    CoeffRing ring(p, k);
    const auto& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(n * n)) {
      throw StructuralError("matrix json: entries must be an array of n*n integers");
    }
    Matrix m(n);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!entries[i].is_number_integer() || entries[i].get<std::int64_t>() < 0 ||
          entries[i].get<std::uint64_t>() >= ring.modulus()) {
        throw StructuralError("matrix json: entry " + std::to_string(i) +
                              " is not a reduced residue mod " +
                              std::to_string(ring.modulus()));
      }
      m.entries[i] = entries[i].get<std::uint64_t>();
    }
    return {ring, m};
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("matrix json: ") + e.what());
  }
}

std::string to_string(const Matrix& a) {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < a.n; ++i) {
    if (i) os << ',';
    os << '[';
    for (int j = 0; j < a.n; ++j) {
      if (j) os << ',';
      os << a.at(i, j);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace locsys
