#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "convex.hpp"
#include "errors.hpp"
#include "fbf.hpp"
#include "hilbert.hpp"
#include "matrix.hpp"
#include "operators.hpp"
#include "primal_dual.hpp"

namespace ifbf::zoo {

// Plain monotone inclusion 0 in Ax + Bx.
struct FbfInstance {
  MaxMonotoneOp A;
  ForwardOp B;
  HVector x1;
  std::optional<HVector> known_solution;
  bool forward_is_zero = false;
  std::string description;
};

// Composite inclusion with a solution planted at construction time.
struct PdInstance {
  PrimalDualProblem problem;
  HVector x1;
  std::vector<HVector> v1;
  std::optional<HVector> planted_x;
  std::vector<HVector> planted_v;
  std::string description;
};

// Convex problem with a closed-form minimizer where one exists.
struct ConvexInstance {
  ConvexProblem problem;
  HVector x1;
  std::optional<HVector> known_x;
  std::vector<HVector> known_v;
  std::string description;
};

using Instance = std::variant<FbfInstance, PdInstance, ConvexInstance>;

using Params = std::map<std::string, std::string>;

struct EntryInfo {
  std::string name;
  std::string summary;
  bool seeded = false;
};

inline std::vector<EntryInfo> list() {
  return {
      {"skew-rotation", "A = 0, B the 2x2 rotation generator; zero at the origin", false},
      {"box-shift", "A = N_[0,1], B(x) = x - 2; zero at the boundary point 1", false},
      {"ppa-box", "A = N_[2,3], B = 0 (proximal-point problem); zero at 2", false},
      {"lasso2d", "min 0.5|x-b|^2 + tau|x|_1 in R^2; soft-threshold solution", false},
      {"lassoN", "min 0.5|x-b|^2 + tau|x|_1 with sampled b; soft-threshold solution", true},
      {"box-ls", "min 0.5|x-b|^2 over a box; clamp solution", false},
      {"pd-random", "random composite inclusion with a planted primal-dual solution", true},
  };
}

inline bool is_seeded(const std::string& name) {
  for (const EntryInfo& e : list()) {
    if (e.name == name) return e.seeded;
  }
  return false;
}

namespace detail {

inline double get_double(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw config_error("zoo: cannot parse '" + key + " = " + it->second + "' as a number");
  }
}

inline long get_long(const Params& p, const std::string& key, long fallback) {
  const double v = get_double(p, key, static_cast<double>(fallback));
  const long n = static_cast<long>(v);
  if (static_cast<double>(n) != v) {
    throw config_error("zoo: '" + key + "' must be an integer");
  }
  return n;
}

inline HVector get_vector(const Params& p, const std::string& key, const HVector& fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  std::vector<double> c;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      c.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw config_error("zoo: cannot parse '" + key + " = " + it->second +
                         "' as a comma-separated vector");
    }
  }
  if (c.empty()) throw config_error("zoo: '" + key + "' is empty");
  return HVector(std::move(c));
}

inline void reject_unknown(const Params& p, std::initializer_list<const char*> known,
                           const std::string& problem) {
  for (const auto& [key, value] : p) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw config_error("zoo: unknown parameter '" + key + "' for problem '" + problem + "'");
    }
  }
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

}  // namespace detail

inline FbfInstance make_skew_rotation() {
  Matrix m(2, 2, {0.0, 1.0, -1.0, 0.0});
  return FbfInstance{zero_monotone(2), make_skew(m), HVector{1.0, 0.0}, HVector{0.0, 0.0}, false,
                     "0 in Bx with B the rotation generator; unique zero at the origin"};
}

inline FbfInstance make_box_shift() {
  ForwardOp b = linear_forward(Matrix::identity(1), HVector{-2.0}, 1.0, "x-2");
  return FbfInstance{normal_cone(box_set(1, 0.0, 1.0)), std::move(b), HVector{0.0},
                     HVector{1.0}, false,
                     "0 in N_[0,1](x) + x - 2; unique zero at the boundary point 1"};
}

inline FbfInstance make_ppa_box() {
  return FbfInstance{normal_cone(box_set(1, 2.0, 3.0)), zero_forward(1), HVector{0.0},
                     HVector{2.0}, true,
                     "0 in N_[2,3](x); projection dynamics reach 2 from below"};
}

inline ConvexInstance make_lasso(const HVector& b, double tau) {
  const std::size_t n = b.dim();
  std::vector<double> xs(n), vs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = soft_threshold(b[i], tau);
    vs[i] = b[i] - xs[i];
  }
  HVector xbar(std::move(xs));
  HVector vbar(std::move(vs));

  SmoothFunction h(
      [b](const HVector& x) { return x - b; }, 1.0, "0.5|x-b|^2");
  h.with_value([b](const HVector& x) { return 0.5 * norm_sq(x - b); });

  std::vector<ConvexBlock> blocks;
  blocks.push_back(
      ConvexBlock{prox_l1(tau), std::nullopt, HVector::zeros(n), LinearMap::identity(n), {}});
  ConvexProblem prob(prox_zero(), std::move(h), HVector::zeros(n), std::move(blocks));
  // f = 0 makes f* [] h* = h*, and h*(w) = 0.5|w|^2 + <w, b>.
  prob.with_fstar_hstar_value(
      [b](const HVector& w) { return 0.5 * norm_sq(w) + inner(w, b); });

  ConvexInstance inst{std::move(prob), HVector::zeros(n), xbar, {vbar},
                      "min 0.5|x-b|^2 + tau|x|_1; solution soft(b, tau)"};
  return inst;
}

inline ConvexInstance make_box_ls(const HVector& b, double lo, double hi) {
  const std::size_t n = b.dim();
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = std::clamp(b[i], lo, hi);
  HVector xbar(std::move(xs));

  SmoothFunction h([b](const HVector& x) { return x - b; }, 1.0, "0.5|x-b|^2");
  h.with_value([b](const HVector& x) { return 0.5 * norm_sq(x - b); });

  // Single vacuous block (g = 0, l = delta_0), so g [] l vanishes and the
  // problem is the projection of b onto the box.
  std::vector<ConvexBlock> blocks;
  blocks.push_back(
      ConvexBlock{prox_zero(), std::nullopt, HVector::zeros(n), LinearMap::identity(n), {}});
  ConvexProblem prob(prox_box(n, lo, hi), std::move(h), HVector::zeros(n), std::move(blocks));

  return ConvexInstance{std::move(prob), HVector::zeros(n), xbar,
                        {HVector::zeros(n)},
                        "min 0.5|x-b|^2 over a box; solution clamp(b)"};
}

// Random composite instance with a planted primal-dual solution: pick
// (xbar, vbar) first, then back-solve z and r_i so the optimality conditions
// hold by construction. C has a strongly monotone symmetric part, making the
// primal solution unique.
inline PdInstance make_pd_random(std::uint64_t seed, std::size_t dim_h, std::size_t m,
                                 std::size_t gdim, double tau) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  std::vector<double> xc(dim_h);
  for (double& v : xc) v = u(rng);
  HVector xbar(std::move(xc));

  std::vector<HVector> vbar;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> vc(gdim);
    // strictly inside the dual inf-ball of radius tau, so 0 in B_i^{-1} vbar_i
    for (double& v : vc) v = 0.5 * tau * u(rng);
    vbar.emplace_back(std::move(vc));
  }

  // C = I + 0.5 * S with S skew of unit norm: monotone with modulus 1.
  Matrix r0 = detail::random_matrix(rng, dim_h, dim_h);
  Matrix s(dim_h, dim_h);
  for (std::size_t i = 0; i < dim_h; ++i)
    for (std::size_t j = 0; j < dim_h; ++j) s(i, j) = 0.5 * (r0(i, j) - r0(j, i));
  const double sn = spectral_norm_estimate(s);
  Matrix cmat = Matrix::identity(dim_h);
  if (sn > 0.0) {
    for (std::size_t i = 0; i < dim_h; ++i)
      for (std::size_t j = 0; j < dim_h; ++j) cmat(i, j) += 0.5 * s(i, j) / sn;
  }
  ForwardOp c = linear_forward(cmat, std::nullopt, std::nullopt, "I + skew");

  // A = normal cone of a box with xbar in its interior, so 0 in A(xbar).
  MaxMonotoneOp a =
      normal_cone(box_set(xbar - HVector::constant(dim_h, 1.0), xbar + HVector::constant(dim_h, 1.0)));

  std::vector<PdBlock> blocks;
  for (std::size_t i = 0; i < m; ++i) {
    Matrix lm = detail::random_matrix(rng, gdim, dim_h);
    const double ln = spectral_norm_estimate(lm);
    for (std::size_t r = 0; r < gdim; ++r)
      for (std::size_t j = 0; j < dim_h; ++j) lm(r, j) /= ln;
    LinearMap L = LinearMap::from_matrix(lm, "L" + std::to_string(i + 1));
    MaxMonotoneOp b = subdifferential_op(prox_l1(tau), gdim);
    // alternate the smoothed and the degenerate parallel-sum cases
    ForwardOp d_inv = (i % 2 == 0)
                          ? ForwardOp(
                                gdim, [](const HVector& v) { return 0.5 * v; }, 0.5, "0.5*id")
                          : zero_forward(gdim);
    // plant: L_i xbar - r_i must equal b_i + D_i^{-1} vbar_i with b_i = 0
    HVector r = L.apply(xbar) - d_inv(vbar[i]);
    blocks.push_back(PdBlock{std::move(r), std::move(b), std::move(d_inv), std::move(L)});
  }

  // z = C(xbar) + sum_i L_i^* vbar_i + 0, accumulated in the same order the
  // iteration evaluates its forward head, so a run started at the planted
  // point sees an exactly vanishing residual.
  HVector z = c(xbar);
  for (std::size_t i = 0; i < m; ++i) z = z + blocks[i].L.apply_adjoint(vbar[i]);

  PrimalDualProblem prob(std::move(z), std::move(a), std::move(c), std::move(blocks));
  std::vector<HVector> v1;
  for (std::size_t i = 0; i < m; ++i) v1.push_back(HVector::zeros(gdim));
  return PdInstance{std::move(prob), HVector::zeros(dim_h), std::move(v1), xbar, vbar,
                    "seeded composite inclusion; solution planted by back-solving z and r_i"};
}

inline Instance make(const std::string& name, const Params& params, std::uint64_t seed) {
  if (name == "skew-rotation") {
    detail::reject_unknown(params, {}, name);
    return make_skew_rotation();
  }
  if (name == "box-shift") {
    detail::reject_unknown(params, {}, name);
    return make_box_shift();
  }
  if (name == "ppa-box") {
    detail::reject_unknown(params, {}, name);
    return make_ppa_box();
  }
  if (name == "lasso2d") {
    detail::reject_unknown(params, {"b", "tau"}, name);
    const HVector b = detail::get_vector(params, "b", HVector{3.0, 0.2});
    const double tau = detail::get_double(params, "tau", 1.0);
    return make_lasso(b, tau);
  }
  if (name == "lassoN") {
    detail::reject_unknown(params, {"n", "tau"}, name);
    const long n = detail::get_long(params, "n", 10);
    if (n < 1) throw config_error("zoo: lassoN needs n >= 1");
    const double tau = detail::get_double(params, "tau", 1.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> c(static_cast<std::size_t>(n));
    for (double& v : c) v = u(rng);
    return make_lasso(HVector(std::move(c)), tau);
  }
  if (name == "box-ls") {
    detail::reject_unknown(params, {"b", "lo", "hi"}, name);
    const HVector b = detail::get_vector(params, "b", HVector{1.5, -0.5, 0.3});
    const double lo = detail::get_double(params, "lo", 0.0);
    const double hi = detail::get_double(params, "hi", 1.0);
    if (!(lo <= hi)) throw config_error("zoo: box-ls needs lo <= hi");
    return make_box_ls(b, lo, hi);
  }
  if (name == "pd-random") {
    detail::reject_unknown(params, {"dim", "m", "gdim", "tau"}, name);
    const long dim = detail::get_long(params, "dim", 4);
    const long m = detail::get_long(params, "m", 2);
    const long gdim = detail::get_long(params, "gdim", 3);
    const double tau = detail::get_double(params, "tau", 1.0);
    if (dim < 1 || m < 1 || gdim < 1) throw config_error("zoo: pd-random dimensions must be >= 1");
    return make_pd_random(seed, static_cast<std::size_t>(dim), static_cast<std::size_t>(m),
                          static_cast<std::size_t>(gdim), tau);
  }
  throw config_error("zoo: unknown problem '" + name + "'");
}

}  // namespace ifbf::zoo
