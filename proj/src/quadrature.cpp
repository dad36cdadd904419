#include "spherecr/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "spherecr/kernels.hpp"

namespace spherecr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 15-point Kronrod extension of 7-point Gauss on [-1, 1]. Nodes are listed
// by descending magnitude; odd indices and the center are the Gauss points.
constexpr std::array<double, 8> kKronrodNodes = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};
constexpr std::array<double, 4> kGaussWeights = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776};

struct Cell {
  double a = 0.0, b = 0.0;
  double value = 0.0;   // Kronrod estimate
  double err = 0.0;     // |Kronrod - Gauss|
  double resabs = 0.0;  // Kronrod estimate of the integral of |f|
};

template <class F>
Cell evaluate_cell(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double halfw = 0.5 * (b - a);
  const double fc = f(center);
  double resk = kKronrodWeights[7] * fc;
  double resg = kGaussWeights[3] * fc;
  double resabs = kKronrodWeights[7] * std::fabs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = halfw * kKronrodNodes[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    resk += kKronrodWeights[j] * (f1 + f2);
    resabs += kKronrodWeights[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) resg += kGaussWeights[(j - 1) / 2] * (f1 + f2);
  }
  return Cell{a, b, resk * halfw, std::fabs((resk - resg) * halfw),
              resabs * halfw};
}

struct AdaptiveOutcome {
  std::vector<Cell> cells;  // sorted by left endpoint
  double value = 0.0;
  double err = 0.0;
  bool converged = false;
};

// Max-heap priority: largest error first, ties broken toward the cell
// closer to the left end, so the refinement sequence is deterministic.
bool lower_priority(const Cell& x, const Cell& y) {
  if (x.err != y.err) return x.err < y.err;
  return x.a > y.a;
}

// Bisect the worst cell until the summed |K - G| estimates drop below
// rel_tol * |integral| or the rounding floor of the integrand.
template <class F>
AdaptiveOutcome adapt(const F& f, const std::vector<double>& breakpoints,
                      double rel_tol, std::size_t max_cells) {
  std::vector<Cell> heap;
  heap.reserve(breakpoints.size() + 64);
  double value = 0.0, err = 0.0, resabs = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    Cell c = evaluate_cell(f, breakpoints[i], breakpoints[i + 1]);
    value += c.value;
    err += c.err;
    resabs += c.resabs;
    heap.push_back(c);
  }
  std::make_heap(heap.begin(), heap.end(), lower_priority);

  AdaptiveOutcome out;
  while (true) {
    // A non-finite sum means the integrand blew up at a node; refinement
    // cannot recover from that.
    if (!std::isfinite(value) || !std::isfinite(err) ||
        !std::isfinite(resabs)) {
      break;
    }
    const double floor = 50.0 * kEps * resabs;
    if (err <= std::max(rel_tol * std::fabs(value), floor)) {
      out.converged = true;
      break;
    }
    if (heap.size() >= max_cells) break;
    std::pop_heap(heap.begin(), heap.end(), lower_priority);
    const Cell worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {  // width at rounding limit
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), lower_priority);
      break;
    }
    Cell left = evaluate_cell(f, worst.a, mid);
    Cell right = evaluate_cell(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    resabs += left.resabs + right.resabs - worst.resabs;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), lower_priority);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), lower_priority);
  }

  // Re-sum in spatial order: the result is independent of refinement order.
  std::sort(heap.begin(), heap.end(),
            [](const Cell& x, const Cell& y) { return x.a < y.a; });
  out.value = 0.0;
  out.err = 0.0;
  for (const Cell& c : heap) {
    out.value += c.value;
    out.err += c.err;
  }
  out.cells = std::move(heap);
  return out;
}

// The substitution t = tan(phi/2) folds onto x in (0, 1]: both endpoint
// singularities of (0, pi) land at x = 0 and the two half-ranges are
// evaluated together. Below kFoldCutoff the map phi = pi - 2*atan(x) is no
// longer resolvable in doubles (every x collapses onto fl(pi)), so the mesh
// stops there and the remaining sliver is integrated in closed form from
// the declared endpoint powers.
constexpr double kFoldCutoff = 1e-7;

double phi_low(double x) { return 2.0 * std::atan(x); }
double phi_high(double x) { return kPi - 2.0 * std::atan(x); }

template <class PhiFn>
auto fold_phi(const PhiFn& f) {
  return [&f](double x) {
    return (f(phi_low(x)) + f(phi_high(x))) * 2.0 / (1.0 + x * x);
  };
}

// Geometric mesh from the cutoff up to 1.
std::vector<double> phi_breakpoints() {
  std::vector<double> bps;
  bps.push_back(kFoldCutoff);
  for (double x = 2.0 * kFoldCutoff; x < 1.0; x *= 2.0) bps.push_back(x);
  bps.push_back(1.0);
  return bps;
}

struct TailEstimate {
  double value = 0.0;
  double err = 0.0;
};

// Closed-form integral of one half-fold over (0, kFoldCutoff). The half-fold
// g behaves like x^(q-1) * G(x) with G regular and q = mass_exponent > 0;
// G(0) comes from two-point linear extrapolation and the two-point spread
// bounds the neglected variation.
template <class HalfFold>
TailEstimate power_tail(const HalfFold& g, double singular_exponent,
                        double mass_exponent) {
  const double x2 = kFoldCutoff;
  const double x1 = 0.5 * kFoldCutoff;
  const double g1 = g(x1) * std::pow(x1, -singular_exponent);
  const double g2 = g(x2) * std::pow(x2, -singular_exponent);
  const double g0 = 2.0 * g1 - g2;
  const double mass = std::pow(kFoldCutoff, mass_exponent) / mass_exponent;
  TailEstimate t;
  t.value = g0 * mass;
  t.err = (std::fabs(g1 - g2) + 1e-8 * std::fabs(g0)) * mass;
  return t;
}

// Both endpoint tails of a phi integrand with the declared behavior.
template <class PhiFn>
TailEstimate phi_tails(const PhiFn& f, const PhiSingularity& sing) {
  auto g_lo = [&f](double x) {
    return f(phi_low(x)) * 2.0 / (1.0 + x * x);
  };
  auto g_hi = [&f](double x) {
    return f(phi_high(x)) * 2.0 / (1.0 + x * x);
  };
  const TailEstimate lo =
      power_tail(g_lo, 2.0 * sing.exponent_at_0 + 1.0,
                 2.0 * sing.exponent_at_0 + 2.0);
  const TailEstimate hi =
      power_tail(g_hi, 1.0 - 2.0 * sing.exponent_at_pi,
                 2.0 - 2.0 * sing.exponent_at_pi);
  return TailEstimate{lo.value + hi.value, lo.err + hi.err};
}

struct RadialTruncation {
  double R = 1.0;
  double tail_bound = 0.0;
  double envelope_constant = 0.0;
};

// Choose R so the envelope tail integral of C * r^2 * exp(-rate r) beyond R
// is below half the requested share of the integral scale, then double it.
template <class F>
RadialTruncation truncate_radial(const F& f, double rate, double tol) {
  RadialTruncation tr;
  double cprime = 0.0;
  for (double s : {0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0}) {
    const double r = s / rate;
    const double env = r * r * std::exp(-rate * r);
    cprime = std::max(cprime, std::fabs(f(r)) / env);
  }
  tr.envelope_constant = cprime;
  const double scale = std::max(cprime * 2.0 / (rate * rate * rate), 1e-300);
  const double tail_target = 0.5 * tol * scale;
  double R = std::max(1.0, 4.0 / rate);
  if (cprime > 0.0) {
    for (int iter = 0; iter < 8; ++iter) {
      const double poly =
          R * R / rate + 2.0 * R / (rate * rate) + 2.0 / (rate * rate * rate);
      R = std::max(R, std::log(std::max(cprime * poly / tail_target, 1.0)) / rate);
    }
  }
  tr.R = 2.0 * R;
  const double poly = tr.R * tr.R / rate + 2.0 * tr.R / (rate * rate) +
                      2.0 / (rate * rate * rate);
  tr.tail_bound = cprime * std::exp(-rate * tr.R) * poly;
  return tr;
}

std::vector<double> radial_breakpoints(double R) {
  return {0.0, R / 128.0, R / 32.0, R / 8.0, R / 4.0, R / 2.0, 0.75 * R, R};
}

}  // namespace

QuadratureResult integrate_theta(const RealFn1D& f, int n_nodes) {
  if (n_nodes < 4) {
    throw std::invalid_argument("integrate_theta requires n_nodes >= 4");
  }
  auto midpoint = [&f](int n) {
    const double h = kTwoPi / n;
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += f(h * (j + 0.5));
    return s * h;
  };
  const double coarse = midpoint(n_nodes);
  const double fine = midpoint(2 * n_nodes);
  return QuadratureResult{fine, std::fabs(fine - coarse), 3LL * n_nodes};
}

QuadratureResult integrate_phi_singular(const RealFn1D& f,
                                        const PhiSingularity& sing,
                                        double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  long long evals = 0;
  auto counted = [&](double phi) {
    ++evals;
    return f(phi);
  };
  auto folded = fold_phi(counted);
  const AdaptiveOutcome out = adapt(folded, phi_breakpoints(), tol, 20000);
  const TailEstimate tails = phi_tails(counted, sing);
  QuadratureResult r{out.value + tails.value, out.err + tails.err, evals};
  if (!out.converged) {
    throw NoConvergence("phi integral: subdivision budget exhausted", r);
  }
  return r;
}

QuadratureResult integrate_radial(const RealFn1D& f, double decay_rate,
                                  double tol) {
  if (!(decay_rate > 0.0)) throw DomainError("decay_rate must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  long long evals = 0;
  auto counted = [&](double r) {
    ++evals;
    return f(r);
  };
  const RadialTruncation tr = truncate_radial(counted, decay_rate, tol);
  const AdaptiveOutcome out =
      adapt(counted, radial_breakpoints(tr.R), 0.5 * tol, 8000);
  QuadratureResult r{out.value, out.err + tr.tail_bound, evals};
  if (!out.converged) {
    throw NoConvergence("radial integral: subdivision budget exhausted", r);
  }
  return r;
}

QuadratureResult sphere_integral(const SphereFn& F, const PhiSingularity& sing,
                                 int n_theta, double tol) {
  long long evals = 0;
  double max_theta_err = 0.0;
  auto phi_integrand = [&](double phi) {
    auto slice = [&](double theta) { return F(AngularPoint(theta, phi)); };
    const QuadratureResult t = integrate_theta(slice, n_theta);
    evals += t.evaluations;
    max_theta_err = std::max(max_theta_err, t.abs_error_estimate);
    return std::sin(phi) * t.value;
  };
  QuadratureResult r = integrate_phi_singular(phi_integrand, sing, tol);
  r.evaluations = evals;
  // The theta estimate enters under the sin(phi) measure of total mass 2.
  r.abs_error_estimate += 2.0 * max_theta_err;
  return r;
}

namespace {

// One row of the angular x radial tensor pass: the fully weighted radial and
// theta sums at a folded phi node. Rows are independent, which makes the
// pass a data-parallel kernel.
struct TensorGeometry {
  std::vector<double> r_nodes;
  std::vector<double> r_weights;  // Kronrod weight times r^2
  int n_theta = 16;
};

struct TensorCell {
  double a = 0.0, b = 0.0;
  std::array<double, 15> rows{};  // row values, node order: -x0.. +x0, center last
  double value = 0.0;
  double err = 0.0;
};

// The fully weighted radial and theta sums at one phi slice, including the
// sin(phi) measure.
template <class Sq>
double tensor_slice(const Sq& sq, const TensorGeometry& geo, double phi) {
  const double wtheta = kTwoPi / geo.n_theta;
  double angsum = 0.0;
  for (int j = 0; j < geo.n_theta; ++j) {
    const double theta = wtheta * (j + 0.5);
    double radsum = 0.0;
    for (std::size_t l = 0; l < geo.r_nodes.size(); ++l) {
      radsum += geo.r_weights[l] * sq(geo.r_nodes[l], theta, phi);
    }
    angsum += radsum;
  }
  return std::sin(phi) * wtheta * angsum;
}

template <class Sq>
double tensor_row(const Sq& sq, const TensorGeometry& geo, double x) {
  return (tensor_slice(sq, geo, phi_low(x)) +
          tensor_slice(sq, geo, phi_high(x))) *
         2.0 / (1.0 + x * x);
}

// Node offsets within a cell, matching evaluate_cell's sampling: index
// 2*j = center - dx_j, 2*j + 1 = center + dx_j for j < 7, index 14 = center.
void cell_nodes(const TensorCell& c, std::array<double, 15>& xs) {
  const double center = 0.5 * (c.a + c.b);
  const double halfw = 0.5 * (c.b - c.a);
  for (int j = 0; j < 7; ++j) {
    const double dx = halfw * kKronrodNodes[j];
    xs[2 * j] = center - dx;
    xs[2 * j + 1] = center + dx;
  }
  xs[14] = center;
}

void cell_sums(TensorCell& c) {
  const double halfw = 0.5 * (c.b - c.a);
  double resk = kKronrodWeights[7] * c.rows[14];
  double resg = kGaussWeights[3] * c.rows[14];
  for (int j = 0; j < 7; ++j) {
    const double pair = c.rows[2 * j] + c.rows[2 * j + 1];
    resk += kKronrodWeights[j] * pair;
    if (j % 2 == 1) resg += kGaussWeights[(j - 1) / 2] * pair;
  }
  c.value = resk * halfw;
  c.err = std::fabs((resk - resg) * halfw);
}

template <class Sq>
void evaluate_tensor_cells(const Sq& sq, const TensorGeometry& geo,
                           std::vector<TensorCell>& cells,
                           const std::vector<std::size_t>& pending) {
  std::vector<double> flat(pending.size() * 15);
  std::vector<std::array<double, 15>> xs(pending.size());
  for (std::size_t i = 0; i < pending.size(); ++i) {
    cell_nodes(cells[pending[i]], xs[i]);
  }
  kernels::map_indexed(flat.size(), flat.data(), [&](std::size_t idx) {
    return tensor_row(sq, geo, xs[idx / 15][idx % 15]);
  });
  for (std::size_t i = 0; i < pending.size(); ++i) {
    TensorCell& c = cells[pending[i]];
    for (int t = 0; t < 15; ++t) c.rows[t] = flat[i * 15 + t];
    cell_sums(c);
  }
}

}  // namespace

QuadratureResult r3_norm_sq(const VolumeFn& G, const PhiSingularity& sing,
                            double decay_rate, double tol) {
  if (!(decay_rate > 0.0)) throw DomainError("decay_rate must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const double rate2 = 2.0 * decay_rate;
  long long evals = 0;

  auto sq = [&G](double r, double theta, double phi) {
    return std::norm(G(Point3D(r, AngularPoint(theta, phi))));
  };

  // Probe locations for the one-dimensional profiles. Two angles hedge
  // against a node of G at either one.
  const double th1 = 1.2345678901, th2 = 2.7182818284;
  const double ph1 = 0.5 * kPi, ph2 = 1.0;
  const double r1 = 1.0 / decay_rate;

  // Radial mesh from the profile |G|^2 r^2.
  auto radial_profile = [&](double r) {
    evals += 2;
    return 0.5 * (sq(r, th1, ph1) + sq(r, th2, ph2)) * r * r;
  };
  const RadialTruncation tr = truncate_radial(radial_profile, rate2, 0.25 * tol);
  const AdaptiveOutcome radial =
      adapt(radial_profile, radial_breakpoints(tr.R), 0.125 * tol, 8000);
  if (!radial.converged) {
    throw NoConvergence("r3_norm_sq: radial profile did not converge",
                        QuadratureResult{radial.value, radial.err, evals});
  }
  const double radial_scale = std::max(std::fabs(radial.value), 1e-300);
  const double rel_radial = radial.err / radial_scale;
  const double rel_tail = tr.tail_bound / radial_scale;

  // Theta resolution by node doubling on the profile.
  auto theta_profile = [&](double theta) {
    evals += 1;
    return sq(r1, theta, ph2);
  };
  int n_theta = 16;
  double rel_theta = 0.0;
  while (true) {
    const QuadratureResult t = integrate_theta(theta_profile, n_theta);
    rel_theta = t.abs_error_estimate / std::max(std::fabs(t.value), 1e-300);
    if (rel_theta <= 0.25 * tol || n_theta >= 1024) break;
    n_theta *= 2;
  }

  // Phi mesh from the profile sin(phi) |G|^2 at two radii.
  auto phi_profile = [&](double phi) {
    evals += 2;
    return 0.5 * (sq(r1, th1, phi) + sq(2.0 * r1, th2, phi)) * std::sin(phi);
  };
  const AdaptiveOutcome phi_prof =
      adapt(fold_phi(phi_profile), phi_breakpoints(), 0.25 * tol, 20000);
  if (!phi_prof.converged) {
    throw NoConvergence("r3_norm_sq: phi profile did not converge",
                        QuadratureResult{phi_prof.value, phi_prof.err, evals});
  }

  // Tensor pass over the product rule, with per-cell Kronrod-vs-Gauss
  // estimates along phi; refines the worst phi cells until the tensor
  // estimate meets its share of the budget.
  TensorGeometry geo;
  geo.n_theta = n_theta;
  for (const Cell& c : radial.cells) {
    const double center = 0.5 * (c.a + c.b);
    const double halfw = 0.5 * (c.b - c.a);
    auto push = [&](double r, double w) {
      geo.r_nodes.push_back(r);
      geo.r_weights.push_back(w * halfw * r * r);
    };
    for (int j = 0; j < 7; ++j) {
      const double dx = halfw * kKronrodNodes[j];
      push(center - dx, kKronrodWeights[j]);
      push(center + dx, kKronrodWeights[j]);
    }
    push(center, kKronrodWeights[7]);
  }

  std::vector<TensorCell> cells;
  cells.reserve(phi_prof.cells.size() + 64);
  std::vector<std::size_t> pending;
  for (const Cell& c : phi_prof.cells) {
    cells.push_back(TensorCell{c.a, c.b, {}, 0.0, 0.0});
    pending.push_back(cells.size() - 1);
  }

  const long long row_cost = 2LL * geo.n_theta *
                             static_cast<long long>(geo.r_nodes.size());
  double value = 0.0, tensor_err = 0.0;
  for (int round = 0; round < 64; ++round) {
    evaluate_tensor_cells(sq, geo, cells, pending);
    evals += static_cast<long long>(pending.size()) * 15 * row_cost;
    pending.clear();

    std::sort(cells.begin(), cells.end(),
              [](const TensorCell& x, const TensorCell& y) { return x.a < y.a; });
    value = 0.0;
    tensor_err = 0.0;
    for (const TensorCell& c : cells) {
      value += c.value;
      tensor_err += c.err;
    }
    const double target = 0.25 * tol * std::fabs(value);
    if (tensor_err <= std::max(target, 50.0 * kEps * std::fabs(value)) ||
        cells.size() >= 4096) {
      break;
    }
    // Split the worst eighth of the cells (at least one).
    std::vector<std::size_t> order(cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (cells[x].err != cells[y].err) return cells[x].err > cells[y].err;
      return cells[x].a < cells[y].a;
    });
    const std::size_t n_split = std::max<std::size_t>(1, cells.size() / 8);
    for (std::size_t i = 0; i < n_split; ++i) {
      TensorCell& c = cells[order[i]];
      const double mid = 0.5 * (c.a + c.b);
      if (!(mid > c.a && mid < c.b)) continue;
      TensorCell right{mid, c.b, {}, 0.0, 0.0};
      c.b = mid;
      pending.push_back(order[i]);
      cells.push_back(right);
      pending.push_back(cells.size() - 1);
    }
    if (pending.empty()) break;
  }

  // Endpoint tails of the phi direction, from the declared behavior of
  // |G|^2 and the same weighted slices the tensor rows use.
  auto slice = [&](double phi) { return tensor_slice(sq, geo, phi); };
  const TailEstimate tails = phi_tails(slice, sing);
  evals += 4LL * geo.n_theta * static_cast<long long>(geo.r_nodes.size());
  value += tails.value;

  const double err = tensor_err + tails.err +
                     (rel_radial + rel_tail + rel_theta) * std::fabs(value);
  QuadratureResult result{value, err, evals};
  if (tensor_err > std::max(0.5 * tol * std::fabs(value),
                            100.0 * kEps * std::fabs(value))) {
    throw NoConvergence("r3_norm_sq: tensor pass did not converge", result);
  }
  return result;
}

}  // namespace spherecr
