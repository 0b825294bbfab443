#include "heins/harmonic_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>

namespace heins {

namespace {

constexpr std::int64_t kBlock = 1024;

std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

void check_wos_options(const WosOptions& o) {
  if (o.walks < 1000) throw PreconditionError("wos needs at least 1000 walks");
  if (!(o.shell > 1e-6 && o.shell < 1e-2)) throw PreconditionError("wos shell must lie in (1e-6, 1e-2)");
  if (o.max_steps < 1) throw PreconditionError("wos step budget must be positive");
}

// Runs walks in seed-split blocks; step(p, rng) returns 0 to continue, 1 for a hit, 2 for a miss.
template <class Step>
WosResult run_walks(Complex z0, const WosOptions& o, const Step& step) {
  const std::int64_t blocks = (o.walks + kBlock - 1) / kBlock;
  std::vector<std::int64_t> hits(blocks), censored(blocks);
  parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b) {
    auto rng = block_engine(o.seed, b);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    const std::int64_t count = std::min<std::int64_t>(kBlock, o.walks - static_cast<std::int64_t>(b) * kBlock);
    for (std::int64_t w = 0; w < count; ++w) {
      Complex p = z0;
      int outcome = 0;
      std::int64_t steps = 0;
      while ((outcome = step(p, rng, angle)) == 0) {
        if (++steps >= o.max_steps) break;
      }
      if (outcome == 1) ++hits[b];
      if (outcome == 0) ++censored[b];
    }
  });
  WosResult r;
  r.walks = o.walks;
  r.hits = std::accumulate(hits.begin(), hits.end(), std::int64_t{0});
  r.censored = std::accumulate(censored.begin(), censored.end(), std::int64_t{0});
  const double n = static_cast<double>(r.walks - r.censored);
  if (n > 0) {
    r.omega = r.hits / n;
    r.std_error = std::sqrt(r.omega * (1.0 - r.omega) / n);
  }
  return r;
}

double segment_distance(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  const double s = len2 > 0.0 ? std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0) : 0.0;
  return std::abs(p - (a + s * d));
}

std::vector<std::pair<int, int>> stencil_offsets(int radius) {
  std::vector<std::pair<int, int>> out;
  for (int di = -radius; di <= radius; ++di) {
    for (int dj = -radius; dj <= radius; ++dj) {
      if ((di || dj) && std::gcd(std::abs(di), std::abs(dj)) == 1) out.emplace_back(di, dj);
    }
  }
  return out;
}

// Worst-case ratio of a stencil path length to the Euclidean length.
double stencil_anisotropy(const std::vector<std::pair<int, int>>& offsets) {
  std::vector<double> angles;
  for (auto [di, dj] : offsets) angles.push_back(std::atan2(dj, di));
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + kTwoPi - angles.back();
  for (std::size_t k = 1; k < angles.size(); ++k) gap = std::max(gap, angles[k] - angles[k - 1]);
  return 1.0 / std::cos(0.5 * gap);
}

struct GridPass {
  double length = std::numeric_limits<double>::infinity();
  double spacing = 0.0;
  std::int64_t nodes = 0;
};

GridPass grid_pass(const LogDomain& dom, const std::vector<Complex>& sigma, int columns,
                   const std::vector<std::pair<int, int>>& offsets, std::int64_t max_nodes) {
  const double t = dom.t();
  const double dx = t / columns;
  std::vector<double> lo(columns + 1), hi(columns + 1);
  double b_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= columns; ++i) {
    lo[i] = dom.lower(i * dx);
    hi[i] = lo[i] + kPi;
    b_min = std::min(b_min, lo[i]);
  }
  std::vector<int> jlo(columns + 1), jhi(columns + 1);
  std::vector<std::int64_t> offset(columns + 2, 0);
  for (int i = 0; i <= columns; ++i) {
    jlo[i] = static_cast<int>(std::ceil((lo[i] - b_min) / dx - 1e-9));
    jhi[i] = static_cast<int>(std::floor((hi[i] - b_min) / dx + 1e-9));
    offset[i + 1] = offset[i] + std::max(0, jhi[i] - jlo[i] + 1);
  }
  GridPass pass;
  pass.spacing = dx;
  pass.nodes = offset.back();
  if (pass.nodes > max_nodes) throw NumericError("geodesic grid exceeds the node budget");
  const auto inside = [&](int i, int j) { return i >= 0 && i <= columns && j >= jlo[i] && j <= jhi[i]; };
  const auto index = [&](int i, int j) { return offset[i] + (j - jlo[i]); };

  std::vector<double> dist(static_cast<std::size_t>(pass.nodes), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::int64_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (int i = 0; i <= columns; ++i) {
    for (int j = jlo[i]; j <= jhi[i]; ++j) {
      const Complex p(i * dx, b_min + j * dx);
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k + 1 < sigma.size(); ++k) d = std::min(d, segment_distance(p, sigma[k], sigma[k + 1]));
      if (sigma.size() == 1) d = std::abs(p - sigma[0]);
      if (d <= 1.5 * dx) {
        dist[index(i, j)] = d;
        queue.emplace(d, index(i, j));
      }
    }
  }
  std::vector<int> column_of(static_cast<std::size_t>(pass.nodes));
  for (int i = 0; i <= columns; ++i) {
    for (std::int64_t k = offset[i]; k < offset[i + 1]; ++k) column_of[k] = i;
  }
  while (!queue.empty()) {
    const auto [d, id] = queue.top();
    queue.pop();
    if (d > dist[id]) continue;
    const int i = column_of[id];
    const int j = jlo[i] + static_cast<int>(id - offset[i]);
    if (i == columns) {
      pass.length = d;
      break;
    }
    for (auto [di, dj] : offsets) {
      const int i2 = i + di, j2 = j + dj;
      if (!inside(i2, j2)) continue;
      bool ok = true;
      for (int k = 1; k < std::abs(di) && ok; ++k) {
        const int ic = i + (di > 0 ? k : -k);
        const double b = b_min + dx * (j + static_cast<double>(dj) * k / std::abs(di));
        ok = b >= lo[ic] - 1e-12 && b <= hi[ic] + 1e-12;
      }
      if (!ok) continue;
      const double nd = d + dx * std::hypot(di, dj);
      const std::int64_t id2 = index(i2, j2);
      if (nd < dist[id2]) {
        dist[id2] = nd;
        queue.emplace(nd, id2);
      }
    }
  }
  return pass;
}

// Direct horizontal or endpoint segment from p to E_t, when it stays in the cap.
double direct_length(const LogDomain& dom, Complex p) {
  const Complex lo = dom.target_low(), hi = dom.target_high();
  const Complex q(dom.t(), std::clamp(p.imag(), lo.imag(), hi.imag()));
  const int samples = 256;
  for (int k = 1; k < samples; ++k) {
    const Complex x = p + (q - p) * (static_cast<double>(k) / samples);
    if (x.imag() < dom.lower(x.real()) - 1e-12 || x.imag() > dom.upper(x.real()) + 1e-12) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return std::abs(q - p);
}

}  // namespace

LogDomain::LogDomain(RotationFunction rotation, double t) : rotation_(std::move(rotation)), t_(t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw PreconditionError("cap parameter t must be positive");
  double m = 0.0;
  for (double a : linear_grid(0.0, t, 4001)) m = std::max(m, std::abs(rotation_.dh(a)));
  if (!std::isfinite(m)) throw GeometryError("h' is not finite on [0, t]; use x_min > 0");
  lipschitz_ = 1.05 * m;
}

bool LogDomain::contains(Complex z) const {
  const double a = z.real();
  if (!(a > 0.0 && a < t_)) return false;
  return z.imag() > lower(a) && z.imag() < upper(a);
}

WosResult wos_measure(const LogDomain& dom, Complex z0, const WosOptions& options, unsigned target) {
  check_wos_options(options);
  if (!dom.contains(z0)) throw PreconditionError("z0 must lie inside the cap");
  const double scale = 1.0 / std::sqrt(1.0 + dom.lipschitz() * dom.lipschitz());
  const double t = dom.t(), shell = options.shell;
  return run_walks(z0, options, [&](Complex& p, std::mt19937_64& rng, std::uniform_real_distribution<double>& angle) {
    const double a = p.real(), h = dom.lower(a);
    const double d[4] = {a, t - a, (p.imag() - h) * scale, (h + kPi - p.imag()) * scale};
    const int piece = static_cast<int>(std::min_element(d, d + 4) - d);
    if (!(d[piece] >= 0.0)) throw GeometryError("walk left the cap");
    if (d[piece] < shell) return (target & (1u << piece)) ? 1 : 2;
    p += std::polar(d[piece], angle(rng));
    return 0;
  });
}

WosResult wos_disk(Complex z0, double arc_begin, double arc_end, const WosOptions& options) {
  check_wos_options(options);
  if (!(std::abs(z0) < 1.0)) throw PreconditionError("z0 must lie inside the unit disk");
  if (!(arc_end > arc_begin)) throw PreconditionError("empty target arc");
  const double shell = options.shell;
  return run_walks(z0, options, [&](Complex& p, std::mt19937_64& rng, std::uniform_real_distribution<double>& angle) {
    const double d = 1.0 - std::abs(p);
    if (d < shell) {
      const double a = arc_begin + std::fmod(std::fmod(std::arg(p) - arc_begin, kTwoPi) + kTwoPi, kTwoPi);
      return a < arc_end ? 1 : 2;
    }
    p += std::polar(d, angle(rng));
    return 0;
  });
}

GeodesicResult geodesic_dist(const LogDomain& dom, const std::vector<Complex>& sigma, const GeodesicOptions& options) {
  if (sigma.empty()) throw PreconditionError("sigma needs at least one point");
  if (options.initial_columns < 4 || options.stencil < 1) throw PreconditionError("geodesic options out of range");
  for (const Complex& p : sigma) {
    if (p.real() < -1e-12 || p.imag() < dom.lower(p.real()) - 1e-9 || p.imag() > dom.upper(p.real()) + 1e-9) {
      throw PreconditionError("sigma leaves the closed cap");
    }
    if (p.real() >= dom.t() - 1e-12) throw PreconditionError("sigma touches the target arc E_t");
  }
  const auto offsets = stencil_offsets(options.stencil);
  const double aniso = stencil_anisotropy(offsets);
  double direct = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const int pieces = k + 1 < sigma.size() ? 64 : 1;
    for (int s = 0; s < pieces; ++s) {
      const Complex p = k + 1 < sigma.size() ? sigma[k] + (sigma[k + 1] - sigma[k]) * (static_cast<double>(s) / pieces)
                                             : sigma[k];
      direct = std::min(direct, direct_length(dom, p));
    }
  }
  GeodesicResult out;
  int columns = options.initial_columns;
  GridPass pass;
  for (int k = 0; k < options.max_passes; ++k, columns *= 2) {
    const GridPass next = grid_pass(dom, sigma, columns, offsets, options.max_nodes);
    if (!std::isfinite(next.length)) {
      if (k + 1 < options.max_passes) continue;
      if (std::isfinite(direct)) break;
      throw GeometryError("geodesic grid is disconnected; refine the grid");
    }
    out.trace.push_back(next.length);
    const bool settled = std::isfinite(pass.length) &&
                         std::abs(next.length - pass.length) <= options.rel_change * next.length;
    pass = next;
    if (settled) {
      out.converged = true;
      break;
    }
  }
  out.spacing = pass.spacing;
  if (std::isfinite(direct) && direct <= pass.length) {
    out.length = direct;
    out.lower_bound = direct;
    out.converged = true;
  } else {
    out.length = pass.length;
    out.lower_bound = std::max(0.0, pass.length / aniso - 2.0 * pass.spacing);
  }
  return out;
}

double beurling_bound(double dist, double area) {
  if (!(area > 0.0)) throw PreconditionError("area must be positive");
  return 8.0 / kPi * std::exp(-kPi * dist * dist / area);
}

HMReport hm_problem(const LogDomain& domain, Complex z0, const WosOptions& wos, const GeodesicOptions& geo) {
  HMReport r;
  r.wos = wos_measure(domain, z0, wos);
  const double a0 = z0.real();
  r.dist = geodesic_dist(domain, {Complex(a0, domain.lower(a0)), z0}, geo);
  r.lambda = r.dist.lower_bound * r.dist.lower_bound / domain.area();
  r.bound = beurling_bound(r.dist.lower_bound, domain.area());
  r.pass = r.wos.omega <= r.bound + 3.0 * r.wos.std_error;
  return r;
}

nlohmann::json to_json(const HMReport& r) {
  return {{"omega", r.wos.omega},
          {"stderr", r.wos.std_error},
          {"walks", r.wos.walks},
          {"censored", r.wos.censored},
          {"dist", r.dist.lower_bound},
          {"dist_grid", r.dist.length},
          {"dist_converged", r.dist.converged},
          {"lambda", r.lambda},
          {"bound", r.bound},
          {"pass", r.pass}};
}

int TkSequence::count(double x) const {
  return static_cast<int>(std::upper_bound(t.begin(), t.end(), x) - t.begin());
}

TkSequence build_tk(const RotationFunction& rotation, double c, double t_max, double a0) {
  if (!(c > 0.0) || !(t_max > a0) || !(a0 >= 0.0)) throw PreconditionError("build_tk needs c > 0 and t_max > a0 >= 0");
  const auto big_enough = [&](double x) { return rotation.h(x) >= c * std::sqrt(x) * (1.0 - 1e-12); };
  bool gate = false;
  for (double x : geometric_grid(1e11, 1e12, 41)) gate = gate || big_enough(x);
  if (!gate) throw PreconditionError("h(t) >= c sqrt(t) fails on the sampled tail; rotation is out of scope");

  TkSequence tk;
  tk.c = c;
  tk.a0 = a0;
  const auto admissible = [&](double x) {
    if (!(x > a0) || !big_enough(x)) return false;
    return tk.t.empty() || rotation.h(x) / 2.0 > rotation.h(tk.t.back()) + kPi + c * c / 8.0;
  };
  double prev = a0;
  while (true) {
    double x = prev;
    double found = -1.0;
    while (x < t_max) {
      const double next = std::min(t_max, x + std::max(1e-4, 1e-4 * x));
      if (admissible(next)) {
        double lo = x, hi = next;
        for (int it = 0; it < 100 && hi - lo > 1e-14 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          (admissible(mid) ? hi : lo) = mid;
        }
        found = hi;
        break;
      }
      x = next;
    }
    if (found < 0.0) break;
    tk.t.push_back(found);
    prev = found;
  }
  if (tk.t.empty()) throw PreconditionError("no admissible t_1 below t_max");
  return tk;
}

double decay_bound(const TkSequence& tk, double C, double t, int n) {
  if (tk.t.empty() || !(t >= tk.t.front()) || n < 0) throw PreconditionError("decay bound needs t >= t_1 and n >= 0");
  const double d = t - tk.t.front() + tk.c * tk.c * n / 8.0;
  return 8.0 * C / kPi * std::exp(t - d * d / t);
}

double decay_bound(const TkSequence& tk, double C, double t) { return decay_bound(tk, C, t, tk.n(t)); }

double decay_bound_sup(const TkSequence& tk, double C, int n) {
  if (tk.t.empty() || n < 0) throw PreconditionError("decay bound needs a sequence and n >= 0");
  return 8.0 * C / kPi * std::exp(2.0 * (tk.t.front() - tk.c * tk.c * n / 8.0));
}

int decay_n_star(const TkSequence& tk, double C, double target) {
  if (!(C > 0.0) || !(target > 0.0)) throw PreconditionError("decay_n_star needs C > 0 and target > 0");
  const double x = 8.0 * (tk.t.front() + 0.5 * std::log(8.0 * C / (kPi * target))) / (tk.c * tk.c);
  int n = std::max(0, static_cast<int>(std::floor(x)));
  while (n > 0 && decay_bound_sup(tk, C, n - 1) < target) --n;
  while (!(decay_bound_sup(tk, C, n) < target)) ++n;
  return n;
}

std::vector<DecayRow> u_decay(const RotationFunction& rotation, const TkSequence& tk, double C,
                              const std::vector<double>& t_grid, Complex z0, const WosOptions& wos) {
  if (!(C > 0.0)) throw PreconditionError("u_decay needs C > 0");
  std::vector<DecayRow> rows;
  for (double t : t_grid) {
    DecayRow row;
    row.t = t;
    row.n = tk.n(t);
    row.bound = decay_bound(tk, C, t);
    const auto w = wos_measure(LogDomain(rotation, t), z0, wos);
    row.mc = C * std::exp(t) * w.omega;
    row.mc_stderr = C * std::exp(t) * w.std_error;
    row.ok = row.mc <= row.bound + 3.0 * row.mc_stderr;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace heins
