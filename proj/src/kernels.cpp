#include "pmech/kernels.hpp"

#include <cmath>
#include <numbers>

#include <omp.h>

#include "pmech/fft.hpp"

namespace pmech::kernels {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_centered(const grid::Axis& a) {
  if (a.n % 2 != 0) throw grid::GridError("twisted convolution needs an even lattice size");
  const double expected = -static_cast<double>(a.n / 2) * a.step();
  if (std::abs(a.min - expected) > 1e-9 * a.length())
    throw grid::GridError("twisted convolution needs a centered lattice");
}

void check_twisted_inputs(const grid::Grid2D& k1, const grid::Grid2D& k2) {
  k1.check_same_lattice(k2);
  check_centered(k1.axis0());
  check_centered(k1.axis1());
}

void check_leapfrog(std::span<double> q, std::span<double> p0, std::span<double> p1,
                    const LeapfrogParams& prm) {
  if (p0.size() != q.size()) throw std::invalid_argument("leapfrog: p0 and q sizes differ");
  if (!p1.empty() && p1.size() != q.size())
    throw std::invalid_argument("leapfrog: p1 must be empty or match q");
  if (!(prm.dt > 0.0) || (!p1.empty() && !(prm.h > 0.0)))
    throw std::invalid_argument("leapfrog: steps must be positive");
}

// Dirac pairing at one site: -1/2 sum_mu (e^mu D_mu f + D_mu f e^mu).
FieldMV pair_at(std::span<const FieldMV> field, const Lattice& lat, std::size_t site,
                const std::vector<FieldMV>& gens) {
  FieldMV out(gens.front().metric());
  for (std::size_t mu = 0; mu < lat.shape.size(); ++mu) {
    FieldMV d = field[lat.neighbour(site, mu, +1)] - field[lat.neighbour(site, mu, -1)];
    d *= 1.0 / (2.0 * lat.spacing[mu]);
    out += gens[mu] * d;
    out += d * gens[mu];
  }
  out *= -0.5;
  return out;
}

std::vector<FieldMV> generators(const clifford::MetricPtr& metric) {
  std::vector<FieldMV> g;
  for (std::size_t mu = 0; mu < metric->dim(); ++mu) g.push_back(clifford::generator<double>(metric, mu));
  return g;
}

}  // namespace

std::size_t Lattice::sites() const {
  std::size_t s = 1;
  for (auto n : shape) s *= n;
  return s;
}

bool Lattice::interior(std::size_t site) const {
  for (std::size_t ax = shape.size(); ax-- > 0;) {
    const std::size_t idx = site % shape[ax];
    site /= shape[ax];
    if (!periodic[ax] && (idx == 0 || idx + 1 == shape[ax])) return false;
  }
  return true;
}

std::size_t Lattice::neighbour(std::size_t site, std::size_t axis, int step) const {
  std::size_t stride = 1;
  for (std::size_t ax = shape.size(); ax-- > axis + 1;) stride *= shape[ax];
  const std::size_t idx = (site / stride) % shape[axis];
  const std::size_t n = shape[axis];
  const std::size_t moved = (idx + n + static_cast<std::size_t>(step + 1) - 1) % n;
  return site + (moved - idx) * stride;
}

void Lattice::validate(std::size_t dim) const {
  if (shape.size() != dim || spacing.size() != dim || periodic.size() != dim)
    throw std::invalid_argument("lattice rank does not match the metric dimension");
  for (std::size_t ax = 0; ax < dim; ++ax) {
    if (shape[ax] < 3) throw std::invalid_argument("lattice axes need at least 3 sites");
    if (!(spacing[ax] > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
  }
}

void set_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int max_threads() { return omp_get_max_threads(); }

// ---------------------------------------------------------------------------

namespace reference {

grid::Grid2D twisted_convolution(const grid::Grid2D& k1, const grid::Grid2D& k2, double theta) {
  check_twisted_inputs(k1, k2);
  const std::size_t nx = k1.rows(), ny = k1.cols();
  const auto& ax = k1.axis0();
  const auto& ay = k1.axis1();
  grid::Grid2D out(ax, ay);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      Complex acc{};
      for (std::size_t a = 0; a < nx; ++a)
        for (std::size_t b = 0; b < ny; ++b) {
          const std::size_t di = (i + nx - a + nx / 2) % nx;
          const std::size_t dj = (j + ny - b + ny / 2) % ny;
          const double w = ax.at(i) * ay.at(b) - ay.at(j) * ax.at(a);
          acc += std::polar(1.0, theta * w) * k1(a, b) * k2(di, dj);
        }
      out(i, j) = acc * k1.cell();
    }
  return out;
}

grid::Grid2D kernel_action(double hbar, const grid::Grid2D& kernel, const grid::Grid2D& f) {
  const auto& qa = f.axis0();
  const auto& pa = f.axis1();
  grid::Grid2D out(qa, pa);
  for (std::size_t a = 0; a < kernel.rows(); ++a)
    for (std::size_t b = 0; b < kernel.cols(); ++b) {
      const Complex w = kernel(a, b) * kernel.cell();
      if (w == Complex{}) continue;
      const double x = kernel.axis0().at(a), y = kernel.axis1().at(b);
      const grid::Grid2D g = grid::shift(grid::shift(f, 0, -hbar * y / 2.0), 1, hbar * x / 2.0);
      for (std::size_t i = 0; i < f.rows(); ++i)
        for (std::size_t j = 0; j < f.cols(); ++j)
          out(i, j) += w * std::polar(1.0, -kTwoPi * (qa.at(i) * x + pa.at(j) * y)) * g(i, j);
    }
  return out;
}

void leapfrog_step(std::span<double> q, std::span<double> p0, std::span<double> p1,
                   const LeapfrogParams& prm) {
  check_leapfrog(q, p0, p1, prm);
  const std::size_t n = q.size();
  const bool space = !p1.empty();
  for (std::size_t i = 0; i < n; ++i) {
    double div = 0.0;
    if (space) div = (p1[i] - p1[(i + n - 1) % n]) / prm.h;
    p0[i] += prm.dt * (-power_series(prm.force, q[i]) - div);
  }
  for (std::size_t i = 0; i < n; ++i) q[i] += prm.dt * prm.eta00_lower * p0[i];
  if (space) {
    const double c = prm.dt * prm.eta00_lower / (prm.eta11_lower * prm.h);
    for (std::size_t i = 0; i < n; ++i) p1[i] += c * (p0[(i + 1) % n] - p0[i]);
  }
}

std::vector<FieldMV> dirac_pairing(std::span<const FieldMV> field, const Lattice& lattice,
                                   const clifford::MetricPtr& metric) {
  lattice.validate(metric->dim());
  if (field.size() != lattice.sites()) throw std::invalid_argument("field size does not match lattice");
  const auto gens = generators(metric);
  std::vector<FieldMV> out(field.size(), FieldMV(metric));
  for (std::size_t s = 0; s < field.size(); ++s)
    if (lattice.interior(s)) out[s] = pair_at(field, lattice, s, gens);
  return out;
}

}  // namespace reference

// ---------------------------------------------------------------------------

namespace parallel {

grid::Grid2D twisted_convolution(const grid::Grid2D& k1, const grid::Grid2D& k2, double theta) {
  check_twisted_inputs(k1, k2);
  const std::size_t nx = k1.rows(), ny = k1.cols();
  const auto& ax = k1.axis0();
  const auto& ay = k1.axis1();

  // Row r of k2, rotated so that index (j - j') mod ny reads k2(r, j - j' + ny/2).
  std::vector<Complex> spec2(nx * ny);
  for (std::size_t r = 0; r < nx; ++r)
    for (std::size_t m = 0; m < ny; ++m) spec2[r * ny + m] = k2(r, (m + ny / 2) % ny);
  fft::transform_rows(spec2, nx, ny, fft::Direction::Forward);

  // chirp_in(i, b) = e^{i theta x_i y_b}; the output phase e^{-i theta y_j x_a} is its conjugate.
  std::vector<Complex> chirp(nx * ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t b = 0; b < ny; ++b) chirp[i * ny + b] = std::polar(1.0, theta * ax.at(i) * ay.at(b));

  grid::Grid2D out(ax, ay);
  const double scale = k1.cell() / static_cast<double>(ny);
  const long nxl = static_cast<long>(nx);

#pragma omp parallel
  {
    std::vector<Complex> buf(ny), acc(ny);
#pragma omp for schedule(static)
    for (long il = 0; il < nxl; ++il) {
      const auto i = static_cast<std::size_t>(il);
      std::fill(acc.begin(), acc.end(), Complex{});
      const Complex* cin = &chirp[i * ny];
      for (std::size_t a = 0; a < nx; ++a) {
        bool any = false;
        for (std::size_t b = 0; b < ny; ++b) {
          buf[b] = k1(a, b) * cin[b];
          any = any || buf[b] != Complex{};
        }
        if (!any) continue;
        fft::transform_1d(buf, fft::Direction::Forward);
        const Complex* s2 = &spec2[((i + nx - a + nx / 2) % nx) * ny];
        for (std::size_t m = 0; m < ny; ++m) buf[m] *= s2[m];
        fft::transform_1d(buf, fft::Direction::Backward);
        const Complex* cout = &chirp[a * ny];
        for (std::size_t j = 0; j < ny; ++j) acc[j] += std::conj(cout[j]) * buf[j];
      }
      for (std::size_t j = 0; j < ny; ++j) out(i, j) = acc[j] * scale;
    }
  }
  return out;
}

grid::Grid2D kernel_action(double hbar, const grid::Grid2D& kernel, const grid::Grid2D& f) {
  const auto& qa = f.axis0();
  const auto& pa = f.axis1();
  const std::size_t nq = f.rows(), np = f.cols();
  grid::Grid2D out(qa, pa);
  const double cell = kernel.cell();
  const long nql = static_cast<long>(nq);

  for (std::size_t b = 0; b < kernel.cols(); ++b) {
    bool any = false;
    for (std::size_t a = 0; a < kernel.rows() && !any; ++a) any = kernel(a, b) != Complex{};
    if (!any) continue;
    const double y = kernel.axis1().at(b);
    // Shift along q once per y node, then move to p-frequency space row by row.
    grid::Grid2D g = grid::shift(f, 0, -hbar * y / 2.0);
    std::vector<Complex>& spec = g.values();
    fft::transform_rows(spec, nq, np, fft::Direction::Forward);

#pragma omp parallel
    {
      std::vector<Complex> row(np);
#pragma omp for schedule(static)
      for (long il = 0; il < nql; ++il) {
        const auto i = static_cast<std::size_t>(il);
        const double q = qa.at(i);
        for (std::size_t a = 0; a < kernel.rows(); ++a) {
          const Complex w = kernel(a, b) * cell;
          if (w == Complex{}) continue;
          const double x = kernel.axis0().at(a);
          const double delta = hbar * x / 2.0;
          for (std::size_t m = 0; m < np; ++m) {
            Complex mult = std::polar(1.0 / static_cast<double>(np), kTwoPi * pa.frequency(m) * delta);
            if (np % 2 == 0 && m == np / 2)
              mult = std::cos(std::numbers::pi * static_cast<double>(np) * delta / pa.length()) /
                     static_cast<double>(np);
            row[m] = spec[i * np + m] * mult;
          }
          fft::transform_1d(row, fft::Direction::Backward);
          const Complex phase_q = w * std::polar(1.0, -kTwoPi * q * x);
          for (std::size_t j = 0; j < np; ++j)
            out(i, j) += phase_q * std::polar(1.0, -kTwoPi * pa.at(j) * y) * row[j];
        }
      }
    }
  }
  return out;
}

void leapfrog_step(std::span<double> q, std::span<double> p0, std::span<double> p1,
                   const LeapfrogParams& prm) {
  check_leapfrog(q, p0, p1, prm);
  const long n = static_cast<long>(q.size());
  const std::size_t nu = q.size();
  const bool space = !p1.empty();
  const double c = space ? prm.dt * prm.eta00_lower / (prm.eta11_lower * prm.h) : 0.0;
#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (long il = 0; il < n; ++il) {
      const auto i = static_cast<std::size_t>(il);
      double div = 0.0;
      if (space) div = (p1[i] - p1[(i + nu - 1) % nu]) / prm.h;
      p0[i] += prm.dt * (-power_series(prm.force, q[i]) - div);
    }
#pragma omp for schedule(static)
    for (long il = 0; il < n; ++il) {
      const auto i = static_cast<std::size_t>(il);
      q[i] += prm.dt * prm.eta00_lower * p0[i];
    }
    if (space) {
#pragma omp for schedule(static)
      for (long il = 0; il < n; ++il) {
        const auto i = static_cast<std::size_t>(il);
        p1[i] += c * (p0[(i + 1) % nu] - p0[i]);
      }
    }
  }
}

std::vector<FieldMV> dirac_pairing(std::span<const FieldMV> field, const Lattice& lattice,
                                   const clifford::MetricPtr& metric) {
  lattice.validate(metric->dim());
  if (field.size() != lattice.sites()) throw std::invalid_argument("field size does not match lattice");
  const auto gens = generators(metric);
  std::vector<FieldMV> out(field.size(), FieldMV(metric));
  const long n = static_cast<long>(field.size());
#pragma omp parallel for schedule(static)
  for (long sl = 0; sl < n; ++sl) {
    const auto s = static_cast<std::size_t>(sl);
    if (lattice.interior(s)) out[s] = pair_at(field, lattice, s, gens);
  }
  return out;
}

}  // namespace parallel

}  // namespace pmech::kernels
