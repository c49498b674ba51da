#include "rnls/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace rnls::spectral {

namespace {

// Plans depend only on the array shape, the transformed axis (-1 = all) and
// direction. FFTW_ESTIMATE keeps plan choice (and so results) deterministic.
using PlanKey = std::tuple<std::size_t, std::size_t, std::size_t, int, int, int>;

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const Grid& g, int axis, int sign) {
    const PlanKey key{g.points[0], g.points[1], g.points[2], g.dim, axis, sign};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_plan plan = make(g, axis, sign);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  static fftw_plan make(const Grid& g, int axis, int sign) {
    const std::size_t total = g.size();
    auto* buf = fftw_alloc_complex(total);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    if (axis < 0) {
      int n[3];
      for (int a = 0; a < g.dim; ++a) n[a] = static_cast<int>(g.points[a]);
      plan = fftw_plan_dft(g.dim, n, buf, buf, sign, flags);
    } else {
      fftw_iodim dim{static_cast<int>(g.points[axis]), static_cast<int>(g.stride(axis)),
                     static_cast<int>(g.stride(axis))};
      fftw_iodim loops[2];
      int nloops = 0;
      for (int a = 0; a < g.dim; ++a) {
        if (a == axis) continue;
        loops[nloops++] = {static_cast<int>(g.points[a]), static_cast<int>(g.stride(a)),
                           static_cast<int>(g.stride(a))};
      }
      plan = fftw_plan_guru_dft(1, &dim, nloops, loops, buf, buf, sign, flags);
    }
    fftw_free(buf);
    if (!plan) throw std::runtime_error("FFTW planning failed");
    return plan;
  }

  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

void execute(std::span<cplx> data, const Grid& g, int axis, int sign) {
  if (data.size() != g.size()) throw std::invalid_argument("transform: data length mismatch");
  fftw_plan plan = PlanCache::instance().get(g, axis, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

void scale(std::span<cplx> data, double s) {
  for (auto& v : data) v *= s;
}

// Iterate over every line along `axis`, calling f(offset_of_first, stride).
template <typename F>
void for_each_line(const Grid& g, int axis, F&& f) {
  const std::size_t stride = g.stride(axis);
  const std::size_t n = g.points[axis];
  const std::size_t outer = g.size() / (n * stride);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t s = 0; s < stride; ++s) f(o * n * stride + s, stride);
}

// Trigonometric evaluation matrix: row t gives the interpolant at target
// coordinate y_t from the n DFT coefficients of samples on [-L, L).
std::vector<cplx> evaluation_matrix(const Grid& src, int axis, const std::vector<double>& y) {
  const std::size_t n = src.points[axis];
  const double x0 = -src.half_width[axis];
  const auto& k = src.wavenumbers[axis];
  std::vector<cplx> E(y.size() * n);
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double d = y[t] - x0;
    for (std::size_t m = 0; m < n; ++m) {
      cplx e;
      if (m == n / 2) {
        e = std::cos(k[m] * d);  // Nyquist: symmetric split of +/- modes
      } else {
        e = std::polar(1.0, k[m] * d);
      }
      E[t * n + m] = e / static_cast<double>(n);
    }
  }
  return E;
}

}  // namespace

void forward_inplace(std::span<cplx> data, const Grid& grid) { execute(data, grid, -1, FFTW_FORWARD); }

void inverse_inplace(std::span<cplx> data, const Grid& grid) {
  execute(data, grid, -1, FFTW_BACKWARD);
  scale(data, 1.0 / static_cast<double>(grid.size()));
}

void forward_axis(std::span<cplx> data, const Grid& grid, int axis) {
  execute(data, grid, axis, FFTW_FORWARD);
}

void inverse_axis(std::span<cplx> data, const Grid& grid, int axis) {
  execute(data, grid, axis, FFTW_BACKWARD);
  scale(data, 1.0 / static_cast<double>(grid.points[axis]));
}

ComplexField forward(const ComplexField& f) {
  ComplexField out = f;
  forward_inplace(out.values(), out.grid());
  return out;
}

ComplexField inverse(const ComplexField& f) {
  ComplexField out = f;
  inverse_inplace(out.values(), out.grid());
  return out;
}

ComplexField derivative(const ComplexField& f, int axis) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim) throw std::invalid_argument("derivative: bad axis");
  ComplexField out = f;
  forward_axis(out.values(), g, axis);
  const auto& k = g.wavenumbers[axis];
  const std::size_t n = g.points[axis];
  for_each_line(g, axis, [&](std::size_t off, std::size_t stride) {
    for (std::size_t m = 0; m < n; ++m) {
      auto& v = out[off + m * stride];
      v = (m == n / 2) ? cplx{} : cplx{0.0, k[m]} * v;
    }
  });
  inverse_axis(out.values(), g, axis);
  return out;
}

GradientResult gradient(const ComplexField& f, double resolved_tail) {
  const Grid& g = f.grid();
  GradientResult r;
  const ComplexField F = forward(f);
  r.tail_fraction = tail_fraction_of_spectrum(F);
  r.resolved = r.tail_fraction <= resolved_tail;
  for (int a = 0; a < g.dim; ++a) {
    ComplexField d = F;
    const auto& k = g.wavenumbers[a];
    const std::size_t n = g.points[a];
    std::size_t idx = 0;
    for (std::size_t i = 0; i < g.points[0]; ++i)
      for (std::size_t j = 0; j < g.points[1]; ++j)
        for (std::size_t l = 0; l < g.points[2]; ++l, ++idx) {
          const std::size_t m = a == 0 ? i : (a == 1 ? j : l);
          d[idx] = (m == n / 2) ? cplx{} : cplx{0.0, k[m]} * d[idx];
        }
    inverse_inplace(d.values(), g);
    r.components.push_back(std::move(d));
  }
  return r;
}

ComplexField negative_laplacian(const ComplexField& f) {
  const Grid& g = f.grid();
  ComplexField F = forward(f);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < g.points[0]; ++i)
    for (std::size_t j = 0; j < g.points[1]; ++j)
      for (std::size_t l = 0; l < g.points[2]; ++l, ++idx) {
        const double k2 = g.wavenumbers[0][i] * g.wavenumbers[0][i] +
                          g.wavenumbers[1][j] * g.wavenumbers[1][j] +
                          g.wavenumbers[2][l] * g.wavenumbers[2][l];
        F[idx] *= k2;
      }
  inverse_inplace(F.values(), g);
  return F;
}

double kinetic(const ComplexField& f) {
  const Grid& g = f.grid();
  const ComplexField F = forward(f);
  double s = 0.0;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < g.points[0]; ++i)
    for (std::size_t j = 0; j < g.points[1]; ++j)
      for (std::size_t l = 0; l < g.points[2]; ++l, ++idx) {
        const double k2 = g.wavenumbers[0][i] * g.wavenumbers[0][i] +
                          g.wavenumbers[1][j] * g.wavenumbers[1][j] +
                          g.wavenumbers[2][l] * g.wavenumbers[2][l];
        s += k2 * std::norm(F[idx]);
      }
  return s * g.cell_volume() / static_cast<double>(g.size());
}

double tail_fraction_of_spectrum(const ComplexField& F) {
  const Grid& g = F.grid();
  std::array<double, 3> cut{};
  for (int a = 0; a < 3; ++a) cut[a] = a < g.dim ? kTailCutoff * g.nyquist(a) : 1e300;
  double total = 0.0, tail = 0.0;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < g.points[0]; ++i) {
    const bool ti = std::abs(g.wavenumbers[0][i]) > cut[0];
    for (std::size_t j = 0; j < g.points[1]; ++j) {
      const bool tj = std::abs(g.wavenumbers[1][j]) > cut[1];
      for (std::size_t l = 0; l < g.points[2]; ++l, ++idx) {
        const double p = std::norm(F[idx]);
        total += p;
        if (ti || tj || std::abs(g.wavenumbers[2][l]) > cut[2]) tail += p;
      }
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

double tail_fraction(const ComplexField& f) { return tail_fraction_of_spectrum(forward(f)); }

double integrate(std::span<const double> values, const Grid& grid) {
  if (values.size() != grid.size()) throw std::invalid_argument("integrate: length mismatch");
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_volume();
}

double integrate(const RealField& f) { return integrate(f.values(), f.grid()); }

ComplexField resample(const ComplexField& f, const GridPtr& target, double max_lost_fraction) {
  const Grid& src = f.grid();
  const Grid& dst = *target;
  if (src.dim != dst.dim) throw std::invalid_argument("resample: dimension mismatch");

  // Mass of f outside the target box cannot be represented there.
  double total = 0.0, lost = 0.0;
  for_each_point(src, [&](std::size_t i, const Point& x) {
    const double w = std::norm(f[i]);
    total += w;
    for (int a = 0; a < src.dim; ++a) {
      if (x[a] < -dst.half_width[a] || x[a] >= dst.half_width[a]) {
        lost += w;
        break;
      }
    }
  });
  if (total > 0.0 && lost / total > max_lost_fraction)
    throw std::domain_error("resample: target grid cannot hold the field (aliasing)");

  // Separable evaluation: transform one axis, contract it against the
  // evaluation matrix, and move on to the next axis with the reshaped array.
  std::array<std::size_t, 3> shape = src.points;
  std::vector<cplx> cur(f.values().begin(), f.values().end());
  for (int axis = 0; axis < src.dim; ++axis) {
    // Transform the current array along `axis`. Build a temporary grid whose
    // point counts match the current (partially resampled) shape.
    Grid tmp = src;
    tmp.points = shape;
    {
      const std::size_t stride = tmp.stride(axis);
      const std::size_t n = shape[axis];
      const std::size_t outer = cur.size() / (n * stride);
      // Intermediate shapes mix source and target counts, all powers of two.
      execute(std::span(cur), tmp, axis, FFTW_FORWARD);
      const std::vector<double> y = dst.coordinates(axis);
      const std::vector<cplx> E = evaluation_matrix(src, axis, y);
      const std::size_t m_out = y.size();
      std::array<std::size_t, 3> next = shape;
      next[axis] = m_out;
      Grid nt = src;
      nt.points = next;
      std::vector<cplx> out(cur.size() / n * m_out);
      const std::size_t out_stride = nt.stride(axis);
      for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t s = 0; s < stride; ++s) {
          const std::size_t in_off = o * n * stride + s;
          const std::size_t out_off = o * m_out * out_stride + s;
          for (std::size_t t = 0; t < m_out; ++t) {
            cplx acc = 0.0;
            const cplx* row = &E[t * n];
            for (std::size_t m = 0; m < n; ++m) acc += row[m] * cur[in_off + m * stride];
            out[out_off + t * out_stride] = acc;
          }
        }
      cur.swap(out);
      shape = next;
    }
  }
  return ComplexField(target, std::move(cur));
}

std::vector<cplx> evaluate_at(const ComplexField& f, std::span<const Point> points) {
  const Grid& g = f.grid();
  const ComplexField F = forward(f);
  std::vector<cplx> out(points.size());
  std::array<std::vector<cplx>, 3> rows;
  for (std::size_t t = 0; t < points.size(); ++t) {
    for (int a = 0; a < 3; ++a) {
      if (a < g.dim) {
        rows[a] = evaluation_matrix(g, a, {points[t][a]});
      } else {
        rows[a].assign(1, cplx{1.0, 0.0});
      }
    }
    cplx acc = 0.0;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < g.points[0]; ++i)
      for (std::size_t j = 0; j < g.points[1]; ++j) {
        const cplx rij = rows[0][i] * rows[1][j];
        for (std::size_t l = 0; l < g.points[2]; ++l, ++idx) acc += rij * rows[2][l] * F[idx];
      }
    out[t] = acc;
  }
  return out;
}

ComplexField dilate(const ComplexField& f, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("dilate: factor must be positive");
  // g(x) = f(s x): evaluate f on a grid whose coordinates are s * x.
  GridPtr probe = scaled_grid(f.grid(), s);
  ComplexField g = resample(f, probe, 1.0);
  // Outside the source box f is zero, not its periodic image.
  const Grid& src = f.grid();
  for_each_point(*probe, [&](std::size_t i, const Point& y) {
    for (int a = 0; a < src.dim; ++a)
      if (y[a] < -src.half_width[a] || y[a] >= src.half_width[a]) {
        g[i] = 0.0;
        break;
      }
  });
  return ComplexField(f.grid_ptr(), std::vector<cplx>(g.values().begin(), g.values().end()));
}

}  // namespace rnls::spectral
