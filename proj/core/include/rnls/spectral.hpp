#pragma once

#include <span>
#include <vector>

#include "rnls/field.hpp"

// Fourier pseudo-spectral substrate: transforms, derivatives and quadrature
// on periodic grids. Forward transforms are unnormalized; inverse transforms
// divide by the number of transformed points, so inverse(forward(f)) == f.

namespace rnls::spectral {

/// Fraction of |wavenumber| beyond which a mode counts as "tail".
inline constexpr double kTailCutoff = 2.0 / 3.0;
/// Default resolution threshold for derivative operations.
inline constexpr double kDefaultResolvedTail = 1e-8;

ComplexField forward(const ComplexField& f);
ComplexField inverse(const ComplexField& f);

/// In-place transforms over all axes of `grid`.
void forward_inplace(std::span<cplx> data, const Grid& grid);
void inverse_inplace(std::span<cplx> data, const Grid& grid);

/// In-place transforms along a single axis (all lines of that axis).
void forward_axis(std::span<cplx> data, const Grid& grid, int axis);
void inverse_axis(std::span<cplx> data, const Grid& grid, int axis);

/// Spectral first derivative along `axis`; the Nyquist mode is dropped.
ComplexField derivative(const ComplexField& f, int axis);

struct GradientResult {
  std::vector<ComplexField> components;
  double tail_fraction = 0.0;
  bool resolved = true;
};

GradientResult gradient(const ComplexField& f, double resolved_tail = kDefaultResolvedTail);

/// -Laplacian applied spectrally.
ComplexField negative_laplacian(const ComplexField& f);

/// ||grad f||_2^2 evaluated from the spectrum (sum |xi|^2 |f_hat|^2).
double kinetic(const ComplexField& f);

/// Share of spectral power carried by modes with |xi_j| > kTailCutoff * pi/h_j
/// on any axis. Zero for the zero field.
double tail_fraction(const ComplexField& f);
double tail_fraction_of_spectrum(const ComplexField& spectrum);

/// Rectangle rule sum f * prod h_j.
double integrate(const RealField& f);
double integrate(std::span<const double> values, const Grid& grid);

/// Trigonometric interpolation of `f` onto the points of `target`.
///
/// Throws std::domain_error if more than `max_lost_fraction` of the mass of
/// `f` lies outside the box covered by `target` (the target cannot hold it).
ComplexField resample(const ComplexField& f, const GridPtr& target,
                      double max_lost_fraction = 1e-8);

/// Trigonometric interpolant of f at arbitrary points.
std::vector<cplx> evaluate_at(const ComplexField& f, std::span<const Point> points);

/// g(x) = f(s x) on the grid of f, by trigonometric interpolation.
ComplexField dilate(const ComplexField& f, double s);

}  // namespace rnls::spectral
