#pragma once

namespace ksign {

struct ResidueCheck {
  double numeric = 0.0;
  double closed_form = 0.0;

  /// Relative error, or absolute error when the closed form is 0.
  double error() const;
};

/// (k!/2 pi i) int_{1-iT}^{1+iT} x^s / s^{k+1} ds against 0 (x < 1) or
/// (log x)^k (x > 1). T is chosen so that the remainder of the asymptotic
/// tail expansion stays below tol; SlowDecay if that needs T > 1e7.
ResidueCheck residue_lemma6_check(double x, int k, double tol = 1e-10);

/// Circle radii for the double contour integral. radius = 0 picks
/// r = max(0.1, (2k + l + 1) / (3 |log x|)), the saddle scale of the
/// integrand; the second circle always has radius 2r.
struct ContourOptions {
  double radius = 0.0;
  int nodes = 2048;
};

/// (2 pi i)^-2 over |s1| = r, |s2| = 2r of x^{s1+s2} / ((s1+s2)^l (s1 s2)^{k+1}),
/// trapezoidal in both angles, against binom(2k, k) (log x)^{2k+l} / (2k+l)!.
ResidueCheck residue_lemma7_check(double x, int k, int l, ContourOptions opts = {});

}  // namespace ksign
