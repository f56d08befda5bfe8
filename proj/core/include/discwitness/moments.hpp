#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "discwitness/error.hpp"
#include "discwitness/geometry.hpp"
#include "discwitness/scaled.hpp"

namespace discwitness {

enum class MomentMethod { Chord, Green, Area };

const char* to_string(MomentMethod method);

/// M_n = integral over D of exp(i x) y^n in the chart frame, log-scaled.
struct MomentResult {
  ScaledComplex value;
  int n = 0;
  double frame_angle = 0.0;
  MomentMethod method = MomentMethod::Chord;
};

/// Highest order accepted by moment_area.
inline constexpr int kMaxAreaOrder = 80;

/// integral_a^b exp(i x) (f^{n+1} - g^{n+1}) / (n+1) dx over the chart.
MomentResult moment_chord(const ChordChart& chart, int n);

/// Boundary form: -1/(n+1) times the counter-clockwise integral of exp(i x) y^{n+1} dx.
MomentResult moment_green(const SupportCurve& curve, int n, double frame_angle);

/// Tensor Gauss-Legendre quadrature over the strip g(x) <= y <= f(x); n <= kMaxAreaOrder.
MomentResult moment_area(const SupportCurve& curve, int n, double frame_angle);

/// integral_lo^hi exp(i x) f(x)^power dx on the upper arc (or g on the lower arc),
/// with the chart's peak |y| factored into the log scale.
ScaledComplex arc_power_integral(const ChordChart& chart, bool upper, int power, double lo,
                                 double hi);

struct SweepOptions {
  unsigned threads = 1;
};

/// A failure inside moment_sweep, tagged with the index of the failing order.
class SweepError : public Error {
 public:
  SweepError(std::size_t index, const Error& cause);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Evaluates every order independently; output order matches `orders`.
std::vector<MomentResult> moment_sweep(const SupportCurve& curve, std::span<const int> orders,
                                       double frame_angle, MomentMethod method,
                                       const SweepOptions& options = {});

}  // namespace discwitness
