#include "livo/camera.hpp"

#include <algorithm>
#include <cmath>

namespace livo {

namespace {
// Clamp the integer cell so samples exactly on the top/right border reuse the
// last interior cell.
inline int cell(double x, int size) {
  return std::clamp(static_cast<int>(std::floor(x)), 0, size - 2);
}
}  // namespace

double Image::bilinear(double u, double v) const {
  const int x0 = cell(u, width);
  const int y0 = cell(v, height);
  const double a = u - x0;
  const double b = v - y0;
  const double i00 = at(x0, y0);
  const double i10 = at(x0 + 1, y0);
  const double i01 = at(x0, y0 + 1);
  const double i11 = at(x0 + 1, y0 + 1);
  return (1 - a) * (1 - b) * i00 + a * (1 - b) * i10 + (1 - a) * b * i01 + a * b * i11;
}

Vector2d Image::bilinear_gradient(double u, double v) const {
  const int x0 = cell(u, width);
  const int y0 = cell(v, height);
  const double a = u - x0;
  const double b = v - y0;
  const double i00 = at(x0, y0);
  const double i10 = at(x0 + 1, y0);
  const double i01 = at(x0, y0 + 1);
  const double i11 = at(x0 + 1, y0 + 1);
  const double du = (1 - b) * (i10 - i00) + b * (i11 - i01);
  const double dv = (1 - a) * (i01 - i00) + a * (i11 - i10);
  return {du, dv};
}

}  // namespace livo
