#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/LU>

namespace frontier
{

using Index = std::int64_t;
using Complex = std::complex<double>;

struct Point
{
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
inline bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }

using Mat2 = Eigen::Matrix2d;
using CMat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2d;

enum class ScalarKind
{
  Real,
  Complex
};

// Raised on violated preconditions or failed numerical checks.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace frontier
