#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace dtcfd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double& operator[](int a) { return a == 0 ? x : (a == 1 ? y : z); }
  constexpr double operator[](int a) const { return a == 0 ? x : (a == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Row-major 3x3 tensor; for velocity gradients entry (i, j) holds d u_i / d x_j.
struct Tensor3 {
  std::array<double, 9> m{};
  double& operator()(int i, int j) { return m[static_cast<std::size_t>(3 * i + j)]; }
  double operator()(int i, int j) const { return m[static_cast<std::size_t>(3 * i + j)]; }
  double trace() const { return m[0] + m[4] + m[8]; }
};

/// The six faces of a hexahedral cell: -x, +x, -y, +y, -z, +z.
enum class Dir : int { XMinus = 0, XPlus, YMinus, YPlus, ZMinus, ZPlus };

inline constexpr std::array<Dir, 6> kAllDirs{Dir::XMinus, Dir::XPlus, Dir::YMinus,
                                            Dir::YPlus,  Dir::ZMinus, Dir::ZPlus};

constexpr int axis_of(Dir d) { return static_cast<int>(d) / 2; }
constexpr bool is_plus(Dir d) { return static_cast<int>(d) % 2 == 1; }
constexpr double sign_of(Dir d) { return is_plus(d) ? 1.0 : -1.0; }
constexpr Dir opposite(Dir d) { return static_cast<Dir>(static_cast<int>(d) ^ 1); }
constexpr int index_of(Dir d) { return static_cast<int>(d); }

constexpr Vec3 unit_normal(Dir d) {
  Vec3 n;
  n[axis_of(d)] = sign_of(d);
  return n;
}

std::string to_string(Dir d);

}  // namespace dtcfd
