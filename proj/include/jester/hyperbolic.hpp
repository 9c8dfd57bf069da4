#pragma once

#include <jester/presentations.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>

#include <array>
#include <map>
#include <string>

namespace jester::hyperbolic {

JESTER_DEFINE_ERROR(InvalidPoint);
JESTER_DEFINE_ERROR(NotSpacelike);
JESTER_DEFINE_ERROR(NotHyperbolic);
JESTER_DEFINE_ERROR(OrientationReversing);
JESTER_DEFINE_ERROR(InvalidIsometry);

/// Scalar for all hyperboloid coordinates and matrix entries. Entries of
/// 64-letter products reach ~1e12, so double rounding alone (~entry^2 * 1e-16)
/// would break the 1e-9 Lorentz-form bound; 50 decimal digits leave ample room.
using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>, boost::multiprecision::et_off>;
using Vec3 = Eigen::Matrix<Real, 3, 1>;
using Mat3 = Eigen::Matrix<Real, 3, 3>;

Real real_pi();

/// Lorentz form diag(1, 1, -1).
const Mat3& lorentz_form();
Real lorentz_dot(const Vec3& a, const Vec3& b);

/// Largest absolute entry, rounded to double.
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m)
{
    return static_cast<double>(m.cwiseAbs().maxCoeff());
}
Eigen::Matrix3d to_double(const Mat3& m);

/// Point on the upper sheet x^2 + y^2 - t^2 = -1, t > 0.
class HPoint {
public:
    static constexpr double tolerance = 1e-12;

    explicit HPoint(const Vec3& coords);
    /// Point at hyperbolic distance `r` from the origin in direction `theta`.
    static HPoint polar(const Real& r, const Real& theta);
    static HPoint origin() { return HPoint(Vec3(0, 0, 1)); }

    const Vec3& coords() const { return v_; }
    double distance_to(const HPoint& other) const;

private:
    Vec3 v_;
};

/// Geodesic given by a unit spacelike normal n (<n, n> = +1); its points are
/// the p with <n, p> = 0.
class Geodesic {
public:
    static constexpr double tolerance = 1e-12;

    explicit Geodesic(const Vec3& normal);
    static Geodesic through(const HPoint& p, const HPoint& q);

    const Vec3& normal() const { return n_; }
    bool contains(const HPoint& p, double tol = 1e-10) const;

private:
    Vec3 n_;
};

/// Isometry of H^2 as a matrix preserving the Lorentz form and the upper sheet.
class Isometry {
public:
    static constexpr double form_tolerance = 1e-9;

    Isometry() : m_(Mat3::Identity()) {}
    /// Throws InvalidIsometry unless M^T J M = J and M preserves the upper sheet.
    explicit Isometry(const Mat3& m);

    static Isometry identity() { return {}; }

    const Mat3& matrix() const { return m_; }
    int orientation() const;
    HPoint apply(const HPoint& p) const;
    Isometry inverse() const;
    /// max |(M^T J M - J)_ij|
    double form_defect() const;

    friend Isometry operator*(const Isometry& a, const Isometry& b);

private:
    struct Unchecked {};
    Isometry(const Mat3& m, Unchecked) : m_(m) {}

    Mat3 m_;
};

/// Moves the origin to p along the geodesic joining them.
Isometry translation_to(const HPoint& p);

/// Lorentz reflection M = I - 2 n n^T J / <n, n>.
Isometry reflect(const Geodesic& g);
Isometry reflect_normal(const Vec3& n);

/// Rotation about p, counterclockwise for positive angles (seen from above
/// the upper sheet).
Isometry rotation(const HPoint& p, const Real& angle);

struct Triangle {
    HPoint a, b, c;
    Geodesic bc, ac, ab;  ///< edge geodesics, named by their endpoints
};

/// Angle sums above pi - angle_sum_margin are rejected as not hyperbolic.
inline constexpr double angle_sum_margin = 1e-12;

/// Triangle with interior angles angle_a, angle_b, angle_c at A, B, C.
/// Placement: B at the origin, A on the positive x-axis, C at polar angle
/// angle_b (so for a right angle at B, BC runs along the y-axis).
Triangle triangle_from_angles(const Real& angle_a, const Real& angle_b, const Real& angle_c);

/// Interior angle at vertex p between geodesic rays toward q and r.
double angle_at(const HPoint& p, const HPoint& q, const HPoint& r);

/// Side length opposite `opposite` by the angle form of the hyperbolic law
/// of cosines.
Real side_from_angles(const Real& opposite, const Real& adjacent1, const Real& adjacent2);

bool is_identity(const Isometry& m, double tol);
double distance_from_identity(const Isometry& m);

struct Classification {
    enum class Kind { identity, elliptic, parabolic, hyperbolic };
    Kind kind = Kind::identity;
    /// Signed rotation angle in (-pi, pi] for elliptic, translation length
    /// for hyperbolic, 0 otherwise.
    double value = 0;
    double trace = 3;
    /// Fixed point for elliptic isometries.
    std::optional<HPoint> center;
};

std::string to_string(Classification::Kind k);

/// Classification by trace: < 3 elliptic, = 3 identity or parabolic, > 3
/// hyperbolic. `tol` separates the trace = 3 cases.
Classification classify(const Isometry& m, double tol = 1e-9);

using IsometryAssignment = std::map<std::string, Isometry>;

Isometry evaluate_word(const group::Word& w, const IsometryAssignment& a);

} // namespace jester::hyperbolic

template <>
struct jester::group::ElementTraits<jester::hyperbolic::Isometry> {
    using Isometry = jester::hyperbolic::Isometry;
    static Isometry identity() { return Isometry::identity(); }
    static Isometry multiply(const Isometry& a, const Isometry& b) { return a * b; }
    static Isometry inverse(const Isometry& a) { return a.inverse(); }
    static double distance_from_identity(const Isometry& a) { return jester::hyperbolic::distance_from_identity(a); }
};
