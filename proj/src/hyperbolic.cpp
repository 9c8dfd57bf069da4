#include <jester/hyperbolic.hpp>

#include <boost/math/constants/constants.hpp>

#include <algorithm>

namespace jester::hyperbolic {

namespace mp = boost::multiprecision;

Real real_pi() { return boost::math::constants::pi<Real>(); }

const Mat3& lorentz_form()
{
    static const Mat3 j = Vec3(1, 1, -1).asDiagonal();
    return j;
}

Real lorentz_dot(const Vec3& a, const Vec3& b) { return a.x() * b.x() + a.y() * b.y() - a.z() * b.z(); }

Eigen::Matrix3d to_double(const Mat3& m) { return m.unaryExpr([](const Real& x) { return static_cast<double>(x); }); }

namespace {

bool all_finite(const auto& m)
{
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (!mp::isfinite(m(i)))
            return false;
    return true;
}

std::string str(const Real& x) { return std::to_string(static_cast<double>(x)); }

} // namespace

// ---------------------------------------------------------------------------

HPoint::HPoint(const Vec3& coords) : v_(coords)
{
    if (!all_finite(coords) || mp::abs(lorentz_dot(coords, coords) + 1) > tolerance * std::max(Real(1), coords.squaredNorm()) ||
        coords.z() <= 0)
        throw InvalidPoint("(" + str(coords.x()) + ", " + str(coords.y()) + ", " + str(coords.z()) +
                           ") is not on the upper sheet");
}

HPoint HPoint::polar(const Real& r, const Real& theta)
{
    return HPoint(Vec3(mp::sinh(r) * mp::cos(theta), mp::sinh(r) * mp::sin(theta), mp::cosh(r)));
}

double HPoint::distance_to(const HPoint& other) const
{
    return static_cast<double>(mp::acosh(std::max(Real(1), -lorentz_dot(v_, other.v_))));
}

Geodesic::Geodesic(const Vec3& normal) : n_(normal)
{
    if (!all_finite(normal) || mp::abs(lorentz_dot(normal, normal) - 1) > tolerance * std::max(Real(1), normal.squaredNorm()))
        throw NotSpacelike("normal is not a unit spacelike vector");
}

Geodesic Geodesic::through(const HPoint& p, const HPoint& q)
{
    const Mat3& j = lorentz_form();
    const Vec3 jp = j * p.coords();
    const Vec3 jq = j * q.coords();
    const Vec3 n = jp.cross(jq);
    const Real len2 = lorentz_dot(n, n);
    if (!(len2 > 0))
        throw NotSpacelike("points do not span a geodesic");
    return Geodesic(n / mp::sqrt(len2));
}

bool Geodesic::contains(const HPoint& p, double tol) const { return mp::abs(lorentz_dot(n_, p.coords())) < tol; }

// ---------------------------------------------------------------------------

Isometry::Isometry(const Mat3& m) : m_(m)
{
    if (!all_finite(m))
        throw InvalidIsometry("non-finite entries");
    if (form_defect() > form_tolerance)
        throw InvalidIsometry("matrix does not preserve the Lorentz form");
    if (m(2, 2) <= 0)
        throw InvalidIsometry("matrix swaps the sheets of the hyperboloid");
}

int Isometry::orientation() const { return m_.determinant() > 0 ? 1 : -1; }

HPoint Isometry::apply(const HPoint& p) const { return HPoint(m_ * p.coords()); }

Isometry Isometry::inverse() const
{
    const Mat3& j = lorentz_form();
    return {j * m_.transpose() * j, Unchecked{}};
}

double Isometry::form_defect() const
{
    const Mat3& j = lorentz_form();
    return max_abs(m_.transpose() * j * m_ - j);
}

Isometry operator*(const Isometry& a, const Isometry& b) { return {a.m_ * b.m_, Isometry::Unchecked{}}; }

// ---------------------------------------------------------------------------

Isometry translation_to(const HPoint& p)
{
    const Vec3& v = p.coords();
    const Real r = mp::hypot(v.x(), v.y());
    if (r == 0)
        return Isometry::identity();
    const Real ux = v.x() / r;
    const Real uy = v.y() / r;
    const Real c = v.z();
    Mat3 m;
    m << 1 + (c - 1) * ux * ux, (c - 1) * ux * uy, r * ux,
         (c - 1) * ux * uy, 1 + (c - 1) * uy * uy, r * uy,
         r * ux, r * uy, c;
    return Isometry(m);
}

Isometry reflect_normal(const Vec3& n)
{
    const Real nn = lorentz_dot(n, n);
    if (!(nn > 0))
        throw NotSpacelike("reflection needs a spacelike normal");
    const Mat3 outer = n * n.transpose();
    return Isometry(Mat3::Identity() - Real(2) * outer * lorentz_form() / nn);
}

Isometry reflect(const Geodesic& g) { return reflect_normal(g.normal()); }

Isometry rotation(const HPoint& p, const Real& angle)
{
    const Real c = mp::cos(angle);
    const Real s = mp::sin(angle);
    Mat3 r;
    r << c, -s, 0,
         s, c, 0,
         0, 0, 1;
    const Isometry t = translation_to(p);
    return t * Isometry(r) * t.inverse();
}

Real side_from_angles(const Real& opposite, const Real& adjacent1, const Real& adjacent2)
{
    return mp::acosh((mp::cos(opposite) + mp::cos(adjacent1) * mp::cos(adjacent2)) /
                     (mp::sin(adjacent1) * mp::sin(adjacent2)));
}

Triangle triangle_from_angles(const Real& angle_a, const Real& angle_b, const Real& angle_c)
{
    if (!(angle_a > 0 && angle_b > 0 && angle_c > 0))
        throw NotHyperbolic("angles must be positive");
    // Angle sums within rounding of pi describe a Euclidean triangle.
    if (!(angle_a + angle_b + angle_c < real_pi() - angle_sum_margin))
        throw NotHyperbolic("angle sum " + str(angle_a + angle_b + angle_c) + " is not below pi");
    const Real ab = side_from_angles(angle_c, angle_a, angle_b);
    const Real bc = side_from_angles(angle_a, angle_b, angle_c);
    const HPoint a = HPoint::polar(ab, 0);
    const HPoint b = HPoint::origin();
    const HPoint c = HPoint::polar(bc, angle_b);
    return {a, b, c, Geodesic::through(b, c), Geodesic::through(a, c), Geodesic::through(a, b)};
}

double angle_at(const HPoint& p, const HPoint& q, const HPoint& r)
{
    const Vec3& pv = p.coords();
    const Vec3 u = q.coords() + lorentz_dot(q.coords(), pv) * pv;
    const Vec3 v = r.coords() + lorentz_dot(r.coords(), pv) * pv;
    const Real cosine = lorentz_dot(u, v) / mp::sqrt(lorentz_dot(u, u) * lorentz_dot(v, v));
    return static_cast<double>(mp::acos(std::max(Real(-1), std::min(Real(1), cosine))));
}

// ---------------------------------------------------------------------------

double distance_from_identity(const Isometry& m) { return max_abs(m.matrix() - Mat3::Identity()); }

bool is_identity(const Isometry& m, double tol) { return distance_from_identity(m) < tol; }

std::string to_string(Classification::Kind k)
{
    switch (k) {
    case Classification::Kind::identity: return "identity";
    case Classification::Kind::elliptic: return "elliptic";
    case Classification::Kind::parabolic: return "parabolic";
    case Classification::Kind::hyperbolic: return "hyperbolic";
    }
    return "?";
}

Classification classify(const Isometry& m, double tol)
{
    if (m.orientation() < 0)
        throw OrientationReversing("classification needs an orientation-preserving isometry");
    Classification out;
    const Real trace = m.matrix().trace();
    out.trace = static_cast<double>(trace);
    if (mp::abs(trace - 3) <= tol) {
        out.kind = is_identity(m, std::sqrt(tol)) ? Classification::Kind::identity
                                                  : Classification::Kind::parabolic;
        return out;
    }
    if (trace > 3) {
        out.kind = Classification::Kind::hyperbolic;
        out.value = static_cast<double>(mp::acosh((trace - 1) / 2));
        return out;
    }
    out.kind = Classification::Kind::elliptic;
    // The fixed point spans the kernel of M - I.
    const Mat3 shifted = m.matrix() - Mat3::Identity();
    Eigen::JacobiSVD<Mat3> svd(shifted, Eigen::ComputeFullV);
    Vec3 axis = svd.matrixV().col(2);
    const Real norm2 = -lorentz_dot(axis, axis);
    if (norm2 > 0) {
        axis /= mp::sqrt(norm2);
        if (axis.z() < 0)
            axis = -axis;
        axis.z() = mp::sqrt(1 + axis.x() * axis.x() + axis.y() * axis.y());
        out.center = HPoint(axis);
        const Isometry t = translation_to(*out.center);
        const Mat3 r = (t.inverse() * m * t).matrix();
        out.value = static_cast<double>(mp::atan2(r(1, 0), r(0, 0)));
    } else {
        out.value = static_cast<double>(mp::acos(std::max(Real(-1), std::min(Real(1), (trace - 1) / 2))));
    }
    return out;
}

Isometry evaluate_word(const group::Word& w, const IsometryAssignment& a)
{
    return group::evaluate(w, a);
}

} // namespace jester::hyperbolic
