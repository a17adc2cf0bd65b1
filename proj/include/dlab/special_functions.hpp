#pragma once

// Complete elliptic integrals and Jacobi elliptic functions.
//
// Everything here uses the *parameter* convention: K(m) = int_0^{pi/2}
// dpsi / sqrt(1 - m sin^2 psi), so that K(m) = pi/2 (1 + m/4 + 9 m^2/64 + ...).

namespace dlab::special {

/// Elliptic parameter m in [0, 1]. Construction rejects anything else.
class EllipticModulus {
public:
    explicit EllipticModulus(double m);
    double value() const noexcept { return m_; }
    /// Complementary parameter 1 - m.
    double complement() const noexcept { return 1.0 - m_; }

private:
    double m_;
};

/// Complete elliptic integral of the first kind. Requires 0 <= m < 1.
double complete_K(EllipticModulus m);
double complete_K(double m);

/// Complete elliptic integral of the second kind. Requires 0 <= m <= 1; E(1) = 1.
double complete_E(EllipticModulus m);
double complete_E(double m);

struct JacobiSnCnDn {
    double sn;
    double cn;
    double dn;
};

/// sn, cn, dn evaluated together by the descending Landen (AGM) scheme.
/// m = 1 falls back to the hyperbolic limits.
JacobiSnCnDn jacobi_sncndn(double z, EllipticModulus m);

double jacobi_cn(double z, EllipticModulus m);
double jacobi_cn(double z, double m);

}  // namespace dlab::special
