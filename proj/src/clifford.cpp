#include "spinlab/clifford.hpp"

namespace spinlab {
namespace {

cmat kron(const cmat& a, const cmat& b) {
    cmat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

cmat pauli(int k) {
    cmat s(2, 2);
    const cplx I(0.0, 1.0);
    switch (k) {
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, -I, I, 0; break;
        default: s << 1, 0, 0, -1; break;
    }
    return s;
}

// sigma3^{(j-1)} (x) s (x) Id^{(m-j)}, factors counted in 2x2 blocks
cmat jw_factor(int m, int j, const cmat& s) {
    cmat out = cmat::Identity(1, 1);
    for (int a = 1; a <= m; ++a) {
        if (a < j) out = kron(out, pauli(3));
        else if (a == j) out = kron(out, s);
        else out = kron(out, cmat::Identity(2, 2));
    }
    return out;
}

double max_abs(const cmat& m) { return m.cwiseAbs().maxCoeff(); }

// for odd n: omega = z*Id with z in {1,-1,i,-i}; sign(z) = +1 for {1,i}
int omega_scalar_sign(const clifford_rep& rep) {
    cmat om = rep.gamma[0];
    for (int k = 1; k < rep.n; ++k) om = om * rep.gamma[k];
    cplx z = om(0, 0);
    return (z.real() + z.imag() > 0) ? +1 : -1;
}

// conj(gamma_k) = -gamma_k for odd positions and the trailing odd-n gamma
// (purely imaginary entries), +gamma_k for even positions (real entries);
// this parity drives the B-product choices in build_nu/build_quaternionic.
cmat gamma_product(const clifford_rep& rep, int start) { // positions start, start+2, ...
    cmat b = cmat::Identity(rep.N, rep.N);
    int m2 = 2 * (rep.n / 2); // pair block; trailing odd gamma never enters
    for (int k = start; k < m2; k += 2) b = b * rep.gamma[k];
    return b;
}

} // namespace

clifford_rep build_rep(int n, int omega_sign) {
    if (n < 1 || n > 12) throw dimension_out_of_range("build_rep: n must lie in [1,12]");
    if (omega_sign != 1 && omega_sign != -1)
        throw dimension_out_of_range("build_rep: omega_sign must be +-1");
    clifford_rep rep;
    rep.n = n;
    rep.omega_sign = (n % 2 == 1) ? omega_sign : 1;
    const int m = n / 2;
    rep.N = 1 << m;
    const cplx I(0.0, 1.0);
    for (int j = 1; j <= m; ++j) {
        rep.gamma.push_back(I * jw_factor(m, j, pauli(1)));
        rep.gamma.push_back(I * jw_factor(m, j, pauli(2)));
    }
    if (n % 2 == 1) {
        cmat chain = cmat::Identity(1, 1); // i * sigma3^{(x)m}
        for (int a = 0; a < m; ++a) chain = kron(chain, pauli(3));
        rep.gamma.push_back(I * chain);
        if (omega_scalar_sign(rep) != rep.omega_sign) rep.gamma.back() *= -1.0;
    }
    return rep;
}

volume_element_t volume_element(const clifford_rep& rep) {
    volume_element_t v;
    v.omega = rep.gamma[0];
    for (int k = 1; k < rep.n; ++k) v.omega = v.omega * rep.gamma[k];
    int e = (rep.n * (rep.n + 1) / 2) % 2;
    v.square_sign = e ? -1 : 1;
    return v;
}

symmetry_automorphism build_nu(const clifford_rep& rep) {
    symmetry_automorphism nu;
    if (rep.n % 2 == 0) {
        nu.kind = nu_kind::complex_linear;
        nu.B = volume_element(rep).omega;
        return nu;
    }
    if (rep.n % 4 == 3)
        throw n_unavailable("build_nu: no anticommuting real-linear symmetry for n = 3 mod 4");
    // n = 1 mod 4: nu = B o conj with B the product of even-position gammas
    nu.kind = nu_kind::conjugate_linear;
    nu.B = gamma_product(rep, 1);
    return nu;
}

double nu_anticommutator_defect(const clifford_rep& rep, const symmetry_automorphism& nu) {
    double d = 0;
    for (int k = 0; k < rep.n; ++k) {
        cmat a = (nu.kind == nu_kind::complex_linear)
                     ? cmat(nu.B * rep.gamma[k] + rep.gamma[k] * nu.B)
                     : cmat(nu.B * rep.gamma[k].conjugate() + rep.gamma[k] * nu.B);
        d = std::max(d, max_abs(a));
    }
    return d;
}

quaternionic_structure build_quaternionic(const clifford_rep& rep) {
    int r = rep.n % 8;
    if (r != 2 && r != 3 && r != 4)
        throw q_unavailable("build_quaternionic: quaternionic structure requires n = 2,3,4 mod 8");
    quaternionic_structure q;
    // commuting conjugate-linear structure: product of even-position gammas if
    // floor(n/2) is odd, else product of odd-position gammas (ceil(n/2) even)
    if ((rep.n / 2) % 2 == 1) q.B = gamma_product(rep, 1);
    else q.B = gamma_product(rep, 0);
    // Q^2 = B conj(B); must equal -Id for a quaternionic structure
    cmat sq = q.B * q.B.conjugate();
    if (max_abs(cmat(sq + cmat::Identity(rep.N, rep.N))) != 0.0)
        throw q_unavailable("build_quaternionic: construction squared to +Id (real structure)");
    return q;
}

double q_commutator_defect(const clifford_rep& rep, const quaternionic_structure& q) {
    double d = 0;
    for (int k = 0; k < rep.n; ++k)
        d = std::max(d, max_abs(cmat(q.B * rep.gamma[k].conjugate() - rep.gamma[k] * q.B)));
    return d;
}

double clifford_relation_defect(const clifford_rep& rep) {
    double d = 0;
    cmat id = cmat::Identity(rep.N, rep.N);
    for (int j = 0; j < rep.n; ++j) {
        d = std::max(d, max_abs(cmat(rep.gamma[j] + rep.gamma[j].adjoint())));
        for (int k = 0; k < rep.n; ++k) {
            cmat ac = rep.gamma[j] * rep.gamma[k] + rep.gamma[k] * rep.gamma[j];
            if (j == k) ac += 2.0 * id;
            d = std::max(d, max_abs(ac));
        }
    }
    return d;
}

} // namespace spinlab
