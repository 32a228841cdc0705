#pragma once
#include <stdexcept>
#include <vector>
#include "spinlab/core/types.hpp"

namespace spinlab {

struct dimension_out_of_range : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct n_unavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct q_unavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Irreducible complex Clifford representation with e.e = -|e|^2: gammas are
// anti-Hermitian, entries exactly in {0, +-1, +-i} (iterated 2x2 tensor
// construction), so the algebra checks below hold with zero tolerance.
struct clifford_rep {
    int n = 0;          // ambient dimension
    int N = 0;          // fiber dimension 2^floor(n/2)
    int omega_sign = 1; // odd n: selects which of the two irreps (sign of omega)
    std::vector<cmat> gamma;

    // gamma(x) = sum_k x_k gamma_k
    cmat g(const rvec& x) const {
        cmat m = cmat::Zero(N, N);
        for (int k = 0; k < n; ++k) m += x(k) * gamma[k];
        return m;
    }
};

// 1 <= n <= 12; omega_sign only meaningful for odd n
clifford_rep build_rep(int n, int omega_sign = +1);

struct volume_element_t {
    cmat omega;
    int square_sign; // omega^2 = square_sign * Id, square_sign = (-1)^{n(n+1)/2}
};
volume_element_t volume_element(const clifford_rep& rep);

enum class nu_kind { complex_linear, conjugate_linear };

// real-linear fiber map anticommuting with every gamma(X)
struct symmetry_automorphism {
    nu_kind kind;
    cmat B; // v -> B v (complex-linear) or v -> B conj(v) (conjugate-linear)
    cvec apply(const cvec& v) const {
        return kind == nu_kind::complex_linear ? cvec(B * v) : cvec(B * v.conjugate());
    }
};
// exists iff n = 0,1,2 mod 4; throws n_unavailable for n = 3 mod 4
symmetry_automorphism build_nu(const clifford_rep& rep);

// defect norms, 0 for valid constructions (exact arithmetic)
double nu_anticommutator_defect(const clifford_rep& rep, const symmetry_automorphism& nu);

// conjugate-linear Q with Q gamma(X) = gamma(X) Q and Q^2 = -Id
struct quaternionic_structure {
    cmat B; // Q v = B conj(v)
    cvec apply(const cvec& v) const { return B * v.conjugate(); }
};
// exists iff n = 2,3,4 mod 8; throws q_unavailable otherwise
quaternionic_structure build_quaternionic(const clifford_rep& rep);

double q_commutator_defect(const clifford_rep& rep, const quaternionic_structure& q);

// max entrywise violation of the Clifford relations + anti-Hermiticity
double clifford_relation_defect(const clifford_rep& rep);

} // namespace spinlab
