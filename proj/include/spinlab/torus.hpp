#pragma once
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <map>
#include <memory>
#include <vector>

#include "spinlab/clifford.hpp"
#include "spinlab/euclid.hpp"
#include "spinlab/kernels/mode_sum.hpp"

namespace spinlab {

struct trivial_spin_structure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct singular_fd_matrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct torus_geometry {
    int n = 0;
    rmat basis;      // columns generate the lattice
    rmat dual_basis; // inverse-transpose; columns generate the dual lattice
    double volume = 0;
    clifford_rep rep;
};
// basis must be invertible; n in [1,6] for mode sums
torus_geometry make_torus(const rmat& basis, int omega_sign = +1);

struct spin_structure {
    rvec delta; // coordinates w.r.t. the dual basis, entries in {0, 1/2} exactly
    bool trivial = true;
};
spin_structure make_spin_structure(const rvec& delta);

// shift vector delta expressed in ambient coordinates
rvec spin_shift_vector(const torus_geometry& geom, const spin_structure& spin);

struct mode_sum_config {
    double shell_cutoff = 0;      // 0: derived from the damped tail bound rule
    std::vector<double> schedule; // empty: s0*4^{-k}, k=0..4 with s0 = (2 pi |xi|_min)^{-2}
    int extrapolation_order = 4;
    double tolerance = 1e-9; // cutoff chosen so the damped tail bound < 0.1x this
};

struct spectrum_entry {
    double eigenvalue = 0;
    long multiplicity = 0; // aggregated over all dual-lattice points of the shell
};
// eigenvalues +-2pi|xi|, xi in dual lattice + shift, sorted by |eigenvalue|
// (positive first within a shell); kernel entry (0, 2^{floor(n/2)}) iff trivial
std::vector<spectrum_entry> torus_spectrum(const torus_geometry& geom, const spin_structure& spin,
                                           int count);

struct green_result {
    cmat G;
    double error = 0; // extrapolation residual + damped tail bound
};
// Gaussian-regularized mode sum, Richardson-extrapolated in the damping parameter
green_result torus_green(const torus_geometry& geom, const spin_structure& spin, const rvec& x,
                         const rvec& y, const mode_sum_config& cfg = {});

// internal split-sum evaluator (dual Gaussian-damped modes + image sum); the
// value is independent of the split parameter s up to roundoff. s = 0: auto.
cmat torus_green_split(const torus_geometry& geom, const spin_structure& spin, const rvec& x,
                       const rvec& y, double s = 0);

// deterministic row enumeration of {xi = dual*(m + delta) : 0 < |xi| <= Q}
std::vector<mode_row> enumerate_mode_rows(const torus_geometry& geom, const spin_structure& spin,
                                          double Q);

// quadrature of int_cell G(x,y) psi(y) dy for the closed-form eigenspinor
// psi = e^{2 pi i xi.y} w (diagonal 2D bases; split-sum evaluator inside)
cvec torus_green_apply_eigenspinor(const torus_geometry& geom, const spin_structure& spin,
                                   const rvec& x, const rvec& xi, const cvec& w,
                                   int radial_pts = 16, int angular_res = 16);

// ---- finite-difference oracle (i-Wilson discretization) ----
// diagonal bases only, n <= 3, resolution L <= 64 per axis

class fd_dirac {
  public:
    fd_dirac(const torus_geometry& geom, const spin_structure& spin, int L);
    // Green columns between grid nodes (x, y snapped to nodes); solves on demand
    cmat green(const rvec& x, const rvec& y);
    // smallest 'count' eigenvalues of D^dagger D (shift mu included, removed on return)
    std::vector<double> smallest_singular_squares(int count, double mu = 1e-8);
    double h() const { return h_; }

  private:
    int n_, L_, N_;
    long nodes_ = 0;
    double h_ = 0; // lattice coordinate spacing 1/L
    rvec axis_;    // diagonal basis entries
    torus_geometry geom_;
    spin_structure spin_;
    Eigen::SparseMatrix<cplx> D_;
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<cplx>>> lu_;
    std::map<long, cmat> green_cache_; // source node -> all columns stacked (nodes*N x N)
    long node_index(const rvec& x) const;
    void factorize();
};

// |lambda|_min of the FD Dirac at resolution L (via inverse iteration on D^dagger D)
double torus_fd_smallest_eigenvalue(const torus_geometry& geom, const spin_structure& spin, int L);
// Richardson in h^2 over resolutions; residual reported if requested
double torus_fd_smallest_eigenvalue_extrapolated(const torus_geometry& geom,
                                                 const spin_structure& spin,
                                                 const std::vector<int>& Ls,
                                                 double* residual = nullptr);
// dimension of the near-kernel (eigenvalues of D^dagger D below 1)
int torus_fd_kernel_dimension(const torus_geometry& geom, const spin_structure& spin, int L);
// FD Green extrapolated in h at fixed node offset d = x - y (L*d integral for all Ls)
cmat torus_fd_green_extrapolated(const torus_geometry& geom, const spin_structure& spin,
                                 const rvec& d, const std::vector<int>& Ls,
                                 double* residual = nullptr);

} // namespace spinlab
