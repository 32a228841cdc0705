#include "spinlab/torus.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>

#include "spinlab/core/compensated.hpp"
#include "spinlab/core/extrapolate.hpp"
#include "spinlab/core/parallel.hpp"
#include "spinlab/core/quadrature.hpp"
#include "spinlab/core/rng.hpp"

namespace spinlab {
namespace {

double sigma_min(const rmat& m) {
    Eigen::JacobiSVD<rmat> svd(m);
    return svd.singularValues().minCoeff();
}

// integer lattice coordinates of the nearest lattice point to x
Eigen::VectorXi nearest_lattice(const torus_geometry& geom, const rvec& x) {
    rvec u = geom.basis.fullPivLu().solve(x);
    Eigen::VectorXi m(geom.n);
    for (int k = 0; k < geom.n; ++k) m(k) = (int)std::lround(u(k));
    return m;
}

// character chi(m) = e^{-2 pi i delta.m} = +-1 for half-integer shifts
double spin_character(const spin_structure& spin, const Eigen::VectorXi& m) {
    long parity = 0;
    for (int k = 0; k < m.size(); ++k)
        parity += (long)std::lround(2.0 * spin.delta(k)) * m(k);
    return (parity % 2 == 0) ? 1.0 : -1.0;
}

// I_k(Q, s) = int_Q^inf r^k e^{-s r^2} dr
double gauss_tail_integral(int k, double Q, double s) {
    if (k == 0) return 0.5 * std::sqrt(pi / s) * std::erfc(std::sqrt(s) * Q);
    if (k == 1) return std::exp(-s * Q * Q) / (2.0 * s);
    return std::pow(Q, k - 1) * std::exp(-s * Q * Q) / (2.0 * s)
           + (k - 1) / (2.0 * s) * gauss_tail_integral(k - 2, Q, s);
}

// entrywise bound (x2 safety) on the neglected damped modes with |xi| > Q
double damped_tail_bound(int n, double s, double Q) {
    return 2.0 * omega_k(n - 1) / (2.0 * pi) * gauss_tail_integral(n - 2, Q, s);
}

double min_nonzero_dual_norm(const torus_geometry& geom, const spin_structure& spin) {
    double smin = sigma_min(geom.dual_basis);
    double best = std::numeric_limits<double>::infinity();
    for (int M = 2;; ++M) {
        Eigen::VectorXi m = Eigen::VectorXi::Constant(geom.n, -M);
        while (true) {
            rvec v = geom.dual_basis * (m.cast<double>() + spin.delta);
            double nv = v.norm();
            if (nv > 1e-14) best = std::min(best, nv);
            int k = 0;
            while (k < geom.n && ++m(k) > M) m(k++) = -M;
            if (k == geom.n) break;
        }
        if (smin * (M + 0.5) > best) return best;
    }
}

// damped component sums S_k over the rows (deterministic chunked reduction)
std::array<cplx, 3> mode_component_sums(const std::vector<mode_row>& rows, double s,
                                        const rvec& d) {
    mode_sum_fn kernel = select_mode_sum_kernel().fn;
    double dv[3] = {0, 0, 0};
    for (int k = 0; k < d.size(); ++k) dv[k] = d(k);
    size_t nchunks = chunk_count(rows.size());
    std::vector<std::array<cplx, 3>> partial(nchunks, {cplx(0), cplx(0), cplx(0)});
    parallel_chunks(rows.size(), [&](size_t b, size_t e, size_t ci) {
        compensated_csum acc[3];
        cplx out[3];
        for (size_t i = b; i < e; ++i) {
            kernel(rows[i], s, dv, out);
            for (int k = 0; k < rows[i].n; ++k) acc[k].add(out[k]);
        }
        for (int k = 0; k < 3; ++k) partial[ci][k] = acc[k].value();
    });
    compensated_csum total[3];
    for (size_t ci = 0; ci < nchunks; ++ci)
        for (int k = 0; k < 3; ++k) total[k].add(partial[ci][k]);
    return {total[0].value(), total[1].value(), total[2].value()};
}

// G(s) = (i / (2 pi vol)) sum_k gamma_k S_k
cmat assemble_green(const torus_geometry& geom, const std::array<cplx, 3>& S) {
    cmat G = cmat::Zero(geom.rep.N, geom.rep.N);
    for (int k = 0; k < geom.n; ++k) G += S[k] * geom.rep.gamma[k];
    return cplx(0, 1) / (2.0 * pi * geom.volume) * G;
}

// reduce d modulo the lattice to the nearest-image representative; the Green
// function picks up the spin character of the removed lattice vector
rvec reduce_displacement(const torus_geometry& geom, const spin_structure& spin, const rvec& d,
                         double* character) {
    Eigen::VectorXi m = nearest_lattice(geom, d);
    *character = spin_character(spin, m);
    return d - geom.basis * m.cast<double>();
}

// real-space image kernel of the split evaluator (complement-damped)
cmat split_image_kernel(const torus_geometry& geom, const rvec& x, double s) {
    double r = x.norm();
    if (geom.n == 2)
        return -(1.0 / (2.0 * pi)) * geom.rep.g(x) / (r * r) * std::exp(-pi * pi * r * r / s);
    // n == 3
    double t = s / (4.0 * pi * pi);
    double damp = std::erfc(r / (2.0 * std::sqrt(t)))
                  + r / std::sqrt(pi * t) * std::exp(-r * r / (4.0 * t));
    return -geom.rep.g(x) / (4.0 * pi * r * r * r) * damp;
}

} // namespace

torus_geometry make_torus(const rmat& basis, int omega_sign) {
    const int n = (int)basis.rows();
    if (basis.cols() != n || n < 1 || n > 6)
        throw dimension_out_of_range("make_torus: basis must be square, n in [1,6]");
    torus_geometry geom;
    geom.n = n;
    geom.basis = basis;
    double det = basis.determinant();
    if (std::abs(det) < 1e-12)
        throw std::invalid_argument("make_torus: basis is singular");
    geom.dual_basis = basis.inverse().transpose();
    geom.volume = std::abs(det);
    if ((geom.basis * geom.dual_basis.transpose() - rmat::Identity(n, n)).cwiseAbs().maxCoeff()
        > 1e-12)
        throw std::invalid_argument("make_torus: dual basis check failed");
    geom.rep = build_rep(n, omega_sign);
    return geom;
}

spin_structure make_spin_structure(const rvec& delta) {
    spin_structure spin;
    spin.delta = delta;
    spin.trivial = true;
    for (int k = 0; k < delta.size(); ++k) {
        if (delta(k) != 0.0 && delta(k) != 0.5)
            throw std::invalid_argument("make_spin_structure: entries must be 0 or 1/2 exactly");
        if (delta(k) != 0.0) spin.trivial = false;
    }
    return spin;
}

rvec spin_shift_vector(const torus_geometry& geom, const spin_structure& spin) {
    return geom.dual_basis * spin.delta;
}

std::vector<mode_row> enumerate_mode_rows(const torus_geometry& geom, const spin_structure& spin,
                                          double Q) {
    if (spin.trivial)
        throw trivial_spin_structure("enumerate_mode_rows: trivial structure has a zero mode");
    const int n = geom.n;
    rvec b1 = geom.dual_basis.col(0);
    double c = b1.squaredNorm();
    int M = (int)std::ceil(Q / sigma_min(geom.dual_basis)) + 1;
    std::vector<mode_row> rows;
    Eigen::VectorXi mperp = Eigen::VectorXi::Constant(n, -M); // slot 0 unused
    while (true) {
        rvec coords = mperp.cast<double>() + spin.delta;
        coords(0) = spin.delta(0);
        rvec xi_perp = geom.dual_basis * coords;
        double a = xi_perp.squaredNorm(), b = 2.0 * xi_perp.dot(b1);
        double disc = b * b - 4.0 * c * (a - Q * Q);
        if (disc > 0) {
            double lo = (-b - std::sqrt(disc)) / (2.0 * c);
            double hi = (-b + std::sqrt(disc)) / (2.0 * c);
            int mlo = (int)std::ceil(lo - 1e-12), mhi = (int)std::floor(hi + 1e-12);
            // split at the |xi| minimum into two half-rows with |xi| nondecreasing
            // along each: the Gaussian weight then only decays within a row, so
            // recurrence-based kernels cannot underflow before the row's bulge
            int msplit = std::clamp((int)std::ceil(-b / (2.0 * c)), mlo, mhi + 1);
            auto emit = [&](int start, int step, int count) {
                if (count <= 0) return;
                mode_row row;
                row.n = n;
                row.count = count;
                rvec xi0 = xi_perp + double(start) * b1;
                for (int k = 0; k < n; ++k) {
                    row.xi0[k] = xi0(k);
                    row.b1[k] = step * b1(k);
                }
                rows.push_back(row);
            };
            emit(msplit, +1, mhi - msplit + 1);
            emit(msplit - 1, -1, msplit - mlo);
        }
        if (n == 1) break;
        int k = 1;
        while (k < n && ++mperp(k) > M) mperp(k++) = -M;
        if (k == n) break;
    }
    return rows;
}

std::vector<spectrum_entry> torus_spectrum(const torus_geometry& geom, const spin_structure& spin,
                                           int count) {
    if (count < 1) throw std::invalid_argument("torus_spectrum: count must be >= 1");
    const int N = geom.rep.N;
    double smin = sigma_min(geom.dual_basis);
    double R = 2.5 * geom.dual_basis.colwise().norm().maxCoeff();
    for (;;) {
        std::vector<double> norms;
        int M = (int)std::ceil(R / smin) + 1;
        Eigen::VectorXi m = Eigen::VectorXi::Constant(geom.n, -M);
        while (true) {
            double nv = (geom.dual_basis * (m.cast<double>() + spin.delta)).norm();
            if (nv > 1e-14 && nv <= R) norms.push_back(nv);
            int k = 0;
            while (k < geom.n && ++m(k) > M) m(k++) = -M;
            if (k == geom.n) break;
        }
        std::sort(norms.begin(), norms.end());
        std::vector<std::pair<double, long>> shells; // (|xi|, lattice points)
        for (double v : norms) {
            if (!shells.empty() && v - shells.back().first <= 1e-9 * (1.0 + v))
                shells.back().second++;
            else
                shells.emplace_back(v, 1);
        }
        long avail = (spin.trivial ? 1 : 0) + 2 * (long)shells.size();
        if (avail >= count) {
            std::vector<spectrum_entry> out;
            if (spin.trivial) out.push_back({0.0, 1L << (geom.n / 2)});
            for (const auto& sh : shells) {
                long mult = (sh.second / 2) * N;
                out.push_back({+2.0 * pi * sh.first, mult});
                out.push_back({-2.0 * pi * sh.first, mult});
                if ((long)out.size() >= count + 1) break;
            }
            out.resize(count);
            return out;
        }
        R *= 1.4;
    }
}

green_result torus_green(const torus_geometry& geom, const spin_structure& spin, const rvec& x,
                         const rvec& y, const mode_sum_config& cfg) {
    if (spin.trivial)
        throw trivial_spin_structure("torus_green: Dirac operator is not invertible");
    if (geom.n < 2) throw dimension_out_of_range("torus_green: n >= 2 required");
    double character = 1.0;
    rvec d = reduce_displacement(geom, spin, x - y, &character);
    if (d.norm() < 1e-12) throw coincident_points("torus_green: x = y mod lattice");

    std::vector<double> schedule = cfg.schedule;
    if (schedule.empty()) {
        double xi_typ = min_nonzero_dual_norm(geom, spin);
        double s0 = 1.0 / std::pow(2.0 * pi * xi_typ, 2.0);
        for (int k = 0; k <= cfg.extrapolation_order; ++k)
            schedule.push_back(s0 * std::pow(4.0, -k));
    }
    for (size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] < schedule[i - 1]) || schedule[i] <= 0)
            throw std::invalid_argument("torus_green: schedule must be strictly decreasing > 0");
    double s_min = schedule.back();

    double Q = cfg.shell_cutoff;
    if (Q <= 0) {
        Q = 3.0 * min_nonzero_dual_norm(geom, spin);
        while (damped_tail_bound(geom.n, s_min, Q) >= 0.1 * cfg.tolerance) Q *= 1.25;
    }

    std::vector<mode_row> rows = enumerate_mode_rows(geom, spin, Q);
    std::vector<double> t;
    std::vector<cmat> greens;
    for (double s : schedule) {
        t.push_back(s);
        greens.push_back(assemble_green(geom, mode_component_sums(rows, s, d)));
    }
    green_result res;
    double resid = 0;
    res.G = character * neville_matrix(t, greens, &resid);
    res.error = resid + 4.0 * damped_tail_bound(geom.n, s_min, Q);
    return res;
}

cmat torus_green_split(const torus_geometry& geom, const spin_structure& spin, const rvec& x,
                       const rvec& y, double s) {
    if (spin.trivial)
        throw trivial_spin_structure("torus_green_split: Dirac operator is not invertible");
    if (geom.n != 2 && geom.n != 3)
        throw dimension_out_of_range("torus_green_split: n in {2,3}");
    double character = 1.0;
    rvec d = reduce_displacement(geom, spin, x - y, &character);
    if (d.norm() < 1e-12) throw coincident_points("torus_green_split: x = y mod lattice");
    if (s <= 0) s = 0.5 * std::pow(geom.volume, 2.0 / geom.n);

    // dual sum: damped modes out to e^{-s Q^2} ~ 5.7e-19
    double Q = std::sqrt(42.0 / s);
    cmat G = assemble_green(geom, mode_component_sums(enumerate_mode_rows(geom, spin, Q), s, d));

    // image sum: complement-damped kernels out to pi^2 R^2 / s ~ 42
    double Rcut = std::sqrt(42.0 * s) / pi;
    int M = (int)std::ceil((Rcut + d.norm()) / sigma_min(geom.basis)) + 1;
    Eigen::VectorXi m = Eigen::VectorXi::Constant(geom.n, -M);
    while (true) {
        rvec xm = d + geom.basis * m.cast<double>();
        if (xm.norm() <= Rcut)
            G += spin_character(spin, m) * split_image_kernel(geom, xm, s);
        int k = 0;
        while (k < geom.n && ++m(k) > M) m(k++) = -M;
        if (k == geom.n) break;
    }
    return character * G;
}

cvec torus_green_apply_eigenspinor(const torus_geometry& geom, const spin_structure& spin,
                                   const rvec& x, const rvec& xi, const cvec& w, int radial_pts,
                                   int angular_res) {
    if (geom.n != 2) throw dimension_out_of_range("torus_green_apply_eigenspinor: n = 2 only");
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (i != j && std::abs(geom.basis(i, j)) > 1e-14)
                throw std::invalid_argument("torus_green_apply_eigenspinor: diagonal bases only");
    const double w1 = 0.5 * geom.basis(0, 0), w2 = 0.5 * geom.basis(1, 1);
    const double rho = 0.5 * std::min(w1, w2);
    const cplx tpi(0.0, 2.0 * pi);
    auto psi = [&](const rvec& y) { return cvec(std::exp(tpi * xi.dot(y)) * w); };
    auto contrib = [&](double r, double theta) {
        rvec u(2);
        u << r * std::cos(theta), r * std::sin(theta);
        return cvec(torus_green_split(geom, spin, x, x + u) * psi(x + u));
    };

    compensated_msum acc(geom.rep.N, 1);
    // ball: polar product rule, radial measure r dr absorbs the kernel pole
    quad_rule rad = panel_rule(0.0, rho, 8, radial_pts);
    sphere_rule circ = sphere_quadrature(2, angular_res);
    for (size_t a = 0; a < circ.w.size(); ++a) {
        double theta = std::atan2(circ.dir[a](1), circ.dir[a](0));
        for (size_t i = 0; i < rad.x.size(); ++i) {
            if (rad.x[i] == 0.0) continue;
            acc.add(rad.w[i] * circ.w[a] * rad.x[i] * contrib(rad.x[i], theta));
        }
    }
    // annulus to the cell boundary: theta panels split at the corner angles
    double beta = std::atan2(w2, w1);
    std::vector<double> edges = {-beta, beta, pi - beta, pi + beta, 2.0 * pi - beta};
    quad_rule tq = panel_rule_edges(edges, 2 * angular_res);
    for (size_t a = 0; a < tq.x.size(); ++a) {
        double theta = tq.x[a];
        double Rb = std::min(w1 / std::abs(std::cos(theta)), w2 / std::abs(std::sin(theta)));
        quad_rule rr = panel_rule(rho, Rb, 4, radial_pts);
        for (size_t i = 0; i < rr.x.size(); ++i)
            acc.add(tq.w[a] * rr.w[i] * rr.x[i] * contrib(rr.x[i], theta));
    }
    return cvec(acc.value().col(0));
}

// ---- finite-difference oracle ----

fd_dirac::fd_dirac(const torus_geometry& geom, const spin_structure& spin, int L)
    : n_(geom.n), L_(L), N_(geom.rep.N), geom_(geom), spin_(spin) {
    if (n_ > 3) throw dimension_out_of_range("fd_dirac: n <= 3");
    if (L < 4 || L > 64) throw dimension_out_of_range("fd_dirac: resolution in [4,64]");
    axis_ = rvec(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            if (i != j && std::abs(geom.basis(i, j)) > 1e-14)
                throw std::invalid_argument("fd_dirac: diagonal bases only");
            if (i == j) {
                if (geom.basis(i, i) <= 0)
                    throw std::invalid_argument("fd_dirac: positive axis lengths required");
                axis_(i) = geom.basis(i, i);
            }
        }
    h_ = 1.0 / L_;
    nodes_ = 1;
    for (int k = 0; k < n_; ++k) nodes_ *= L_;

    // D = sum_k gamma_k (central difference) + i (r_w/2) sum_k h_k Delta_k
    const double r_w = 1.0;
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve((size_t)nodes_ * N_ * (2 * n_ * N_ + 1));
    std::vector<int> idx(n_, 0);
    auto flat = [&](const std::vector<int>& iv) {
        long f = 0;
        for (int k = 0; k < n_; ++k) f = f * L_ + iv[k];
        return f;
    };
    cmat diag = cmat::Zero(N_, N_);
    for (int k = 0; k < n_; ++k) diag += cplx(0, -r_w / (axis_(k) * h_)) * cmat::Identity(N_, N_);
    for (long node = 0;; ++node) {
        long base = node * N_;
        for (int a = 0; a < N_; ++a)
            for (int b = 0; b < N_; ++b)
                if (diag(a, b) != 0.0) trips.emplace_back(base + a, base + b, diag(a, b));
        for (int k = 0; k < n_; ++k) {
            double hk = axis_(k) * h_;
            for (int dir : {+1, -1}) {
                std::vector<int> jv = idx;
                jv[k] += dir;
                double phase = 1.0;
                if (jv[k] == L_) {
                    jv[k] = 0;
                    phase = (spin.delta(k) == 0.5) ? -1.0 : 1.0;
                } else if (jv[k] < 0) {
                    jv[k] = L_ - 1;
                    phase = (spin.delta(k) == 0.5) ? -1.0 : 1.0;
                }
                cmat hop = phase
                           * (double(dir) * geom.rep.gamma[k] / (2.0 * hk)
                              + cplx(0, r_w / (2.0 * hk)) * cmat::Identity(N_, N_));
                long nb = flat(jv) * N_;
                for (int a = 0; a < N_; ++a)
                    for (int b = 0; b < N_; ++b)
                        if (hop(a, b) != 0.0) trips.emplace_back(base + a, nb + b, hop(a, b));
            }
        }
        int k = n_ - 1;
        while (k >= 0 && ++idx[k] == L_) idx[k--] = 0;
        if (k < 0) break;
    }
    D_.resize(nodes_ * N_, nodes_ * N_);
    D_.setFromTriplets(trips.begin(), trips.end());
}

long fd_dirac::node_index(const rvec& x) const {
    rvec u = geom_.basis.fullPivLu().solve(x);
    long f = 0;
    for (int k = 0; k < n_; ++k) {
        double g = u(k) * L_;
        long ik = std::lround(g);
        if (std::abs(g - ik) > 1e-9)
            throw std::invalid_argument("fd_dirac: point is not a grid node");
        ik %= L_;
        if (ik < 0) ik += L_;
        f = f * L_ + ik;
    }
    return f;
}

void fd_dirac::factorize() {
    if (lu_) return;
    if (spin_.trivial)
        throw singular_fd_matrix("fd_dirac: trivial spin structure gives a singular system");
    lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<cplx>>>();
    lu_->compute(D_);
    if (lu_->info() != Eigen::Success)
        throw singular_fd_matrix("fd_dirac: factorization failed");
}

cmat fd_dirac::green(const rvec& x, const rvec& y) {
    factorize();
    long xi = node_index(x), yi = node_index(y);
    auto it = green_cache_.find(yi);
    if (it == green_cache_.end()) {
        double cellvol = geom_.volume / double(nodes_);
        cmat rhs = cmat::Zero(nodes_ * N_, N_);
        rhs.block(yi * N_, 0, N_, N_) = (1.0 / cellvol) * cmat::Identity(N_, N_);
        cmat sol = lu_->solve(rhs);
        it = green_cache_.emplace(yi, std::move(sol)).first;
    }
    return it->second.block(xi * N_, 0, N_, N_);
}

std::vector<double> fd_dirac::smallest_singular_squares(int count, double mu) {
    const long dim = nodes_ * N_;
    Eigen::SparseMatrix<cplx> A = (D_.adjoint() * D_).pruned();
    Eigen::SparseMatrix<cplx> id(dim, dim);
    id.setIdentity();
    A += mu * id;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<cplx>> llt(A);
    if (llt.info() != Eigen::Success)
        throw singular_fd_matrix("fd_dirac: normal-equation factorization failed");
    const int B = std::max(count + 2, 6);
    rng rg(12345);
    cmat V(dim, B);
    for (long i = 0; i < dim; ++i)
        for (int j = 0; j < B; ++j) V(i, j) = cplx(rg.uniform(-1, 1), rg.uniform(-1, 1));
    auto orthonormalize = [&](cmat& M) {
        Eigen::HouseholderQR<cmat> qr(M);
        M = qr.householderQ() * cmat::Identity(dim, B);
    };
    orthonormalize(V);
    for (int iter = 0; iter < 80; ++iter) {
        cmat X = llt.solve(V);
        orthonormalize(X);
        V = X;
    }
    cmat T = V.adjoint() * (A.selfadjointView<Eigen::Lower>() * V);
    Eigen::SelfAdjointEigenSolver<cmat> es((T + T.adjoint()) / 2.0);
    std::vector<double> out;
    for (int i = 0; i < count && i < B; ++i) out.push_back(es.eigenvalues()(i) - mu);
    return out;
}

double torus_fd_smallest_eigenvalue(const torus_geometry& geom, const spin_structure& spin,
                                    int L) {
    fd_dirac fd(geom, spin, L);
    double lam2 = fd.smallest_singular_squares(1)[0];
    return std::sqrt(std::max(lam2, 0.0));
}

double torus_fd_smallest_eigenvalue_extrapolated(const torus_geometry& geom,
                                                 const spin_structure& spin,
                                                 const std::vector<int>& Ls, double* residual) {
    std::vector<double> t, vals;
    for (int L : Ls) {
        t.push_back(1.0 / double(L) / double(L));
        vals.push_back(torus_fd_smallest_eigenvalue(geom, spin, L));
    }
    return neville_scalar(t, vals, residual);
}

int torus_fd_kernel_dimension(const torus_geometry& geom, const spin_structure& spin, int L) {
    fd_dirac fd(geom, spin, L);
    std::vector<double> lam2 = fd.smallest_singular_squares(6);
    int dim = 0;
    for (double v : lam2)
        if (v < 1.0) ++dim;
    return dim;
}

cmat torus_fd_green_extrapolated(const torus_geometry& geom, const spin_structure& spin,
                                 const rvec& d, const std::vector<int>& Ls, double* residual) {
    std::vector<double> t;
    std::vector<cmat> vals;
    rvec y = rvec::Zero(geom.n);
    for (int L : Ls) {
        fd_dirac fd(geom, spin, L);
        t.push_back(1.0 / double(L));
        vals.push_back(fd.green(d, y));
    }
    return neville_matrix(t, vals, residual);
}

} // namespace spinlab
