// Internal Cholesky wrapper. Uses LAPACKE (dpotrf/dpotrs/dpotri) when the
// header is available, Eigen's LLT otherwise. All calls are single-threaded:
// parallelism lives at the bootstrap-replicate level and per-replicate work
// must stay bitwise deterministic.
#pragma once

#include <cmath>

#include <Eigen/Dense>

#if __has_include(<lapacke.h>)
#define EXOCAUSE_HAVE_LAPACKE 1
#include <lapacke.h>

#include <dlfcn.h>
#else
#define EXOCAUSE_HAVE_LAPACKE 0
#endif

namespace exocause::linalg {

#if EXOCAUSE_HAVE_LAPACKE

inline void pin_blas_threads() {
    static const bool done = [] {
        if (auto* sym = dlsym(RTLD_DEFAULT, "openblas_set_num_threads")) {
            reinterpret_cast<void (*)(int)>(sym)(1);
        }
        return true;
    }();
    (void)done;
}

/// In-place lower Cholesky of a symmetric positive-definite matrix.
class Cholesky {
public:
    /// Factors a copy of k; ok() reports whether k was positive definite.
    explicit Cholesky(Eigen::MatrixXd k) : l_(std::move(k)) {
        pin_blas_threads();
        const auto n = static_cast<lapack_int>(l_.rows());
        ok_ = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, l_.data(), n) == 0;
    }

    bool ok() const { return ok_; }

    double log_det() const {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < l_.rows(); ++i) acc += std::log(l_(i, i));
        return 2.0 * acc;
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
        Eigen::VectorXd x = b;
        const auto n = static_cast<lapack_int>(l_.rows());
        LAPACKE_dpotrs(LAPACK_COL_MAJOR, 'L', n, 1, l_.data(), n, x.data(), n);
        return x;
    }

    /// Full inverse of the original matrix.
    Eigen::MatrixXd inverse() const {
        Eigen::MatrixXd inv = l_;
        const auto n = static_cast<lapack_int>(l_.rows());
        LAPACKE_dpotri(LAPACK_COL_MAJOR, 'L', n, inv.data(), n);
        inv.triangularView<Eigen::StrictlyUpper>() =
            inv.triangularView<Eigen::StrictlyLower>().transpose();
        return inv;
    }

private:
    Eigen::MatrixXd l_;
    bool ok_ = false;
};

#else

class Cholesky {
public:
    explicit Cholesky(Eigen::MatrixXd k) : llt_(std::move(k)) {
        ok_ = llt_.info() == Eigen::Success;
    }

    bool ok() const { return ok_; }

    double log_det() const {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < llt_.matrixLLT().rows(); ++i) {
            acc += std::log(llt_.matrixLLT()(i, i));
        }
        return 2.0 * acc;
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }

    Eigen::MatrixXd inverse() const {
        return llt_.solve(Eigen::MatrixXd::Identity(llt_.matrixLLT().rows(),
                                                    llt_.matrixLLT().rows()));
    }

private:
    Eigen::LLT<Eigen::MatrixXd> llt_;
    bool ok_ = false;
};

#endif

}  // namespace exocause::linalg
