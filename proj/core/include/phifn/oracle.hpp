#pragma once

// Reference oracle in extended (double-double, ~32 digit) precision.
// Deliberately independent of the production path: plain Taylor/squaring for
// the exponential, and phi obtained from the exponential of an augmented
// block matrix, never from the phi recurrences under test.

#include <complex>
#include <utility>

#include "phifn/dense_matrix.hpp"

namespace phifn {

inline constexpr std::size_t kOracleMaxN = 1024;  // expm_ref size cap

// e^A; N <= 1024.
DenseMatrix<double> expm_ref(const DenseMatrix<double>& a);
DenseMatrix<std::complex<double>> expm_ref(const DenseMatrix<std::complex<double>>& a);

// {e^A, phi(A)} from one exponential of [[A, I], [0, 0]]; N <= 512.
std::pair<DenseMatrix<double>, DenseMatrix<double>> phi_exp_ref(const DenseMatrix<double>& a);
std::pair<DenseMatrix<std::complex<double>>, DenseMatrix<std::complex<double>>> phi_exp_ref(
    const DenseMatrix<std::complex<double>>& a);

// phi(A); N <= 512.
DenseMatrix<double> phi_ref(const DenseMatrix<double>& a);
DenseMatrix<std::complex<double>> phi_ref(const DenseMatrix<std::complex<double>>& a);

// phi(A)b for a block b via exp of [[A, b-normalized], [0, 0]]; N + cols <= 1024.
DenseMatrix<double> phi_action_ref(const DenseMatrix<double>& a, const DenseMatrix<double>& b);
DenseMatrix<std::complex<double>> phi_action_ref(const DenseMatrix<std::complex<double>>& a,
                                                 const DenseMatrix<std::complex<double>>& b);

// ||x - y||_1 / ||y||_1 (zero reference is a domain error).
double rel_err_1(const DenseMatrix<double>& x, const DenseMatrix<double>& y);
double rel_err_1(const DenseMatrix<std::complex<double>>& x,
                 const DenseMatrix<std::complex<double>>& y);

// Frobenius-norm relative distance (vector 2-norm for single columns).
double rel_err_2(const DenseMatrix<double>& x, const DenseMatrix<double>& y);
double rel_err_2(const DenseMatrix<std::complex<double>>& x,
                 const DenseMatrix<std::complex<double>>& y);

}  // namespace phifn
