#pragma once

#include "quadrep/arith.hpp"

#include <vector>

namespace quadrep {

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;  // row-major
using IVec = std::vector<Integer>;
using IMat = std::vector<IVec>;

Mat identity(size_t n);
Mat zeros(size_t r, size_t c);
Mat diagonal(const Vec& d);
Mat transpose(const Mat& a);
Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& a, const Vec& x);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Rational& s, const Vec& x);
Mat operator*(const Rational& s, const Mat& a);
Rational dot(const Vec& a, const Vec& b);
/// x^T G y.
Rational bilinear(const Mat& g, const Vec& x, const Vec& y);
Rational quad(const Mat& g, const Vec& x);

Rational det(const Mat& a);
Mat inverse(const Mat& a);
size_t rank(const Mat& a);
bool is_zero(const Vec& x);
bool is_integral(const Vec& x);
bool is_integral(const Mat& a);
/// Least common multiple of all denominators.
Integer common_denominator(const Mat& a);
Integer common_denominator(const Vec& x);

Vec column(const Mat& a, size_t j);
Mat from_columns(const std::vector<Vec>& cols, size_t n);

/// Lower-triangular Hermite basis (columns) of the Z-module generated by the
/// given rational columns; the module must have full rank n.
Mat hermite_basis(const std::vector<Vec>& generators, size_t n);

/// Basis matrix (columns) of the lattice of integer solutions of the
/// congruences row . x == 0 mod m for each row (entries taken mod m).
Mat congruence_kernel(const IMat& rows, const Integer& m, size_t n);

/// Null space of a rational matrix (basis vectors of {x : a x = 0}).
std::vector<Vec> kernel(const Mat& a);

/// Symmetric diagonalisation over Q: returns P with P^T G P diagonal and the diagonal.
std::pair<Mat, Vec> diagonalize(const Mat& g);

Rational floor_frac(const Rational& x);  // x - floor(x)
Integer floor_q(const Rational& x);

}  // namespace quadrep
