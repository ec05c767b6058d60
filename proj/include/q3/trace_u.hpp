#ifndef Q3_TRACE_U_HPP
#define Q3_TRACE_U_HPP

// Table-free evaluation of U on polynomials in the base function x.
//
// If x(q)^3 runs over the roots y of (1 - A) y^3 + A (y - 1)^3 = 0, with
// A = A(x(q^3)), then U(p(x)) is the average of p(y) over those roots.
// Writing t = (y - 1) / y, the roots are the cube roots of c = (A - 1) / A, and
//   U(p) = sum_j N[3j] (A - 1)^j A^(n - j),   N(t) = p~(1 - t) (1 + t + t^2)^n,
// where n = deg p and p~ is p with its coefficients reversed.  Since A - 1 and A
// differ by one, the sum is A^n R(1/A) with R(s) = sum_j N[3j] (1 - s)^j, so the
// result is a polynomial in A and is evaluated by composition.

#include "q3/poly.hpp"

namespace q3 {

class TraceU {
public:
    // a_poly is the first modular-equation row, A(x) = U(x).
    explicit TraceU(IntPoly a_poly);

    const IntPoly& a_poly() const noexcept { return a_; }

    // U(p(x)) as a polynomial in x.
    IntPoly apply(const IntPoly& p) const;
    // U(gamma p(x)) = U(x p(x)) / x.
    IntPoly apply_gamma(const IntPoly& p) const;

private:
    IntPoly a_;
};

// p(1 - t) for p given by its coefficients.
IntPoly reflect_one_minus(const IntPoly& p);

// (1 + t + t^2)^n.
IntPoly trinomial_power(std::int64_t n);

// p(b(x)).
IntPoly compose(const IntPoly& p, const IntPoly& b);

}  // namespace q3

#endif
