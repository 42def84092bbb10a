#pragma once

#include <complex>

#include "bidisc/rif.hpp"

namespace bidisc::zoo {

// (2 z1 z2 - z1 - z2) / (2 - z1 - z2); single singularity at (1,1).
inline Rif knese() {
    BiPoly::CoeffGrid c(2, 2);
    c << Complex(2, 0), Complex(-1, 0), Complex(-1, 0), Complex(0, 0);
    return Rif(BiPoly(std::move(c)), 0, 0);
}

// (2 z1 z2 - conj(B) z1 - conj(A) z2) / (2 - A z1 - B z2) for unimodular
// A, B; singularity at (conj(A), conj(B)).  A, B are given by their angles.
inline Rif phi_ab(double angle_a, double angle_b) {
    const Complex A = std::polar(1.0, angle_a), B = std::polar(1.0, angle_b);
    BiPoly::CoeffGrid c(2, 2);
    c << Complex(2, 0), -B, -A, Complex(0, 0);
    return Rif(BiPoly(std::move(c)), 0, 0);
}

// The coordinate functions z1 and z2 as trivial RIFs.
inline Rif coordinate1() { return Rif(BiPoly::constant({1, 0}), 1, 0); }
inline Rif coordinate2() { return Rif(BiPoly::constant({1, 0}), 0, 1); }

inline SymbolPair knese_pair() { return {knese(), knese()}; }

inline SymbolPair phi_ab_pair(double angle_a, double angle_b) {
    return {knese(), phi_ab(angle_a, angle_b)};
}

inline SymbolPair identity_pair() { return {coordinate1(), coordinate2()}; }

}  // namespace bidisc::zoo
