"""Symmetric pairing over a supersingular curve y^2 = x^3 + x.

For p = 3 mod 4 the curve is supersingular with #E(F_p) = p + 1 = cofactor * q,
and F_p2 = F_p(i) with i^2 = -1. G1 is the order-q subgroup of E(F_p); the
pairing is the reduced Tate pairing composed with the distortion map
phi(x, y) = (-x, i*y), so both arguments live in G1 and the map is
non-degenerate there. The target group G2 is the order-q subgroup of F_p2^*,
whose elements have norm 1 (conjugation inverts them).

Representation: G1 points are affine (x, y) int pairs, None for the point at
infinity; F_p2 elements are (a, b) int pairs meaning a + b*i, identity (1, 0).

Vertical Miller lines take values in F_p and are killed by the final
exponentiation, so the loop accumulates only tangent/chord numerators. The
loop runs in Jacobian coordinates with line values scaled by arbitrary F_p^*
factors, which the final exponentiation removes as well.
"""

from __future__ import annotations

from typing import Optional, Sequence, Tuple

try:
    from gmpy2 import mpz, invert as _gmpy_invert

    def _fp_inv(a, p):
        return _gmpy_invert(a, p)

except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    def mpz(x):  # type: ignore[misc]
        return x

    def _fp_inv(a, p):
        return pow(a, p - 2, p)


G1Point = Optional[Tuple[int, int]]
Fp2Element = Tuple[int, int]

FP2_ONE: Fp2Element = (1, 0)


def _naf(k: int) -> list[int]:
    """Non-adjacent form of k, most significant digit first."""
    digits = []
    while k:
        if k & 1:
            d = 2 - (k & 3)
            k -= d
        else:
            d = 0
        digits.append(d)
        k >>= 1
    digits.reverse()
    return digits


class TypeACurve:
    """Group and pairing arithmetic for one (p, q, cofactor) parameter set."""

    def __init__(self, p: int, q: int, cofactor: int):
        if p % 4 != 3 or (p + 1) != q * cofactor:
            raise ValueError("parameters do not describe a supersingular y^2 = x^3 + x group")
        self.p = mpz(p)
        self.q = mpz(q)
        self.cofactor = mpz(cofactor)
        self._sqrt_exp = mpz((p + 1) // 4)
        # Miller schedule: binary digits of q after the leading one, MSB first.
        # The loop scalar is the full subgroup order, so the accumulator hits
        # the point at infinity exactly at the final addition step.
        self._miller_bits = [int(b) for b in bin(q)[3:]]
        self.generator: Tuple[int, int] = self._derive_generator()

    # ------------------------------------------------------------------ F_p

    def fp_sqrt(self, a: int) -> Optional[int]:
        a = a % self.p
        r = pow(a, self._sqrt_exp, self.p)
        if r * r % self.p != a:
            return None
        return int(r)

    # ----------------------------------------------------------------- F_p2

    def fp2_mul(self, u: Fp2Element, v: Fp2Element) -> Fp2Element:
        p = self.p
        a, b = u
        c, d = v
        t1 = a * c
        t2 = b * d
        t3 = (a + b) * (c + d)
        return (int((t1 - t2) % p), int((t3 - t1 - t2) % p))

    def fp2_sqr(self, u: Fp2Element) -> Fp2Element:
        p = self.p
        a, b = u
        return (int((a + b) * (a - b) % p), int(2 * a * b % p))

    def fp2_conj(self, u: Fp2Element) -> Fp2Element:
        a, b = u
        return (a, int((self.p - b) % self.p))

    def fp2_norm(self, u: Fp2Element) -> int:
        a, b = u
        return int((a * a + b * b) % self.p)

    def fp2_inv(self, u: Fp2Element) -> Fp2Element:
        p = self.p
        a, b = u
        ninv = _fp_inv((a * a + b * b) % p, p)
        return (int(a * ninv % p), int((p - b) * ninv % p))

    def fp2_exp(self, u: Fp2Element, k: int) -> Fp2Element:
        if k == 0:
            return FP2_ONE
        if k < 0:
            raise ValueError("negative exponent")
        acc = u
        for bit in bin(k)[3:]:
            acc = self.fp2_sqr(acc)
            if bit == "1":
                acc = self.fp2_mul(acc, u)
        return acc

    # --------------------------------------------------------------- points

    def on_curve(self, point: G1Point) -> bool:
        if point is None:
            return True
        x, y = point
        p = self.p
        return 0 <= x < p and 0 <= y < p and (y * y - (x * x * x + x)) % p == 0

    def in_subgroup(self, point: G1Point) -> bool:
        """Order-q membership: (q-1) * point == -point, i.e. q * point == O."""
        if point is None:
            return True
        if not self.on_curve(point):
            return False
        return self.g1_mul(int(self.q) - 1, point) == self.g1_neg(point)

    def g1_neg(self, point: G1Point) -> G1Point:
        if point is None:
            return None
        x, y = point
        return (x, int((self.p - y) % self.p))

    def g1_add(self, a: G1Point, b: G1Point) -> G1Point:
        if a is None:
            return b
        if b is None:
            return a
        p = self.p
        x1, y1 = a
        x2, y2 = b
        if x1 == x2:
            if (y1 + y2) % p == 0:
                return None
            lam = (3 * x1 * x1 + 1) * _fp_inv(2 * y1 % p, p) % p
        else:
            lam = (y2 - y1) * _fp_inv((x2 - x1) % p, p) % p
        x3 = (lam * lam - x1 - x2) % p
        return (int(x3), int((lam * (x1 - x3) - y1) % p))

    def g1_mul(self, k: int, point: G1Point) -> G1Point:
        """k * point, Jacobian double-and-add over the NAF of k mod q.

        For order-q inputs the accumulator is j * point with 0 < j < q
        throughout, so no degenerate case can occur; the guards below keep the
        routine correct for arbitrary on-curve points (subgroup checks feed
        candidates of any order dividing p + 1 through here).
        """
        k = int(k) % int(self.q)
        if k == 0 or point is None:
            return None
        p = self.p
        xa = mpz(point[0])
        ya = mpz(point[1])
        neg_ya = p - ya
        X, Y, Z = xa, ya, mpz(1)
        for digit in _naf(k)[1:]:
            if Z != 0:
                if Y == 0:
                    Z = mpz(0)  # doubling 2-torsion yields infinity
                else:
                    XX = X * X % p
                    YY = Y * Y % p
                    ZZ = Z * Z % p
                    S = 4 * X * YY % p
                    M = (3 * XX + ZZ * ZZ) % p
                    X3 = (M * M - 2 * S) % p
                    Y3 = (M * (S - X3) - 8 * YY * YY) % p
                    Z3 = 2 * Y * Z % p
                    X, Y, Z = X3, Y3, Z3
            if digit:
                yb = ya if digit > 0 else neg_ya
                if Z == 0:
                    X, Y, Z = xa, mpz(yb), mpz(1)
                    continue
                ZZ = Z * Z % p
                U2 = xa * ZZ % p
                S2 = yb * ZZ % p * Z % p
                H = (U2 - X) % p
                if H == 0:
                    if (S2 - Y) % p == 0:
                        # accumulator equals the addend: double it instead
                        doubled = self.g1_add((int(xa), int(yb)), (int(xa), int(yb)))
                        if doubled is None:
                            Z = mpz(0)
                        else:
                            X, Y, Z = mpz(doubled[0]), mpz(doubled[1]), mpz(1)
                    else:
                        Z = mpz(0)  # accumulator is the addend's negation
                    continue
                r = (S2 - Y) % p
                HH = H * H % p
                J = H * HH % p
                V = X * HH % p
                X3 = (r * r - J - 2 * V) % p
                Y3 = (r * (V - X3) - Y * J) % p
                Z3 = Z * H % p
                X, Y, Z = X3, Y3, Z3
        if Z == 0:
            return None
        zi = _fp_inv(Z, p)
        zi2 = zi * zi % p
        return (int(X * zi2 % p), int(Y * zi2 % p * zi % p))

    def g1_mul_naive(self, k: int, point: G1Point) -> G1Point:
        """Plain affine double-and-add; slow but independent of the Jacobian path."""
        acc: G1Point = None
        addend = point
        k = int(k)
        while k:
            if k & 1:
                acc = self.g1_add(acc, addend)
            addend = self.g1_add(addend, addend)
            k >>= 1
        return acc

    def _derive_generator(self) -> Tuple[int, int]:
        """Smallest-x curve point cleared by the cofactor; canonical smaller y."""
        p = self.p
        x = mpz(1)
        while True:
            rhs = (x * x * x + x) % p
            y = self.fp_sqrt(rhs)
            if y is not None and y != 0:
                base = (int(x), min(y, int(p - y)))
                cleared = self.g1_mul_naive(int(self.cofactor), base)
                if cleared is not None:
                    return cleared
            x += 1

    # ------------------------------------------------------------- pairings

    def miller_product(self, pairs: Sequence[Tuple[Tuple[int, int], Tuple[int, int]]]) -> Fp2Element:
        """Product of Miller evaluations f_{q,U_i}(phi(V_i)), one shared loop.

        All pairs advance through the same doubling schedule, so the F_p2
        accumulator is squared once per bit regardless of how many pairs are
        batched. No final exponentiation is applied here.
        """
        p = self.p
        # state per pair: [X, Y, Z, xu, yu, neg_yu, xv, yv]
        states = []
        for (xu, yu), (xv, yv) in pairs:
            xu, yu = mpz(xu), mpz(yu)
            states.append([xu, yu, mpz(1), xu, yu, p - yu, mpz(xv), mpz(yv)])
        fa, fb = mpz(1), mpz(0)
        for bit in self._miller_bits:
            # shared accumulator squaring
            t = fa * fb % p
            fa = (fa + fb) * (fa - fb) % p
            fb = (t + t) % p
            for st in states:
                X, Y, Z = st[0], st[1], st[2]
                if Z == 0:
                    continue
                XX = X * X % p
                YY = Y * Y % p
                ZZ = Z * Z % p
                S = 4 * X * YY % p
                M = (3 * XX + ZZ * ZZ) % p
                X3 = (M * M - 2 * S) % p
                Y3 = (M * (S - X3) - 8 * YY * YY) % p
                Z3 = 2 * Y * Z % p
                # tangent at the pre-doubling point, evaluated at phi(V)
                A = (M * (X + st[6] * ZZ) - 2 * YY) % p
                B = Z3 * ZZ % p * st[7] % p
                t1 = fa * A
                t2 = fb * B
                t3 = (fa + fb) * (A + B)
                fa = (t1 - t2) % p
                fb = (t3 - t1 - t2) % p
                st[0], st[1], st[2] = X3, Y3, Z3
            if bit:
                for st in states:
                    X, Y, Z = st[0], st[1], st[2]
                    if Z == 0:
                        continue
                    xu, yu = st[3], st[4]
                    ZZ = Z * Z % p
                    U2 = xu * ZZ % p
                    S2 = yu * ZZ % p * Z % p
                    H = (U2 - X) % p
                    if H == 0:
                        # chord is vertical (value in F_p, killed by the final
                        # exponentiation): for order-q inputs this is the last
                        # schedule bit and the accumulator reaches infinity
                        st[2] = mpz(0)
                        continue
                    r = (S2 - Y) % p
                    HH = H * H % p
                    J = H * HH % p
                    V = X * HH % p
                    X3 = (r * r - J - 2 * V) % p
                    Y3 = (r * (V - X3) - Y * J) % p
                    Z3 = Z * H % p
                    A = (Z3 * yu - r * (st[6] + xu)) % p
                    B = (p - Z3 * st[7] % p) % p
                    t1 = fa * A
                    t2 = fb * B
                    t3 = (fa + fb) * (A + B)
                    fa = (t1 - t2) % p
                    fb = (t3 - t1 - t2) % p
                    st[0], st[1], st[2] = X3, Y3, Z3
        return (int(fa), int(fb))

    def final_exp(self, f: Fp2Element) -> Fp2Element:
        """f ^ ((p^2 - 1) / q) = (f^(p-1)) ^ cofactor."""
        p = self.p
        a, b = mpz(f[0]), mpz(f[1])
        # f^(p-1) = conj(f)^2 / norm(f); the result is unitary (norm 1)
        ninv = _fp_inv((a * a + b * b) % p, p)
        nb = p - b
        wa = (a + nb) * (a - nb) % p * ninv % p
        wb = 2 * a * nb % p * ninv % p
        ra, rb = wa, wb
        for bit in bin(int(self.cofactor))[3:]:
            # unitary square: (2a^2 - 1, 2ab)
            t = 2 * ra
            ra, rb = (t * ra - 1) % p, t * rb % p
            if bit == "1":
                t1 = ra * wa
                t2 = rb * wb
                t3 = (ra + rb) * (wa + wb)
                ra = (t1 - t2) % p
                rb = (t3 - t1 - t2) % p
        return (int(ra), int(rb))

    def pairing(self, u: G1Point, v: G1Point) -> Fp2Element:
        """Reduced Tate pairing e(u, v); bilinear and symmetric on <generator>."""
        if u is None or v is None:
            return FP2_ONE
        return self.final_exp(self.miller_product([(u, v)]))

    def pairing_product(self, pairs: Sequence[Tuple[G1Point, G1Point]]) -> Fp2Element:
        """prod_i e(U_i, V_i) with one shared Miller loop and one final exponentiation."""
        live = [(u, v) for u, v in pairs if u is not None and v is not None]
        if not live:
            return FP2_ONE
        return self.final_exp(self.miller_product(live))
