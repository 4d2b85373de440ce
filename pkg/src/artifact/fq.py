"""Arithmetic in small finite fields F_{ell^k} and polynomials over them.

Fields are represented in a polynomial basis over F_ell with a fixed,
deterministically chosen irreducible modulus, so results are reproducible
across runs.  Elements are tuples of ints of length k (little-endian
coefficients).
"""

from __future__ import annotations

import random
from functools import lru_cache


def _poly_is_irreducible(coeffs: tuple[int, ...], ell: int) -> bool:
    """Irreducibility of a monic polynomial over F_ell (x^q-x style test)."""
    k = len(coeffs) - 1
    # x^(ell^k) == x mod f, and gcd(x^(ell^d) - x, f) == 1 for proper d | k
    f = coeffs

    def polmulmod(a, b):
        res = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    res[i + j] = (res[i + j] + ai * bj) % ell
        # reduce mod f (monic)
        for i in range(len(res) - 1, k - 1, -1):
            c = res[i]
            if c:
                res[i] = 0
                for j in range(k + 1):
                    res[i - k + j] = (res[i - k + j] - c * f[j]) % ell
        while len(res) > k:
            res.pop()
        while len(res) < k:
            res.append(0)
        return res

    def frob_power(times):
        # x^(ell^times) mod f via repeated ell-th powering
        cur = [0, 1] + [0] * (k - 2) if k >= 2 else [0]
        cur = cur[:k] + [0] * (k - len(cur))
        for _ in range(times):
            # raise to ell-th power by square-and-multiply
            res = [1] + [0] * (k - 1)
            base = cur
            n = ell
            while n:
                if n & 1:
                    res = polmulmod(res, base)
                base = polmulmod(base, base)
                n >>= 1
            cur = res
        return cur

    def polgcd_is_one(a):
        """gcd(a, f) over F_ell is constant?"""
        def trim(p):
            while p and p[-1] == 0:
                p.pop()
            return p

        u = trim(list(a))
        v = trim(list(f))
        while u:
            # v mod u (u nonzero)
            inv_lead = pow(u[-1], -1, ell)
            while len(v) >= len(u):
                c = (v[-1] * inv_lead) % ell
                if c:
                    off = len(v) - len(u)
                    for j, uj in enumerate(u):
                        v[off + j] = (v[off + j] - c * uj) % ell
                trim(v)
                if not v:
                    break
            u, v = v, u
        return len(v) == 1

    xk = frob_power(k)
    x_itself = ([0, 1] + [0] * (k - 2))[:k] if k >= 2 else [0]
    if k == 1:
        return True
    if xk != x_itself:
        return False
    for d in {k // q for q in range(2, k + 1) if k % q == 0 and _is_prime_small(q)}:
        xd = frob_power(d)
        diff = [(a - b) % ell for a, b in zip(xd, x_itself)]
        if not polgcd_is_one(diff):
            return False
    return True


def _is_prime_small(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


@lru_cache(maxsize=None)
def conway_like_modulus(ell: int, k: int) -> tuple[int, ...]:
    """First monic irreducible of degree k over F_ell in lexicographic order
    of the coefficient tuple (c0, c1, ..., c_{k-1}, 1)."""
    if k == 1:
        return (0, 1)
    for num in range(ell**k):
        coeffs = []
        n = num
        for _ in range(k):
            coeffs.append(n % ell)
            n //= ell
        cand = tuple(coeffs) + (1,)
        if cand[0] == 0:
            continue  # reducible: x divides
        if _poly_is_irreducible(cand, ell):
            return cand
    raise RuntimeError("no irreducible found")  # pragma: no cover


class Fq:
    """The field F_{ell^k} with a fixed modulus; elements are int tuples.

    The modulus defaults to the deterministic lexicographic choice; an
    explicit monic irreducible over F_ell may be supplied instead (used to
    represent extension fields generated by a root of a specific
    polynomial, e.g. a division-polynomial factor).
    """

    def __init__(self, ell: int, k: int, modulus: tuple[int, ...] | None = None):
        self.ell = ell
        self.k = k
        self.q = ell**k
        if modulus is None:
            self.modulus = conway_like_modulus(ell, k)
        else:
            modulus = tuple(c % ell for c in modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree k")
            self.modulus = modulus
        # packed-integer multiplication support: coefficients of a product
        # before reduction are bounded by k*(ell-1)^2
        width_bits = (self.k * (self.ell - 1) ** 2).bit_length()
        self._width = (width_bits + 7) // 8  # bytes per coefficient
        self._mod_tail = [(i, c) for i, c in enumerate(self.modulus[:-1]) if c]

    def _pack(self, a) -> int:
        w = self._width
        if w == 1:
            return int.from_bytes(bytes(a), "little")
        return int.from_bytes(
            b"".join(c.to_bytes(w, "little") for c in a), "little")

    # -- element constructors -------------------------------------------------
    def zero(self):
        return (0,) * self.k

    def one(self):
        return (1,) + (0,) * (self.k - 1)

    def from_int(self, n: int):
        return (n % self.ell,) + (0,) * (self.k - 1)

    def gen(self):
        if self.k == 1:
            raise ValueError("prime field has no generator element t")
        return (0, 1) + (0,) * (self.k - 2)

    def from_index(self, idx: int):
        """Element number idx in the lexicographic enumeration of tuples."""
        coeffs = []
        for _ in range(self.k):
            coeffs.append(idx % self.ell)
            idx //= self.ell
        return tuple(coeffs)

    def elements(self):
        for idx in range(self.q):
            yield self.from_index(idx)

    # -- arithmetic -----------------------------------------------------------
    def add(self, a, b):
        return tuple((x + y) % self.ell for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.ell for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.ell for x in a)

    def mul(self, a, b):
        ell, k = self.ell, self.k
        if k == 1:
            return ((a[0] * b[0]) % ell,)
        # Kronecker substitution: one big-integer multiply, then unpack.
        w = self._width
        prod = self._pack(a) * self._pack(b)
        raw = prod.to_bytes((2 * k - 1) * w, "little")
        if w == 1:
            res = [c % ell for c in raw]
        else:
            res = [int.from_bytes(raw[i * w:(i + 1) * w], "little") % ell
                   for i in range(2 * k - 1)]
        tail = self._mod_tail
        for i in range(2 * k - 2, k - 1, -1):
            c = res[i]
            if c:
                res[i] = 0
                base = i - k
                for j, fj in tail:
                    res[base + j] = (res[base + j] - c * fj) % ell
        return tuple(res[:k])

    def smul(self, c: int, a):
        c %= self.ell
        return tuple((c * x) % self.ell for x in a)

    def is_zero(self, a) -> bool:
        return all(x == 0 for x in a)

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        res = self.one()
        base = a
        while n:
            if n & 1:
                res = self.mul(res, base)
            base = self.mul(base, base)
            n >>= 1
        return res

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def frob(self, a):
        """a^ell (the absolute Frobenius)."""
        return self.pow(a, self.ell)

    def element_order(self, a) -> int:
        if self.is_zero(a):
            raise ValueError("zero has no multiplicative order")
        from .arith import factorize

        n = self.q - 1
        for prime, _ in factorize(n).factors if n > 1 else []:
            while n % prime == 0 and self.is_zero(self.sub(self.pow(a, n // prime), self.one())):
                n //= prime
        return n

    def is_square(self, a) -> bool:
        if self.is_zero(a):
            return True
        if self.ell == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == self.one()

    def sqrt(self, a):
        """A square root, or None.  Deterministic for fixed field."""
        if self.is_zero(a):
            return self.zero()
        if self.ell == 2:
            return self.pow(a, self.q // 2)
        if not self.is_square(a):
            return None
        # Tonelli-Shanks over F_q
        q = self.q
        s, m = q - 1, 0
        while s % 2 == 0:
            s //= 2
            m += 1
        # find a non-square deterministically
        z = None
        for idx in range(1, q):
            cand = self.from_index(idx)
            if not self.is_square(cand):
                z = cand
                break
        c = self.pow(z, s)
        x = self.pow(a, (s + 1) // 2)
        t = self.pow(a, s)
        while t != self.one():
            i, tt = 0, t
            while tt != self.one():
                tt = self.mul(tt, tt)
                i += 1
            b = self.pow(c, 1 << (m - i - 1))
            x = self.mul(x, b)
            c = self.mul(b, b)
            t = self.mul(t, c)
            m = i
        return x

    # embeddings: F_{ell^k} -> F_{ell^(k*d)} determined by mapping the
    # generator to a root of the modulus in the bigger field.
    @lru_cache(maxsize=None)
    def _embedding_image(self, kd: int):
        big = Fq(self.ell, kd)
        if self.k == 1:
            return big.one()
        roots = poly_roots(big, [big.from_int(c) for c in self.modulus])
        if not roots:  # pragma: no cover
            raise RuntimeError("modulus has no root in extension")
        return sorted(roots)[0]

    def embed(self, a, big: "Fq"):
        """Image of a under the fixed embedding into F_{ell^(big.k)}."""
        if big.k % self.k:
            raise ValueError("not an extension")
        if big.k == self.k:
            return a
        img = self._embedding_image(big.k)
        res = big.zero()
        power = big.one()
        for c in a:
            res = big.add(res, big.smul(c, power))
            power = big.mul(power, img)
        return res


# ---------------------------------------------------------------------------
# Polynomials over Fq: dense little-endian coefficient lists.
# ---------------------------------------------------------------------------

def poly_trim(F: Fq, f):
    while len(f) > 1 and F.is_zero(f[-1]):
        f = f[:-1]
    return f


def poly_deg(F: Fq, f) -> int:
    f = poly_trim(F, f)
    if len(f) == 1 and F.is_zero(f[0]):
        return -1
    return len(f) - 1


def poly_add(F: Fq, f, g):
    n = max(len(f), len(g))
    f = list(f) + [F.zero()] * (n - len(f))
    g = list(g) + [F.zero()] * (n - len(g))
    return poly_trim(F, [F.add(a, b) for a, b in zip(f, g)])


def poly_sub(F: Fq, f, g):
    n = max(len(f), len(g))
    f = list(f) + [F.zero()] * (n - len(f))
    g = list(g) + [F.zero()] * (n - len(g))
    return poly_trim(F, [F.sub(a, b) for a, b in zip(f, g)])


def poly_mul(F: Fq, f, g):
    if poly_deg(F, f) < 0 or poly_deg(F, g) < 0:
        return [F.zero()]
    res = [F.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not F.is_zero(a):
            for j, b in enumerate(g):
                res[i + j] = F.add(res[i + j], F.mul(a, b))
    return poly_trim(F, res)


def poly_divmod(F: Fq, f, g):
    f = list(poly_trim(F, f))
    g = poly_trim(F, g)
    dg = poly_deg(F, g)
    if dg < 0:
        raise ZeroDivisionError
    inv_lead = F.inv(g[-1])
    q = [F.zero()] * max(len(f) - dg, 1)
    while poly_deg(F, f) >= dg:
        df = len(f) - 1
        c = F.mul(f[-1], inv_lead)
        q[df - dg] = c
        for j in range(dg + 1):
            f[df - dg + j] = F.sub(f[df - dg + j], F.mul(c, g[j]))
        f = list(poly_trim(F, f))
    return poly_trim(F, q), poly_trim(F, f)


def poly_mod(F: Fq, f, g):
    return poly_divmod(F, f, g)[1]


def poly_gcd(F: Fq, f, g):
    f, g = poly_trim(F, f), poly_trim(F, g)
    while poly_deg(F, g) >= 0:
        f, g = g, poly_mod(F, f, g)
    d = poly_deg(F, f)
    if d >= 0:
        lead_inv = F.inv(f[-1])
        f = [F.mul(c, lead_inv) for c in f]
    return f


def poly_powmod(F: Fq, f, n: int, mod):
    res = [F.one()]
    base = poly_mod(F, f, mod)
    while n:
        if n & 1:
            res = poly_mod(F, poly_mul(F, res, base), mod)
        base = poly_mod(F, poly_mul(F, base, base), mod)
        n >>= 1
    return res


def poly_eval(F: Fq, f, x):
    res = F.zero()
    for c in reversed(poly_trim(F, f)):
        res = F.add(F.mul(res, x), c)
    return res


def poly_deriv(F: Fq, f):
    return poly_trim(F, [F.smul(i, c) for i, c in enumerate(f)][1:] or [F.zero()])


def _split_all_linear(F: Fq, f, rng: random.Random):
    """Roots of f, assuming f is squarefree and splits into linears over F."""
    d = poly_deg(F, f)
    if d <= 0:
        return []
    if d == 1:
        return [F.neg(F.div(f[0], f[1]))]
    while True:
        if F.ell == 2:
            # trace splitting of y -> c*y: T(z) = z + z^2 + ... + z^(2^(k-1))
            c = F.from_index(1 + rng.randrange(F.q - 1))
            acc = [F.zero()]
            cur = poly_mod(F, [F.zero(), c], f)
            for _ in range(F.k):
                acc = poly_add(F, acc, cur)
                cur = poly_mod(F, poly_mul(F, cur, cur), f)
            g = poly_gcd(F, acc, f)
        else:
            delta = F.from_index(rng.randrange(F.q))
            h = poly_powmod(F, [delta, F.one()], (F.q - 1) // 2, f)
            g = poly_gcd(F, poly_sub(F, h, [F.one()]), f)
        dg = poly_deg(F, g)
        if 0 < dg < d:
            other, _ = poly_divmod(F, f, g)
            return _split_all_linear(F, g, rng) + _split_all_linear(F, other, rng)


def poly_roots(F: Fq, f) -> list:
    """Distinct roots of f in F (no multiplicities)."""
    f = poly_trim(F, f)
    if poly_deg(F, f) < 1:
        return []
    xq = poly_powmod(F, [F.zero(), F.one()], F.q, f)
    g = poly_gcd(F, poly_sub(F, xq, [F.zero(), F.one()]), f)
    rng = random.Random(0xC0FFEE ^ F.q ^ poly_deg(F, f))
    return sorted(_split_all_linear(F, g, rng))


def poly_root_multiplicity(F: Fq, f, r) -> int:
    m = 0
    f = poly_trim(F, f)
    while poly_deg(F, f) >= 1 and F.is_zero(poly_eval(F, f, r)):
        f, _ = poly_divmod(F, f, [F.neg(r), F.one()])
        m += 1
    return m


class QuadExt:
    """Quadratic extension B(sqrt(D)) of a field B with D a non-square.

    Elements are pairs (a, b) of B-elements meaning a + b*sqrt(D).
    Implements the same protocol as Fq so the polynomial helpers above
    work over it.
    """

    def __init__(self, base: Fq, D):
        self.base = base
        self.D = D
        self.ell = base.ell
        self.k = 2 * base.k
        self.q = base.q**2

    def zero(self):
        return (self.base.zero(), self.base.zero())

    def one(self):
        return (self.base.one(), self.base.zero())

    def gen(self):
        """sqrt(D)."""
        return (self.base.zero(), self.base.one())

    def from_int(self, n: int):
        return (self.base.from_int(n), self.base.zero())

    def from_base(self, a):
        return (a, self.base.zero())

    def from_index(self, idx: int):
        return (self.base.from_index(idx % self.base.q),
                self.base.from_index(idx // self.base.q))

    def add(self, x, y):
        return (self.base.add(x[0], y[0]), self.base.add(x[1], y[1]))

    def sub(self, x, y):
        return (self.base.sub(x[0], y[0]), self.base.sub(x[1], y[1]))

    def neg(self, x):
        return (self.base.neg(x[0]), self.base.neg(x[1]))

    def smul(self, c: int, x):
        return (self.base.smul(c, x[0]), self.base.smul(c, x[1]))

    def mul(self, x, y):
        B = self.base
        a, b = x
        c, d = y
        return (B.add(B.mul(a, c), B.mul(B.mul(b, d), self.D)),
                B.add(B.mul(a, d), B.mul(b, c)))

    def is_zero(self, x) -> bool:
        return self.base.is_zero(x[0]) and self.base.is_zero(x[1])

    def pow(self, x, n: int):
        if n < 0:
            return self.pow(self.inv(x), -n)
        res = self.one()
        while n:
            if n & 1:
                res = self.mul(res, x)
            x = self.mul(x, x)
            n >>= 1
        return res

    def inv(self, x):
        B = self.base
        a, b = x
        norm = B.sub(B.mul(a, a), B.mul(B.mul(b, b), self.D))
        ninv = B.inv(norm)
        return (B.mul(a, ninv), B.neg(B.mul(b, ninv)))

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def in_base(self, x):
        """The B-component, if x actually lies in B; else None."""
        return x[0] if self.base.is_zero(x[1]) else None


_EMBED_ROOT_CACHE: dict = {}


def field_embed(small: Fq, a, big) -> tuple:
    """Image of a in a bigger field (Fq with any modulus, or QuadExt)
    under the fixed embedding sending the generator of `small` to the
    least root of small.modulus in `big`."""
    if small.k == 1:
        return big.from_int(a[0])
    key = (small.ell, small.k, small.modulus, id(big))
    if key not in _EMBED_ROOT_CACHE:
        coeffs = [big.from_int(c) for c in small.modulus]
        roots = poly_roots(big, coeffs)
        if not roots:
            raise ValueError("no embedding: modulus has no root in target")
        _EMBED_ROOT_CACHE[key] = roots[0]
    img = _EMBED_ROOT_CACHE[key]
    res = big.zero()
    power = big.one()
    for c in a:
        res = big.add(res, big.smul(c, power))
        power = big.mul(power, img)
    return res
