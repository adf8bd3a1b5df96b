"""Quadratic forms over GF(2) and the mod-2 symplectic group.

Vectors live in (Z/2)^(2g) with the interleaved basis
alpha_1, beta_1, alpha_2, beta_2, ..., alpha_g, beta_g and are packed into
Python ints: bit 2i is the alpha_(i+1) coordinate, bit 2i+1 the beta_(i+1)
coordinate.  A quadratic form q refines the mod-2 intersection pairing via
q(u + v) = q(u) + q(v) + <u, v>, and the spin value of a class is q + 1, so
the zero class always has spin value 1.
"""

from collections import deque


def _even_mask(n):
    # bits 0, 2, 4, ... below n
    m = 0
    for k in range(0, n, 2):
        m |= 1 << k
    return m


# ---------------------------------------------------------------------------
# vectors


class Gf2Vec:
    """An element of (Z/2)^n, n = 2g, packed into an int bitmask.

    >>> v = Gf2Vec.from_coeffs([1, 0, 1, 1])
    >>> v.coeffs()
    (1, 0, 1, 1)
    >>> (v ^ v).bits
    0
    """

    __slots__ = ("bits", "n")

    def __init__(self, bits, n):
        if n <= 0 or n % 2:
            raise ValueError("dimension must be a positive even number")
        self.bits = bits & ((1 << n) - 1)
        self.n = n

    @classmethod
    def from_coeffs(cls, coeffs):
        bits = 0
        for k, c in enumerate(coeffs):
            if c & 1:
                bits |= 1 << k
        return cls(bits, len(coeffs))

    def coeffs(self):
        return tuple((self.bits >> k) & 1 for k in range(self.n))

    def __xor__(self, other):
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return Gf2Vec(self.bits ^ other.bits, self.n)

    def __eq__(self, other):
        return isinstance(other, Gf2Vec) and self.bits == other.bits and self.n == other.n

    def __hash__(self):
        return hash((self.bits, self.n))

    def __bool__(self):
        return self.bits != 0

    def __repr__(self):
        return "Gf2Vec(%s)" % (",".join(str(c) for c in self.coeffs()),)


def zero_vec(n):
    return Gf2Vec(0, n)


def basis_vec(k, n):
    """The k-th basis vector (0-indexed; even k is an alpha, odd k a beta)."""
    return Gf2Vec(1 << k, n)


def pair(u, v):
    """Mod-2 symplectic pairing <u, v> = sum u_a v_b + u_b v_a over handles."""
    if u.n != v.n:
        raise ValueError("dimension mismatch")
    ev = _even_mask(u.n)
    ua, ub = u.bits & ev, (u.bits >> 1) & ev
    va, vb = v.bits & ev, (v.bits >> 1) & ev
    return (((ua & vb) ^ (ub & va)).bit_count()) & 1


# ---------------------------------------------------------------------------
# quadratic forms


class QuadForm:
    """Quadratic refinement of the mod-2 intersection pairing on (Z/2)^(2g).

    Stored by its values on the basis, in the order
    q(alpha_1), q(beta_1), ..., q(alpha_g), q(beta_g).
    """

    __slots__ = ("g", "basis_q")

    def __init__(self, g, basis_q):
        basis_q = tuple(int(b) & 1 for b in basis_q)
        if g <= 0 or len(basis_q) != 2 * g:
            raise ValueError("need one value per basis vector")
        self.g = g
        self.basis_q = basis_q

    def __eq__(self, other):
        return (
            isinstance(other, QuadForm)
            and self.g == other.g
            and self.basis_q == other.basis_q
        )

    def __hash__(self):
        return hash((self.g, self.basis_q))

    def __repr__(self):
        return "QuadForm(g=%d, basis_q=%r)" % (self.g, self.basis_q)


def even_form(g):
    """The reference form with q(alpha_i) = 0, q(beta_i) = 1 (Arf invariant 0).

    Its spin values are 1 on every alpha_i and 0 on every beta_i.
    """
    return QuadForm(g, (0, 1) * g)


def eval_form(q, v):
    """q(v), expanded from the basis values with the polarization identity.

    >>> eval_form(even_form(1), Gf2Vec.from_coeffs([1, 1]))
    0
    """
    if v.n != 2 * q.g:
        raise ValueError("dimension mismatch")
    acc = 0
    bits = v.bits
    k = 0
    while bits:
        if bits & 1:
            acc ^= q.basis_q[k]
        bits >>= 1
        k += 1
    # cross terms: only alpha_i, beta_i pairs have nonzero pairing
    acc ^= (v.bits & (v.bits >> 1) & _even_mask(v.n)).bit_count() & 1
    return acc


def spin_value(q, v):
    """Spin value of a class: eval_form + 1, so the zero class gets 1."""
    return eval_form(q, v) ^ 1


def arf(q):
    """Arf invariant: sum over handles of q(alpha_i) q(beta_i)."""
    acc = 0
    for i in range(q.g):
        acc ^= q.basis_q[2 * i] & q.basis_q[2 * i + 1]
    return acc


def all_forms(g):
    """All 2^(2g) quadratic refinements, by basis values, in a fixed order."""
    n = 2 * g
    for code in range(1 << n):
        yield QuadForm(g, tuple((code >> k) & 1 for k in range(n)))


def admissible(q, v):
    """Nonzero class with spin value 0 (twists along these stay in the group)."""
    return bool(v) and spin_value(q, v) == 0


def smoothing_value(k, ell, phi_a, phi_b):
    """Spin value k*phi_a + ell*phi_b of a curve smoothing k a + ell b.

    >>> smoothing_value(1, 1, 1, 0)
    1
    >>> smoothing_value(2, 0, 1, 1)
    0
    >>> smoothing_value(3, 2, 1, 1)
    1
    """
    return (k * phi_a + ell * phi_b) & 1


def arc_sum_value(phi_a, phi_b):
    """Spin value phi_a + phi_b + 1 of an arc sum of two curves.

    >>> [arc_sum_value(0, 0), arc_sum_value(1, 0), arc_sum_value(1, 1)]
    [1, 0, 1]
    """
    return (phi_a + phi_b + 1) & 1


def coherence_check(q, curves, chi):
    """Whether the spin values of a multicurve sum to the Euler characteristic mod 2."""
    acc = 0
    for v in curves:
        acc ^= spin_value(q, v)
    return acc == (chi & 1)


def same_orbit(q1, q2):
    """Forms of equal genus lie in one symplectic orbit iff Arf agrees."""
    if q1.g != q2.g:
        raise ValueError("genus mismatch")
    return arf(q1) == arf(q2)


# ---------------------------------------------------------------------------
# mod-2 symplectic maps


class Gf2SympMap:
    """Linear map on (Z/2)^(2g), stored as the images of the basis vectors.

    img[k] is the packed image of basis vector k.  Symplecticity is not
    enforced by the constructor; use is_symplectic where it is a contract.
    """

    __slots__ = ("img", "n")

    def __init__(self, img, n):
        img = tuple(img)
        if len(img) != n:
            raise ValueError("need one image per basis vector")
        mask = (1 << n) - 1
        self.img = tuple(x & mask for x in img)
        self.n = n

    def __call__(self, v):
        if v.n != self.n:
            raise ValueError("dimension mismatch")
        bits, out, k = v.bits, 0, 0
        while bits:
            if bits & 1:
                out ^= self.img[k]
            bits >>= 1
            k += 1
        return Gf2Vec(out, self.n)

    def __eq__(self, other):
        return isinstance(other, Gf2SympMap) and self.n == other.n and self.img == other.img

    def __hash__(self):
        return hash((self.n, self.img))

    def key(self):
        """Canonical byte encoding, used for closure bookkeeping."""
        width = (self.n + 7) // 8
        return b"".join(x.to_bytes(width, "little") for x in self.img)

    def __repr__(self):
        return "Gf2SympMap(n=%d, img=%r)" % (self.n, self.img)


def identity_map(n):
    return Gf2SympMap(tuple(1 << k for k in range(n)), n)


def compose(m, k):
    """m after k."""
    if m.n != k.n:
        raise ValueError("dimension mismatch")
    mi = m.img
    out = []
    for x in k.img:
        acc, idx = 0, 0
        while x:
            if x & 1:
                acc ^= mi[idx]
            x >>= 1
            idx += 1
        out.append(acc)
    return Gf2SympMap(tuple(out), m.n)


def inverse(m):
    """Inverse by Gauss-Jordan over GF(2); raises on singular input.

    Treating img as the rows of a matrix R, any row-op accumulator A with
    A R = I packs, row by row, the images of the basis under the inverse
    map, so it can be returned directly.
    """
    n = m.n
    rows = list(m.img)
    inv = [1 << k for k in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if (rows[r] >> c) & 1), None)
        if p is None:
            raise ValueError("map is singular")
        rows[c], rows[p] = rows[p], rows[c]
        inv[c], inv[p] = inv[p], inv[c]
        for r in range(n):
            if r != c and (rows[r] >> c) & 1:
                rows[r] ^= rows[c]
                inv[r] ^= inv[c]
    return Gf2SympMap(tuple(inv), n)


def is_symplectic(m):
    """Whether the map preserves the mod-2 symplectic pairing (and is invertible)."""
    n = m.n
    vecs = [Gf2Vec(x, n) for x in m.img]
    for i in range(n):
        for j in range(i + 1, n):
            if pair(vecs[i], vecs[j]) != pair(basis_vec(i, n), basis_vec(j, n)):
                return False
    try:
        inverse(m)
    except ValueError:
        return False
    return True


def transvection_gf2(c):
    """The transvection v -> v + <v, c> c along a nonzero class c."""
    if not c:
        raise ValueError("transvection along the zero class is not defined")
    n = c.n
    img = []
    for k in range(n):
        e = basis_vec(k, n)
        x = e.bits
        if pair(e, c):
            x ^= c.bits
        img.append(x)
    return Gf2SympMap(tuple(img), n)


def act_form(m, q):
    """Push a form through a symplectic map: (m . q)(c) = q(m^(-1) c)."""
    if m.n != 2 * q.g:
        raise ValueError("dimension mismatch")
    minv = inverse(m)
    return QuadForm(q.g, tuple(eval_form(q, minv(basis_vec(k, m.n))) for k in range(m.n)))


def change_of_coords(q, src, dst):
    """The symplectic map sending the basis src to the basis dst.

    Both inputs must be symplectic bases in the interleaved order, and the
    spin values (under q) of corresponding vectors must agree; otherwise a
    ValueError is raised.  The result preserves q.
    """
    n = 2 * q.g
    if len(src) != n or len(dst) != n:
        raise ValueError("need 2g basis vectors on each side")
    for name, basis in (("src", src), ("dst", dst)):
        b = Gf2SympMap(tuple(v.bits for v in basis), n)
        if not is_symplectic(b):
            raise ValueError("%s is not a symplectic basis" % name)
    for u, v in zip(src, dst):
        if spin_value(q, u) != spin_value(q, v):
            raise ValueError("spin values of the two bases do not match")
    b_src = Gf2SympMap(tuple(v.bits for v in src), n)
    b_dst = Gf2SympMap(tuple(v.bits for v in dst), n)
    m = compose(b_dst, inverse(b_src))
    assert act_form(m, q) == q
    return m


class ClosureCapExceeded(RuntimeError):
    """Raised when a closure grows past the caller's cap."""


def group_closure_elements(gens, cap=None):
    """All products of the given maps, by breadth-first search from the identity.

    Deterministic: FIFO frontier, generators applied in the order given,
    elements keyed by their canonical byte encoding.  Returns the list of
    group elements in discovery order.  Raises ClosureCapExceeded if more
    than cap elements appear.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator to fix the dimension")
    n = gens[0].n
    for m in gens:
        if m.n != n:
            raise ValueError("dimension mismatch among generators")
    start = identity_map(n)
    seen = {start.key()}
    order = [start]
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for m in gens:
            nxt = compose(m, cur)
            k = nxt.key()
            if k not in seen:
                if cap is not None and len(seen) >= cap:
                    raise ClosureCapExceeded("closure exceeds cap %d" % cap)
                seen.add(k)
                order.append(nxt)
                queue.append(nxt)
    return order


def group_closure(gens, cap=None):
    """Size of the subgroup of Sp(2g,2) generated by the given maps.

    The trivial group (no generators) has size 1.
    """
    gens = list(gens)
    if not gens:
        return 1
    return len(group_closure_elements(gens, cap))
