"""Exact integer matrices for twist words on a genus-g surface.

Everything here acts on the first homology of the surface with its standard
symplectic basis, ordered a1, b1, a2, b2, ..., ag, bg.  Matrices act on
column vectors and their columns are the images of the basis vectors.  A
twist along a class c sends v to v - <v, c> c, with <a_i, b_i> = +1; the
resulting sign conventions are pinned by oracle tests, not negotiable here.

The word convention matches the group-theoretic one used throughout the
package: in a word, the leftmost letter acts last, so the matrix of a word
is the product of the letter matrices in reading order.
"""

from functools import lru_cache

from . import gf2
from .fpgroups import parse_word

# ---------------------------------------------------------------------------
# matrices


def _as_rows(rows):
    out = tuple(tuple(int(x) for x in r) for r in rows)
    n = len(out)
    if n == 0 or n % 2 or any(len(r) != n for r in out):
        raise ValueError("need a square matrix of even dimension")
    return out


def _mat_mul(a, b):
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def _identity_rows(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def standard_pairing_rows(g):
    """The block-diagonal Gram matrix of the pairing, blocks [[0,1],[-1,0]]."""
    n = 2 * g
    rows = [[0] * n for _ in range(n)]
    for k in range(g):
        rows[2 * k][2 * k + 1] = 1
        rows[2 * k + 1][2 * k] = -1
    return tuple(tuple(r) for r in rows)


def pairing(u, v):
    """Symplectic pairing of two integer vectors in the standard basis."""
    if len(u) != len(v) or len(u) % 2:
        raise ValueError("vectors must share an even length")
    acc = 0
    for k in range(0, len(u), 2):
        acc += u[k] * v[k + 1] - u[k + 1] * v[k]
    return acc


class SpMatrix:
    """Immutable integer symplectic matrix.

    The constructor verifies M^T J M = J; internal arithmetic skips the
    re-check since products and inverses of symplectic matrices stay
    symplectic.
    """

    __slots__ = ("rows", "g")

    def __init__(self, rows, check=True):
        self.rows = _as_rows(rows)
        self.g = len(self.rows) // 2
        if check and not self._symplectic():
            raise ValueError("matrix does not preserve the pairing")

    def _symplectic(self):
        j = standard_pairing_rows(self.g)
        mt = tuple(zip(*self.rows))
        return _mat_mul(_mat_mul(mt, j), self.rows) == j

    @property
    def n(self):
        return 2 * self.g

    def __matmul__(self, other):
        if self.g != other.g:
            raise ValueError("genus mismatch")
        return SpMatrix(_mat_mul(self.rows, other.rows), check=False)

    def __call__(self, v):
        v = tuple(v)
        if len(v) != self.n:
            raise ValueError("dimension mismatch")
        return tuple(sum(r[k] * v[k] for k in range(self.n)) for r in self.rows)

    def inv(self):
        # for symplectic M, the inverse is -J M^T J
        j = standard_pairing_rows(self.g)
        mj = tuple(tuple(-x for x in r) for r in j)
        out = _mat_mul(_mat_mul(mj, tuple(zip(*self.rows))), j)
        got = SpMatrix(out, check=False)
        if _mat_mul(out, self.rows) != _identity_rows(self.n):
            raise ValueError("inverse sanity check failed")
        return got

    def __pow__(self, k):
        base = self if k >= 0 else self.inv()
        k = abs(k)
        acc = identity_sp(self.g)
        while k:
            if k & 1:
                acc = acc @ base
            base = base @ base
            k >>= 1
        return acc

    def is_identity(self):
        return self.rows == _identity_rows(self.n)

    def mod2(self):
        """Reduce to a map on (Z/2)^(2g); columns become packed images."""
        img = []
        for k in range(self.n):
            bits = 0
            for i in range(self.n):
                if self.rows[i][k] & 1:
                    bits |= 1 << i
            img.append(bits)
        return gf2.Gf2SympMap(tuple(img), self.n)

    def __eq__(self, other):
        return isinstance(other, SpMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "SpMatrix(%r)" % (self.rows,)


@lru_cache(maxsize=None)
def identity_sp(g):
    return SpMatrix(_identity_rows(2 * g), check=False)


def minus_identity_sp(g):
    return SpMatrix(tuple(tuple(-x for x in r) for r in _identity_rows(2 * g)),
                    check=False)


def transvection_int(c):
    """Twist matrix v -> v - <v, c> c; the zero class gives the identity."""
    n = len(c)
    rows = []
    for i in range(n):
        row = []
        for k in range(n):
            e = tuple(1 if m == k else 0 for m in range(n))
            row.append((1 if i == k else 0) - pairing(e, c) * c[i])
        rows.append(tuple(row))
    return SpMatrix(tuple(rows), check=False)


def transvection_class(m):
    """Recover the class of a twist matrix, normalized to a positive leading
    coefficient; returns None when the matrix is not a twist.

    The identity is reported as the zero class.
    """
    n = m.n
    if m.is_identity():
        return tuple(0 for _ in range(n))
    cols = tuple(zip(*m.rows))
    ident = _identity_rows(n)
    diff = None
    for k in range(n):
        d = tuple(c - e for c, e in zip(cols[k], ident[k]))
        if any(d):
            diff = d
            break
    if diff is None:
        return None
    g = 0
    for x in diff:
        g = gcd(g, abs(x))
    cand = tuple(x // g for x in diff)
    lead = next(x for x in cand if x)
    if lead < 0:
        cand = tuple(-x for x in cand)
    if transvection_int(cand) == m:
        return cand
    return None


def gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# curve classes


def _basis_vec(idx, g):
    return tuple(1 if k == idx else 0 for k in range(2 * g))


def alpha_class(k, g):
    if not 1 <= k <= g:
        raise ValueError("handle index out of range: %d" % k)
    return _basis_vec(2 * k - 2, g)


def beta_class(k, g):
    if not 1 <= k <= g:
        raise ValueError("handle index out of range: %d" % k)
    return _basis_vec(2 * k - 1, g)


def chain_set_class(indices, g):
    """Class of the boundary curve attached to a set of signed handle
    indices: the signed sum of the corresponding a-classes."""
    out = [0] * (2 * g)
    seen = set()
    for i in indices:
        if i == 0 or abs(i) > g:
            raise ValueError("bad handle index %d" % i)
        if i in seen:
            raise ValueError("repeated index %d" % i)
        seen.add(i)
        out[2 * abs(i) - 2] += 1 if i > 0 else -1
    return tuple(out)


def consecutive_indices(i, j):
    """The signed index range i..j with 0 dropped."""
    if i >= j:
        raise ValueError("need i < j")
    return tuple(k for k in range(i, j + 1) if k != 0)


def _parse_bracket(name, prefix):
    body = name[len(prefix) + 1:-1]
    return tuple(int(x) for x in body.split(","))


def curve_class(name, g):
    """Homology class of a named standard curve.

    Accepted names: a1..ag (also alpha1..), b1..bg (also beta1..),
    e1..e(g-1) (also eps1..) for the chain curves between consecutive
    b-handles, delta[i1,...,ik] for boundary curves of disk-with-bands
    neighborhoods, and gamma[i,j] for the consecutive range i..j.
    """
    for pre in ("alpha", "a"):
        if name.startswith(pre) and name[len(pre):].isdigit():
            return alpha_class(int(name[len(pre):]), g)
    for pre in ("beta", "b"):
        if name.startswith(pre) and name[len(pre):].isdigit():
            return beta_class(int(name[len(pre):]), g)
    for pre in ("epsilon", "eps", "e"):
        if name.startswith(pre) and name[len(pre):].isdigit():
            k = int(name[len(pre):])
            if not 1 <= k <= g - 1:
                raise ValueError("chain index out of range: %d" % k)
            return tuple(
                x - y for x, y in zip(beta_class(k, g), beta_class(k + 1, g)))
    if name.startswith("delta[") and name.endswith("]"):
        idx = _parse_bracket(name, "delta")
        if tuple(sorted(idx)) != idx:
            raise ValueError("indices must be increasing: %s" % name)
        return chain_set_class(idx, g)
    if name.startswith("gamma[") and name.endswith("]"):
        i, j = _parse_bracket(name, "gamma")
        return chain_set_class(consecutive_indices(i, j), g)
    raise ValueError("unknown curve name: %r" % name)


def eval_word(word, g):
    """Matrix of a word whose letters are twists along named curves.

    The leftmost letter acts last.  Accepts a string or a parsed word.
    """
    if isinstance(word, str):
        word = parse_word(word)
    acc = identity_sp(g)
    for name, exp in word:
        t = transvection_int(curve_class(name, g))
        acc = acc @ (t if exp == 1 else t ** exp)
    return acc


def eval_class_word(pairs, g):
    """Matrix of a sequence of (class, exponent) twists; leftmost acts last."""
    acc = identity_sp(g)
    for cls, exp in pairs:
        acc = acc @ (transvection_int(tuple(cls)) ** exp)
    return acc


# ---------------------------------------------------------------------------
# generator tables


class GeneratorTable:
    """Named matrices for the letters of a presentation alphabet.

    Each entry carries an exact integer matrix and an independently composed
    mod-2 map (built from mod-2 twists, not by reducing the integer matrix),
    so identity checks in the two representations are genuinely separate
    routes.  Opaque names have no matrix; words that use them cannot be
    evaluated and are reported as skipped by relator checks.
    """

    def __init__(self, g, opaque=()):
        self.g = g
        self.opaque = frozenset(opaque)
        self._mat = {}
        self._mat_inv = {}
        self._gf2 = {}
        self._classes = {}

    # -- construction --------------------------------------------------

    def add_twist_entry(self, name, recipe):
        """Register a letter given as a sequence of (class, exponent) twists."""
        if name in self._mat or name in self.opaque:
            raise ValueError("duplicate letter %r" % name)
        acc = identity_sp(self.g)
        m2 = gf2.identity_map(2 * self.g)
        for cls, exp in recipe:
            cls = tuple(cls)
            acc = acc @ (transvection_int(cls) ** exp)
            bits = 0
            for k, x in enumerate(cls):
                if x & 1:
                    bits |= 1 << k
            if bits and exp % 2:
                m2 = gf2.compose(m2, gf2.transvection_gf2(gf2.Gf2Vec(bits, 2 * self.g)))
        self._mat[name] = acc
        self._gf2[name] = m2

    def define(self, name, word):
        """Register a letter by a word over already-registered letters."""
        if name in self._mat or name in self.opaque:
            raise ValueError("duplicate letter %r" % name)
        if isinstance(word, str):
            word = parse_word(word)
        self._mat[name] = self.eval_int(word)
        self._gf2[name] = self.eval_gf2(word)

    # -- lookup ----------------------------------------------------------

    def names(self):
        return tuple(self._mat)

    def has(self, name):
        return name in self._mat

    def matrix(self, name, exp=1):
        m = self._mat[name]
        if exp == 1:
            return m
        if exp == -1:
            inv = self._mat_inv.get(name)
            if inv is None:
                inv = self._mat_inv[name] = m.inv()
            return inv
        return m ** exp

    def gf2_map(self, name):
        return self._gf2[name]

    def twist_class(self, name):
        """Class of a letter that is a single twist; None otherwise."""
        if name not in self._classes:
            self._classes[name] = transvection_class(self._mat[name])
        return self._classes[name]

    # -- evaluation --------------------------------------------------------

    def uses_opaque(self, word):
        if isinstance(word, str):
            word = parse_word(word)
        return any(name in self.opaque for name, _ in word)

    def eval_int(self, word):
        if isinstance(word, str):
            word = parse_word(word)
        acc = identity_sp(self.g)
        for name, exp in word:
            acc = acc @ self.matrix(name, exp)
        return acc

    def eval_gf2(self, word):
        if isinstance(word, str):
            word = parse_word(word)
        acc = gf2.identity_map(2 * self.g)
        for name, exp in word:
            if exp % 2:
                acc = gf2.compose(acc, self._gf2[name])
        return acc

    def relator_status(self, word):
        """'identity', 'nonidentity', or 'opaque' for a relator word."""
        if isinstance(word, str):
            word = parse_word(word)
        if self.uses_opaque(word):
            return "opaque"
        ok = self.eval_int(word).is_identity()
        ok2 = self.eval_gf2(word) == gf2.identity_map(2 * self.g)
        return "identity" if ok and ok2 else "nonidentity"

    def preserves_form(self, q=None):
        """Whether every registered letter fixes the reference form mod 2."""
        if q is None:
            q = gf2.even_form(self.g)
        for name in self._mat:
            if gf2.act_form(self._gf2[name], q) != q:
                return False
        return True


def _twist_square_recipes(g):
    """Recipes for the squared-twist alphabet: a1..ag are twist squares,
    s and t1..t(g-1) are the standard four-letter products, d[i,j] are the
    reduced two-handle boundary letters, r[i,j] the reduced band letters."""
    recipes = {}
    for k in range(1, g + 1):
        recipes["a%d" % k] = ((alpha_class(k, g), 2),)
    recipes["s"] = (
        (beta_class(1, g), 1),
        (alpha_class(1, g), 2),
        (beta_class(1, g), 1),
    )
    for k in range(1, g):
        eps = tuple(
            x - y for x, y in zip(beta_class(k, g), beta_class(k + 1, g)))
        recipes["t%d" % k] = (
            (eps, 1),
            (alpha_class(k, g), 1),
            (alpha_class(k + 1, g), 1),
            (eps, 1),
        )
    signed = [i for i in range(-g, g + 1) if i]
    for i in signed:
        for j in signed:
            if i < j:
                recipes["d[%d,%d]" % (i, j)] = (
                    (chain_set_class((i, j) if i != -j else (), g), 1),
                    (alpha_class(abs(i), g), -1),
                    (alpha_class(abs(j), g), -1),
                )
    for i, j in band_letter_range(g):
        gamma = chain_set_class(consecutive_indices(i, j), g)
        prefix = []
        if i == 1:
            for k in range(1, j):
                prefix.append((alpha_class(k, g), -1))
        else:
            for k in range(1, -i + 1):
                prefix.append((alpha_class(k, g), -2))
            for k in range(-i + 1, j):
                prefix.append((alpha_class(k, g), -1))
        recipes["r[%d,%d]" % (i, j)] = tuple(prefix) + (
            (beta_class(j, g), 1),
            (alpha_class(j, g), 1),
            (gamma, 1),
            (beta_class(j, g), 1),
        )
    return recipes


def band_letter_range(g):
    """Valid (i, j) pairs for the band letters r[i,j] at genus g."""
    out = [(1, j) for j in range(2, g + 1)]
    for i in range(-g, 0):
        for j in range(-i + 1, g + i + 1):
            out.append((i, j))
    return tuple(sorted(out))


def twist_square_table(g, opaque=()):
    """Fresh table for the squared-twist alphabet at genus g."""
    if g < 1:
        raise ValueError("genus must be positive")
    table = GeneratorTable(g, opaque=opaque)
    for name, recipe in sorted(_twist_square_recipes(g).items()):
        table.add_twist_entry(name, recipe)
    return table


def derived_dehn_entries(g):
    """Matrices and classes of the single-twist alphabet b, xi, eta.

    b1 is the twist along the first b-class; the rest are conjugates of it
    by squared-twist letters.  Every entry must come out as a single twist;
    the recovered classes are returned alongside the matrices.
    """
    if g < 2:
        raise ValueError("the derived alphabet needs genus at least 2")
    base = twist_square_table(g)
    out = {}

    def put(name, mat):
        cls = transvection_class(mat)
        if cls is None:
            raise ValueError("letter %r is not a single twist" % name)
        out[name] = (mat, cls)

    put("b1", transvection_int(beta_class(1, g)))
    for k in range(1, g):
        t = base.matrix("t%d" % k)
        d = base.matrix("d[%d,%d]" % (k, k + 1))
        bk = out["b%d" % k][0]
        conj = t @ d.inv()
        put("b%d" % (k + 1), conj @ bk @ conj.inv())
        put("xi%d" % k, d.inv() @ bk @ d)
        put("eta%d" % (k + 1), t.inv() @ bk @ t)
    return out


def dehn_table(g):
    """Fresh table for the single-twist alphabet at genus g.

    At genus 3 the two extra letters z1, z2 of the closed-surface
    presentation are included; they are pinned by the two equations that
    express d[1,2] and the first squared twist through the alphabet, so
    their matrices are solved from those equations.
    """
    table = GeneratorTable(g)
    entries = derived_dehn_entries(g)
    for name in sorted(entries):
        mat, cls = entries[name]
        table.add_twist_entry(name, ((cls, 1),))
        if table.matrix(name) != mat:
            raise ValueError("twist class mismatch for %r" % name)
    if g == 3:
        for name, mat in _solved_z_matrices(table).items():
            cls = transvection_class(mat)
            if cls is None:
                raise ValueError("letter %r is not a single twist" % name)
            table.add_twist_entry(name, ((cls, 1),))
            if table.matrix(name) != mat:
                raise ValueError("twist class mismatch for %r" % name)
    return table


def _solved_z_matrices(table):
    """Solve the genus-3 letters z1, z2 from their defining equations."""
    g = table.g
    base = twist_square_table(g)
    a1 = base.matrix("a1")
    d12 = base.matrix("d[1,2]")

    def conj(word_x, y):
        m = table.eval_int(word_x)
        return m @ y @ m.inv()

    m2 = conj("eta2 eta3", table.matrix("b2"))
    m3 = conj("b1 eta2 eta3 b2", table.matrix("xi1"))
    m4 = conj("xi1 b2 eta3 eta2", table.matrix("b1"))
    b3 = table.matrix("b3")
    eta3 = table.matrix("eta3")
    z1 = m3.inv() @ d12.inv() @ b3 @ m2
    z2 = m4.inv() @ a1 @ d12 @ eta3 @ b3
    return {"z1": z1, "z2": z2}


# ---------------------------------------------------------------------------
# convention oracles


def convention_oracles():
    """The three matrix-level checks that pin the sign conventions.

    Returns (label, passed) pairs: a braid move for once-intersecting
    twists, commutation for disjoint twists, and the genus-1 identity
    forcing the central letter's square to be a fourth power of a twist.
    """
    a = transvection_int(alpha_class(1, 1))
    b = transvection_int(beta_class(1, 1))
    braid = (a @ b @ a) == (b @ a @ b)
    ta = transvection_int(alpha_class(1, 2))
    tb = transvection_int(beta_class(2, 2))
    disjoint = (ta @ tb) == (tb @ ta)
    s = eval_word("b1 a1 a1 b1", 1)
    central = (s @ s) == transvection_int(alpha_class(1, 1)) ** -4
    return (
        ("braid-once-intersecting", braid),
        ("commute-disjoint", disjoint),
        ("central-square-is-fourth-power", central),
    )


# ---------------------------------------------------------------------------
# the genus-3 chain and its face words


CHAIN_CURVES_G3 = (
    "a1", "b1", "gamma[1,2]", "b2", "gamma[2,3]", "b3", "a3")


def chain_pairing_profile(g=3):
    """Pairings of consecutive and distant chain curves; the chain shape
    means +-1 on neighbors and 0 otherwise."""
    classes = [curve_class(name, g) for name in CHAIN_CURVES_G3]
    profile = {}
    for x in range(len(classes)):
        for y in range(x + 1, len(classes)):
            profile[(x, y)] = pairing(classes[x], classes[y])
    return profile


def hyperelliptic_involution_word():
    """The 14-letter up-and-down word along the 7-curve chain."""
    up = [(name, 1) for name in CHAIN_CURVES_G3]
    down = [(name, 1) for name in reversed(CHAIN_CURVES_G3)]
    return tuple(up + down)


def hyperelliptic_relator():
    """The 28-letter square of the up-and-down word."""
    return hyperelliptic_involution_word() * 2


def hyperelliptic_face_words():
    """The 28 conjugated letters h_k = (l_1 ... l_(k-1)) l_k (...)^-1.

    Their descending product h_k ... h_1 telescopes back to the prefix
    l_1 ... l_k by free cancellation.
    """
    rel = hyperelliptic_relator()
    words = []
    for k in range(len(rel)):
        prefix = rel[:k]
        inv_prefix = tuple((n, -e) for n, e in reversed(prefix))
        words.append(prefix + (rel[k],) + inv_prefix)
    return words
