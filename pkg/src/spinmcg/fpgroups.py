"""Engine for finitely presented groups.

Words over named generators, presentations, abelianization through Smith
normal form, certificate-checked Tietze moves, Reidemeister-Schreier
rewriting for finite-index subgroups, and the subset coset action used to
pass from a full twist group to the spin-preserving subgroup.

A word is a tuple of (name, sign) letters with sign +1 or -1; a power such
as x^3 is stored as three letters.  Words are plain data: all functions
here are pure.
"""

import itertools
import re
from collections import Counter, deque
from typing import NamedTuple

# ---------------------------------------------------------------------------
# words


def letters(name, exp=1):
    """Word consisting of name^exp.

    >>> letters("a", -2)
    (('a', -1), ('a', -1))
    """
    if exp >= 0:
        return ((name, 1),) * exp
    return ((name, -1),) * (-exp)


def concat(*words):
    """Concatenation without free reduction."""
    return tuple(itertools.chain.from_iterable(words))


def free_reduce(w):
    """Remove adjacent cancelling pairs until none remain.

    >>> free_reduce((("a", 1), ("a", -1)))
    ()
    >>> free_reduce((("a", 1), ("b", 1), ("b", -1), ("a", 1)))
    (('a', 1), ('a', 1))
    """
    out = []
    for name, s in w:
        if out and out[-1][0] == name and out[-1][1] == -s:
            out.pop()
        else:
            out.append((name, s))
    return tuple(out)


def inv(w):
    """Inverse word (reverse order, flipped signs)."""
    return tuple((name, -s) for name, s in reversed(w))


def wpow(w, k):
    """k-th power of a word (inverse word repeated for negative k)."""
    if k >= 0:
        return w * k
    return inv(w) * (-k)


def star(x, y):
    """Conjugate x y x^-1 (x acting on y)."""
    return concat(x, y, inv(x))


def commutator(x, y):
    """x y x^-1 y^-1."""
    return concat(x, y, inv(x), inv(y))


def exponent_sums(w):
    """Counter of net exponents per generator name."""
    sums = Counter()
    for name, s in w:
        sums[name] += s
    return sums


# Parsing/printing of words.  A token is NAME or NAME^INT where NAME is an
# identifier optionally carrying a bracketed integer index list, as in
# d[1,2] or D[-2,-1,1,2].
_NAME_RE = r"[A-Za-z][A-Za-z0-9_@]*(?:\[-?\d+(?:,\s*-?\d+)*\])?"
_TOKEN_RE = re.compile(r"(%s)(?:\^(-?\d+))?$" % _NAME_RE)
# strict form accepted by the file format (no '@')
_FILE_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*(?:\[-?\d+(?:,-?\d+)*\])?$")


def parse_word(text):
    """Parse a whitespace-separated word such as "a1^2 b1 d[1,2]^-1".

    >>> parse_word("a^2 b^-1")
    (('a', 1), ('a', 1), ('b', -1))
    """
    out = []
    for token in text.split():
        m = _TOKEN_RE.match(token)
        if not m:
            raise ValueError("bad word token %r" % token)
        name, exp = m.group(1), m.group(2)
        out.extend(letters(name.replace(" ", ""), 1 if exp is None else int(exp)))
    return tuple(out)


def format_word(w):
    """Render a word with run-length powers; inverse of parse_word."""
    parts = []
    i = 0
    n = len(w)
    while i < n:
        name, s = w[i]
        j = i
        while j < n and w[j] == (name, s):
            j += 1
        exp = s * (j - i)
        parts.append(name if exp == 1 else "%s^%d" % (name, exp))
        i = j
    return " ".join(parts)


# ---------------------------------------------------------------------------
# presentations


class Relator(NamedTuple):
    label: str
    word: tuple


class Presentation:
    """Ordered generators, labelled relator words, optional opaque names.

    Opaque generators stand for elements whose expansion in the remaining
    generators is known to exist but is not written down; they are skipped
    by matrix-representation checks and excluded (after a net-exponent-zero
    check) from abelianization columns.
    """

    __slots__ = ("generators", "relators", "opaque")

    def __init__(self, generators, relators, opaque=()):
        gens = tuple(generators)
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator names")
        known = set(gens)
        rels = []
        for r in relators:
            if not isinstance(r, Relator):
                r = Relator(*r)
            for name, s in r.word:
                if name not in known:
                    raise ValueError(
                        "relator %s uses undeclared generator %r" % (r.label, name))
                if s not in (1, -1):
                    raise ValueError("letter sign must be +1 or -1")
            rels.append(r)
        opq = frozenset(opaque)
        if not opq <= known:
            raise ValueError("opaque names must be declared generators")
        self.generators = gens
        self.relators = tuple(rels)
        self.opaque = opq

    def relator(self, label):
        for r in self.relators:
            if r.label == label:
                return r
        raise KeyError(label)

    def __repr__(self):
        return "Presentation(%d generators, %d relators)" % (
            len(self.generators), len(self.relators))

    def __eq__(self, other):
        return (isinstance(other, Presentation)
                and self.generators == other.generators
                and self.relators == other.relators
                and self.opaque == other.opaque)


# ---------------------------------------------------------------------------
# abelianization


def abelianization_matrix(p):
    """Exponent-sum matrix: one row per relator, one column per generator.

    Opaque generators are excluded from the columns; every relator must
    have net exponent zero in each opaque name, otherwise dropping the
    column would change the quotient and we refuse.
    Returns (rows, column_names).
    """
    columns = tuple(g for g in p.generators if g not in p.opaque)
    col_index = {g: k for k, g in enumerate(columns)}
    rows = []
    for r in p.relators:
        sums = exponent_sums(r.word)
        for name in p.opaque:
            if sums.get(name, 0) != 0:
                raise ValueError(
                    "relator %s has net exponent %d in opaque generator %s"
                    % (r.label, sums[name], name))
        row = [0] * len(columns)
        for name, e in sums.items():
            if name in col_index:
                row[col_index[name]] = e
        rows.append(row)
    return rows, columns


class SNFResult(NamedTuple):
    """Diagonal shape of an integer matrix and the derived group invariants.

    invariant_factors: the diagonal entries > 1, each dividing the next.
    free_rank: number of columns minus the rank.
    diagonal: the full nonnegative diagonal (including 1s and 0s).
    """
    invariant_factors: tuple
    free_rank: int
    diagonal: tuple

    def describe(self):
        return format_abelian(self)


def _matmul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if inner else 0
    out = []
    for row in a:
        acc = [0] * cols
        for k, x in enumerate(row):
            if x:
                brow = b[k]
                for j in range(cols):
                    acc[j] += x * brow[j]
        out.append(acc)
    return out


def smith_with_transforms(rows, ncols=None):
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns (d, u, v) with u*rows*v = d, u and v products of elementary
    matrices, and d diagonal with nonnegative entries forming a
    divisibility chain.  Deterministic: pivots are chosen by smallest
    absolute value with ties broken by (row, column) position.
    """
    nr = len(rows)
    if ncols is None:
        if nr == 0:
            raise ValueError("ncols is required for a matrix with no rows")
        ncols = len(rows[0])
    m = [list(r) for r in rows]
    for r in m:
        if len(r) != ncols:
            raise ValueError("ragged matrix")
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def row_swap(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_addmul(i, j, q):
        mi, mj = m[i], m[j]
        for k in range(ncols):
            mi[k] += q * mj[k]
        ui, uj = u[i], u[j]
        for k in range(nr):
            ui[k] += q * uj[k]

    def col_addmul(i, j, q):
        for row in m:
            row[i] += q * row[j]
        for row in v:
            row[i] += q * row[j]

    def row_negate(i):
        m[i] = [-x for x in m[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(nr, ncols)
    while t < limit:
        # choose pivot: smallest |entry| in the trailing submatrix
        piv = None
        best = None
        for i in range(t, nr):
            mi = m[i]
            for j in range(t, ncols):
                val = mi[j]
                if val:
                    a = -val if val < 0 else val
                    if best is None or a < best:
                        best = a
                        piv = (i, j)
        if piv is None:
            break
        if piv[0] != t:
            row_swap(piv[0], t)
        if piv[1] != t:
            col_swap(piv[1], t)
        if m[t][t] < 0:
            row_negate(t)
        p = m[t][t]
        # clear column t and row t; leftover remainders are strictly
        # smaller than the pivot, so re-entering the pivot search makes
        # progress and the loop terminates
        dirty = False
        for i in range(nr):
            if i != t and m[i][t]:
                q = m[i][t] // p
                if q:
                    row_addmul(i, t, -q)
                if m[i][t]:
                    dirty = True
        for j in range(ncols):
            if j != t and m[t][j]:
                q = m[t][j] // p
                if q:
                    col_addmul(j, t, -q)
                if m[t][j]:
                    dirty = True
        if dirty:
            continue
        # divisibility: the pivot must divide every remaining entry
        fix = None
        for i in range(t + 1, nr):
            mi = m[i]
            for j in range(t + 1, ncols):
                if mi[j] % p:
                    fix = i
                    break
            if fix is not None:
                break
        if fix is not None:
            row_addmul(t, fix, 1)
            continue
        t += 1

    d = [row[:] for row in m]
    check = _matmul(u, [list(r) for r in rows])
    check = _matmul(check, v) if check else []
    if check != d:
        raise AssertionError("unimodular reconstruction failed")
    return d, u, v


def smith_normal_form(rows, ncols=None):
    """SNFResult of an integer matrix (rows may be empty if ncols is given)."""
    nr = len(rows)
    if ncols is None:
        if nr == 0:
            raise ValueError("ncols is required for a matrix with no rows")
        ncols = len(rows[0])
    if nr == 0:
        return SNFResult((), ncols, ())
    d, _, _ = smith_with_transforms(rows, ncols)
    diag = tuple(d[k][k] for k in range(min(nr, ncols)))
    rank = sum(1 for x in diag if x)
    factors = tuple(x for x in diag if x > 1)
    return SNFResult(factors, ncols - rank, diag)


def abelianize(p):
    """Invariant factors and free rank of the presented group's abelianization."""
    rows, columns = abelianization_matrix(p)
    return smith_normal_form(rows, len(columns))


def format_abelian(snf):
    """Render as Z+Z/d1+... ("1" for the trivial group)."""
    parts = ["Z"] * snf.free_rank + ["Z/%d" % d for d in snf.invariant_factors]
    return "+".join(parts) if parts else "1"


def parse_abelian(text):
    """Parse the format_abelian notation into (free_rank, factors).

    >>> parse_abelian("Z+Z/4")
    (1, (4,))
    """
    text = text.strip()
    if text == "1":
        return 0, ()
    free = 0
    factors = []
    for part in text.split("+"):
        part = part.strip()
        if part == "Z":
            free += 1
        elif part.startswith("Z/"):
            n = int(part[2:])
            if n < 2:
                raise ValueError("torsion factor must be at least 2")
            factors.append(n)
        else:
            raise ValueError("bad group summand %r" % part)
    return free, tuple(sorted(factors))


def matches_expectation(snf, text):
    """Whether an SNFResult equals a parse_abelian expectation string."""
    free, factors = parse_abelian(text)
    return snf.free_rank == free and tuple(sorted(snf.invariant_factors)) == factors


# ---------------------------------------------------------------------------
# Tietze moves


def _verify_certificate(p, target, certificate):
    """Check that a product of conjugated relators freely equals target.

    certificate items are (label, sign, conjugator_word): the product
    conj * relator^sign * conj^-1 taken left to right.
    """
    prod = []
    for label, sign, conj in certificate:
        r = p.relator(label)
        w = r.word if sign >= 0 else inv(r.word)
        prod.append(star(tuple(conj), w))
    if free_reduce(concat(*prod)) != free_reduce(target):
        raise ValueError("certificate does not prove the asserted relator")


def tietze_moves(p, move):
    """Apply one Tietze move, returning a new equivalent Presentation.

    Moves (tuples):
      ("add_relator", label, word, certificate) - certificate is a list of
          (relator_label, sign, conjugator) items whose conjugated product
          freely reduces to the new word;
      ("remove_relator", label, certificate) - certificate proves the
          removed word from the remaining relators;
      ("add_generator", name, definition_word) - adds name and the relator
          name * definition^-1;
      ("remove_generator", name) - name must occur exactly once in some
          relator; that relator defines it and is substituted away.
    """
    kind = move[0]
    if kind == "add_relator":
        _, label, word, certificate = move
        word = tuple(word)
        _verify_certificate(p, word, certificate)
        return Presentation(p.generators,
                            p.relators + (Relator(label, word),), p.opaque)
    if kind == "remove_relator":
        _, label, certificate = move
        removed = p.relator(label)
        rest = tuple(r for r in p.relators if r.label != label)
        q = Presentation(p.generators, rest, p.opaque)
        _verify_certificate(q, removed.word, certificate)
        return q
    if kind == "add_generator":
        _, name, definition = move
        if name in p.generators:
            raise ValueError("generator %r already declared" % name)
        definition = tuple(definition)
        rel = Relator("def_%s" % name, concat(letters(name), inv(definition)))
        return Presentation(p.generators + (name,),
                            p.relators + (rel,), p.opaque)
    if kind == "remove_generator":
        _, name = move
        if name not in p.generators:
            raise ValueError("no generator %r" % name)
        defining = None
        for r in p.relators:
            if sum(1 for n, _ in r.word if n == name) == 1:
                defining = r
                break
        if defining is None:
            raise ValueError("no defining relator for %r" % name)
        k = next(i for i, (n, _) in enumerate(defining.word) if n == name)
        pre, (_, sign), post = defining.word[:k], defining.word[k], defining.word[k + 1:]
        # pre name^sign post = 1, so name = (pre post)^-1 or post pre
        repl = concat(inv(pre), inv(post)) if sign > 0 else concat(post, pre)
        rels = []
        for r in p.relators:
            if r.label == defining.label:
                continue
            out = []
            for n, s in r.word:
                if n != name:
                    out.append((n, s))
                elif s > 0:
                    out.extend(repl)
                else:
                    out.extend(inv(repl))
            rels.append(Relator(r.label, free_reduce(tuple(out))))
        gens = tuple(g for g in p.generators if g != name)
        return Presentation(gens, tuple(rels), p.opaque - {name})
    raise ValueError("unknown Tietze move %r" % (kind,))


# ---------------------------------------------------------------------------
# coset actions and Reidemeister-Schreier


class CosetAction:
    """Permutation action of named generators on a finite coset set."""

    __slots__ = ("labels", "n", "perms", "_inverse")

    def __init__(self, labels, perms):
        self.labels = tuple(labels)
        self.n = len(self.labels)
        self.perms = {}
        self._inverse = {}
        for name, perm in perms.items():
            perm = tuple(perm)
            if sorted(perm) != list(range(self.n)):
                raise ValueError("action of %r is not a permutation" % name)
            self.perms[name] = perm
            back = [0] * self.n
            for i, img in enumerate(perm):
                back[img] = i
            self._inverse[name] = tuple(back)

    def act(self, name, c):
        return self.perms[name][c]

    def act_inv(self, name, c):
        return self._inverse[name][c]

    def act_word(self, w, c):
        for name, s in w:
            c = self.perms[name][c] if s > 0 else self._inverse[name][c]
        return c

    def orbit(self, start=0):
        seen = {start}
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for perm in self.perms.values():
                nxt = perm[c]
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return seen

    def is_transitive(self, start=0):
        return len(self.orbit(start)) == self.n


def schreier_transversal(p, action, base=0):
    """Prefix-closed transversal words found by breadth-first search.

    Cosets are explored from base, applying the presentation's generators
    in declared order with exponent +1 first, then -1.  Raises if some
    coset is unreachable.
    """
    trans = [None] * action.n
    trans[base] = ()
    queue = deque([base])
    steps = [(name, 1) for name in p.generators] + \
            [(name, -1) for name in p.generators]
    while queue:
        c = queue.popleft()
        for name, s in steps:
            nxt = action.act(name, c) if s > 0 else action.act_inv(name, c)
            if trans[nxt] is None:
                trans[nxt] = trans[c] + ((name, s),)
                queue.append(nxt)
    if any(t is None for t in trans):
        raise ValueError("coset action is not transitive from the base coset")
    return trans


def schreier_subgroup_presentation(p, action, transversal=None, base=0):
    """Presentation of the point stabilizer of base under the coset action.

    The subgroup generators are the nontrivial Schreier products
    u_c x u_{c.x}^-1 (named "x@c"); generators whose product freely reduces
    to the empty word are dropped.  Each relator is rewritten once per
    coset.  The action must send every relator to the identity permutation.
    """
    for name in p.generators:
        if name not in action.perms:
            raise ValueError("generator %r has no coset action" % name)
    for r in p.relators:
        for c in range(action.n):
            if action.act_word(r.word, c) != c:
                raise ValueError(
                    "relator %s moves coset %d: action inconsistent" % (r.label, c))
    if transversal is None:
        trans = schreier_transversal(p, action, base)
    else:
        trans = [tuple(t) for t in transversal]
        if len(trans) != action.n:
            raise ValueError("transversal size mismatch")
        if free_reduce(trans[base]):
            raise ValueError("base transversal word must be trivial")
        for c, t in enumerate(trans):
            if action.act_word(t, base) != c:
                raise ValueError("transversal word %d reaches the wrong coset" % c)

    gen_name = {}
    sub_gens = []
    sub_opaque = set()
    for c in range(action.n):
        for name in p.generators:
            c2 = action.act(name, c)
            w = free_reduce(concat(trans[c], letters(name), inv(trans[c2])))
            if not w:
                gen_name[(c, name)] = None
            else:
                nm = "%s@%d" % (name, c)
                gen_name[(c, name)] = nm
                sub_gens.append(nm)
                if name in p.opaque:
                    sub_opaque.add(nm)

    sub_rels = []
    for r in p.relators:
        for c in range(action.n):
            out = []
            cur = c
            for name, s in r.word:
                if s > 0:
                    nm = gen_name[(cur, name)]
                    if nm:
                        out.append((nm, 1))
                    cur = action.act(name, cur)
                else:
                    cur = action.act_inv(name, cur)
                    nm = gen_name[(cur, name)]
                    if nm:
                        out.append((nm, -1))
            sub_rels.append(Relator("%s@%d" % (r.label, c), free_reduce(tuple(out))))
    return Presentation(tuple(sub_gens), tuple(sub_rels), frozenset(sub_opaque))


def spin_coset_action(g):
    """Action of the twist alphabet on the 2^g single-twist coset classes.

    Cosets are the subsets J of {1..g} (lexicographically ordered), J
    recording on which handles an odd power of the handle twist has been
    applied.  a_i toggles membership of i; t_i exchanges membership of i
    and i+1; s and every d[i,j] fix all cosets.
    """
    if g < 1:
        raise ValueError("genus must be at least 1")
    subsets = sorted(itertools.chain.from_iterable(
        itertools.combinations(range(1, g + 1), k) for k in range(g + 1)))
    index = {J: c for c, J in enumerate(subsets)}
    identity = tuple(range(len(subsets)))

    def perm_of(fn):
        return tuple(index[tuple(sorted(fn(set(J))))] for J in subsets)

    perms = {}
    for i in range(1, g + 1):
        perms["a%d" % i] = perm_of(lambda J, i=i: J ^ {i})
    perms["s"] = identity
    for i in range(1, g):
        def t_rule(J, i=i):
            if (i in J) != (i + 1 in J):
                return J ^ {i, i + 1}
            return J
        perms["t%d" % i] = perm_of(t_rule)
    for i in range(-g, g + 1):
        if i == 0:
            continue
        for j in range(i + 1, g + 1):
            if j == 0:
                continue
            perms["d[%d,%d]" % (i, j)] = identity
    return CosetAction(tuple(subsets), perms)


# ---------------------------------------------------------------------------
# text format


def parse_presentation(text):
    """Parse the line-oriented presentation format.

    Lines: 'gen NAME' (optionally 'gen NAME opaque'), 'rel LABEL: WORD',
    '#' comments, blank lines ignored.
    """
    gens = []
    opaque = set()
    rels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gen "):
            parts = line[4:].split()
            if not parts or len(parts) > 2:
                raise ValueError("line %d: malformed gen line" % lineno)
            name = parts[0]
            if not _FILE_NAME_RE.match(name):
                raise ValueError("line %d: bad generator name %r" % (lineno, name))
            if len(parts) == 2:
                if parts[1] != "opaque":
                    raise ValueError("line %d: unknown flag %r" % (lineno, parts[1]))
                opaque.add(name)
            gens.append(name)
        elif line.startswith("rel "):
            body = line[4:]
            if ":" not in body:
                raise ValueError("line %d: rel line needs a colon" % lineno)
            label, wordtext = body.split(":", 1)
            label = label.strip()
            if not label or any(ch.isspace() for ch in label):
                raise ValueError("line %d: bad relator label" % lineno)
            try:
                word = parse_word(wordtext)
            except ValueError as e:
                raise ValueError("line %d: %s" % (lineno, e)) from None
            rels.append(Relator(label, word))
        else:
            raise ValueError("line %d: unrecognized line %r" % (lineno, raw))
    return Presentation(tuple(gens), tuple(rels), frozenset(opaque))


def serialize_presentation(p):
    """Render a Presentation in the parse_presentation format."""
    lines = []
    for g in p.generators:
        if not _FILE_NAME_RE.match(g):
            raise ValueError("generator name %r is not serializable" % g)
        lines.append("gen %s opaque" % g if g in p.opaque else "gen %s" % g)
    for r in p.relators:
        if ":" in r.label or any(ch.isspace() for ch in r.label):
            raise ValueError("relator label %r is not serializable" % r.label)
        lines.append("rel %s: %s" % (r.label, format_word(r.word)))
    return "\n".join(lines) + "\n"
