"""Zero-dimensional ideals of R = Q[a1..an].

An ideal is given by generators, by an inverse system, or by a finite
quotient.  Everything that needs exact information goes through the quotient
algebra R/I (standard monomials plus multiplication matrices).

From generators the quotient is found by truncated linear algebra.  Let V_D
be the span of all m*g with deg(m*g) <= D.  The monomials of degree <= D that
are not leading monomials of V_D are called standard.  Suppose some degree
e+1 <= D has no standard monomial, and let B be the standard monomials of
degree <= e.  If B is an order ideal, the reduced multiplication matrices on
span(B) commute, and every generator kills the class of 1, then R/I is
exactly span(B):

* every monomial of degree e+1 reduces into span(B), so dim R/I <= |B|;
* f -> f(A)e_1 is onto span(B) and its kernel is an ideal containing the
  generators, so dim R/I >= |B|.

Otherwise D grows by one, up to ``truncation_cap``.  Monomial generators
(including a declared power of the maximal ideal) are handled by deleting
their multiples from the column set.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .apolarity import GradedProfile, InverseSystem, annihilator_quotient
from .errors import DimensionMismatch, InfiniteColengthError, NotLocalError
from .exactalg import Matrix, as_fraction, rref, sparse_kernel
from .poly import (Monomial, OperatorPolynomial, degrevlex_key, mono_divides, mono_mul,
                   monomials_of_degree, monomials_up_to, parse_polynomial_list)
from .quotient import QuotientAlgebra, Reducer, intersect_quotients, translate_quotient

DEFAULT_TRUNCATION_CAP = 12


class FiniteIdeal:
    """An ideal of R, expected to have finite colength."""

    def __init__(self, nvars: int, generators: Iterable[OperatorPolynomial] = (),
                 power_of_max_ideal: int | None = None, *, quotient: QuotientAlgebra | None = None,
                 truncation_cap: int = DEFAULT_TRUNCATION_CAP):
        gens = []
        for g in generators:
            if not isinstance(g, OperatorPolynomial):
                raise TypeError("ideal generators must be OperatorPolynomials")
            if g.nvars != nvars:
                raise DimensionMismatch(f"generator {g} is not in {nvars} variables")
            if g and g not in gens:
                gens.append(g)
        if not gens and power_of_max_ideal is None and quotient is None:
            raise ValueError("an ideal needs generators, a power of the maximal ideal, or a quotient")
        if quotient is not None and quotient.nvars != nvars:
            raise DimensionMismatch("quotient lives in a different number of variables")
        self.nvars = nvars
        self._generators = tuple(gens) if gens or quotient is None else None
        self.power_of_max_ideal = power_of_max_ideal
        self.truncation_cap = truncation_cap
        self._quotient = quotient
        self.truncation_used: int | None = None

    # constructors ---------------------------------------------------------
    @classmethod
    def parse(cls, text: str, nvars: int | None = None, power_of_max_ideal: int | None = None,
              **kw) -> "FiniteIdeal":
        gens = parse_polynomial_list(text, nvars, OperatorPolynomial)
        n = nvars if nvars is not None else (gens[0].nvars if gens else 1)
        return cls(n, gens, power_of_max_ideal, **kw)

    @classmethod
    def annihilator(cls, E: InverseSystem) -> "FiniteIdeal":
        """Ann(E), realized directly from the inverse system."""
        return cls(E.nvars, quotient=annihilator_quotient(E))

    @classmethod
    def point(cls, coords: Sequence) -> "FiniteIdeal":
        """Maximal ideal (a_1 - c_1, ..., a_n - c_n) of a rational point."""
        n = len(coords)
        gens = [OperatorPolynomial.var(n, i) - as_fraction(c) for i, c in enumerate(coords)]
        mats = [Matrix([[as_fraction(c)]]) for c in coords]
        q = QuotientAlgebra(n, [(0,) * n], mats)
        return cls(n, gens, quotient=q)

    @classmethod
    def from_quotient(cls, q: QuotientAlgebra) -> "FiniteIdeal":
        return cls(q.nvars, quotient=q)

    @classmethod
    def from_json(cls, data: dict, **kw) -> "FiniteIdeal":
        n = data["vars"]
        gens = [OperatorPolynomial.parse(g, n) for g in data.get("generators", [])]
        I = cls(n, gens, data.get("add_power_of_max_ideal"), **kw)
        shift = data.get("support_shift")
        if shift:
            I = translate(I, shift)
        return I

    # basic access ---------------------------------------------------------
    @property
    def generators(self) -> tuple:
        if self._generators is None:
            self._generators = tuple(self.quotient.border_basis())
        return self._generators

    def all_generators(self) -> list[OperatorPolynomial]:
        """Generators including the monomials of a declared power of the maximal ideal."""
        gens = list(self.generators)
        if self.power_of_max_ideal is not None:
            gens += [OperatorPolynomial.monomial(m) for m in monomials_of_degree(self.nvars, self.power_of_max_ideal)]
        return gens

    @property
    def quotient(self) -> QuotientAlgebra:
        if self._quotient is None:
            self._quotient = self._realize()
        return self._quotient

    def to_json(self) -> dict:
        out = {"vars": self.nvars, "generators": [str(g) for g in self.generators]}
        if self.power_of_max_ideal is not None:
            out["add_power_of_max_ideal"] = self.power_of_max_ideal
        return out

    def __repr__(self):
        return f"FiniteIdeal(nvars={self.nvars}, generators={len(self.generators)})"

    # truncated linear algebra ---------------------------------------------
    def _realize(self) -> QuotientAlgebra:
        n = self.nvars
        mono_gens: list[Monomial] = []
        others: list[OperatorPolynomial] = []
        for g in self._generators or ():
            (mono_gens if g.is_monomial() else others).append(g)
        mono_gens = [next(iter(g.terms)) for g in mono_gens]
        if self.power_of_max_ideal is not None:
            mono_gens += monomials_of_degree(n, self.power_of_max_ideal)
        # a nonzero constant monomial generator means the unit ideal
        if (0,) * n in mono_gens:
            return QuotientAlgebra(n, [], [Matrix([], 0) for _ in range(n)])
        mono_gens = _minimalize(mono_gens)

        def killed(m):
            return any(mono_divides(g, m) for g in mono_gens)

        start = max([g.degree for g in others] + [sum(m) for m in mono_gens] + [1])
        if self.power_of_max_ideal is not None and not others:
            start = self.power_of_max_ideal
        for D in range(start, self.truncation_cap + 1):
            q = _try_truncation(n, others, mono_gens, killed, D)
            if q is not None:
                self.truncation_used = D
                return q
        raise InfiniteColengthError(
            f"colength did not stabilize up to truncation degree {self.truncation_cap}")


def _minimalize(mons: list[Monomial]) -> list[Monomial]:
    mons = sorted(set(mons), key=sum)
    out: list[Monomial] = []
    for m in mons:
        if not any(mono_divides(g, m) for g in out):
            out.append(m)
    return out


def _try_truncation(n, others, mono_gens, killed, D):
    cols = [m for m in reversed(monomials_up_to(n, D)) if not killed(m)]  # largest first
    index = {m: j for j, m in enumerate(cols)}
    rows = []
    for g in others:
        gt = {m: c for m, c in g.terms.items() if not killed(m)}
        if not gt:
            continue
        for k in range(D - g.degree + 1):
            for u in monomials_of_degree(n, k):
                row = {}
                for m, c in gt.items():
                    mu = mono_mul(m, u)
                    j = index.get(mu)
                    if j is not None:
                        row[j] = c
                if row:
                    rows.append(row)
    red = rref(rows)
    pivot_rows = {min(r): r for r in red}
    standard = [m for j, m in enumerate(cols) if j not in pivot_rows]
    # first degree with no standard monomial; higher ones may be truncation artifacts
    levels = {sum(m) for m in standard}
    gap = next((k for k in range(D + 1) if k not in levels), None)
    if gap is None:
        return None
    basis = sorted((m for m in standard if sum(m) < gap), key=degrevlex_key)
    pos = {m: j for j, m in enumerate(basis)}
    # degree fall can leave holes; the lower bound needs an order ideal
    for m in basis:
        for i, e in enumerate(m):
            if e and tuple(x - (k == i) for k, x in enumerate(m)) not in pos:
                return None
    d = len(basis)

    def nf(m) -> list:
        v = [Fraction(0)] * d
        if killed(m):
            return v
        if m in pos:
            v[pos[m]] = Fraction(1)
            return v
        r = pivot_rows[index[m]]
        for j, c in r.items():
            if j != index[m]:
                v[pos[cols[j]]] = -c
        return v

    mats = []
    for i in range(n):
        e = tuple(int(k == i) for k in range(n))
        colvecs = [nf(mono_mul(b, e)) for b in basis]
        mats.append(Matrix([[colvecs[j][r] for j in range(d)] for r in range(d)], d))
    q = QuotientAlgebra(n, basis, mats)
    for a in range(n):
        for b in range(a + 1, n):
            if mats[a] @ mats[b] != mats[b] @ mats[a]:
                return None
    for g in others:
        if not q.contains(g):
            return None
    for m in mono_gens:
        if any(q.monomial_vector(m)):
            return None
    return q


# ---------------------------------------------------------------- operations

def colength(I: FiniteIdeal) -> int:
    """dim R/I."""
    return I.quotient.dim


def contains(I: FiniteIdeal, f: OperatorPolynomial) -> bool:
    return I.quotient.contains(f)


def equals(I: FiniteIdeal, J: FiniteIdeal) -> bool:
    """Mutual containment, checked through generators and colength."""
    if I.nvars != J.nvars:
        return False
    if colength(I) != colength(J):
        return False
    return (all(J.quotient.contains(g) for g in I.all_generators())
            and all(I.quotient.contains(g) for g in J.all_generators()))


def minimal_generators(I: FiniteIdeal) -> list[OperatorPolynomial]:
    """A short generating set for an ideal supported at the origin.

    Generators are picked greedily so that their images span I/mI, working
    modulo m^(L+1) where L is the Loewy length.  R is not local, so the pick
    is confirmed by an equality check; on failure, or for ideals with other
    support, all generators are returned.
    """
    gens = sorted(I.all_generators(), key=lambda g: (g.degree, degrevlex_key(g.leading_monomial())))
    q = I.quotient
    if q.dim == 0 or not q.is_local():
        return gens
    top = q.loewy_length()
    index = {m: j for j, m in enumerate(monomials_up_to(I.nvars, top))}

    def trunc(f):
        return {index[m]: c for m, c in f.terms.items() if m in index}

    red = Reducer()
    for g in gens:
        for mono in monomials_up_to(I.nvars, top):
            if any(mono):
                red.add(trunc(g * OperatorPolynomial.monomial(mono)))
    kept = [g for g in gens if red.add(trunc(g))]
    try:
        if equals(FiniteIdeal(I.nvars, kept, truncation_cap=I.truncation_cap), I):
            return kept
    except InfiniteColengthError:
        pass
    return gens


def intersect(I: FiniteIdeal, J: FiniteIdeal) -> FiniteIdeal:
    return FiniteIdeal.from_quotient(intersect_quotients(I.quotient, J.quotient))


def translate(I: FiniteIdeal, point: Sequence) -> FiniteIdeal:
    """The ideal {f(a - point) : f in I}; an ideal at the origin moves to point."""
    if len(point) != I.nvars:
        raise DimensionMismatch("translation vector has the wrong length")
    return FiniteIdeal.from_quotient(translate_quotient(I.quotient, point))


def ideal_sum(I: FiniteIdeal, extra: Iterable[OperatorPolynomial]) -> FiniteIdeal:
    return FiniteIdeal(I.nvars, list(I.all_generators()) + list(extra), truncation_cap=I.truncation_cap)


def _weight(w, m) -> int:
    return sum(a * b for a, b in zip(w, m))


def initial_ideal(I: FiniteIdeal, w: Sequence[int]) -> FiniteIdeal:
    """in_w(I), spanned by the terms of maximal w-weight of elements of I.

    Supported weights: all entries positive (any ideal), or all entries
    negative (ideals supported at the origin).  For w = (-1, ..., -1) this is
    the ideal of lowest-degree forms.
    """
    w = [int(x) for x in w]
    n = I.nvars
    if len(w) != n:
        raise DimensionMismatch("weight vector has the wrong length")
    q = I.quotient
    d = q.dim
    if d == 0:
        return FiniteIdeal(n, [OperatorPolynomial.constant(n)])
    if all(x > 0 for x in w):
        gens = _initial_positive(q, w)
    elif all(x < 0 for x in w):
        gens = _initial_negative(q, [-x for x in w])
    else:
        raise ValueError("initial ideals are supported for all-positive or all-negative weights")
    return FiniteIdeal(n, gens, truncation_cap=max(I.truncation_cap, DEFAULT_TRUNCATION_CAP))


def _kernel_polys(q: QuotientAlgebra, mons: list[Monomial]) -> list[OperatorPolynomial]:
    rows: dict = {}
    for j, m in enumerate(mons):
        for t, c in enumerate(q.monomial_vector(m)):
            if c:
                rows.setdefault(t, {})[j] = c
    kern = sparse_kernel(list(rows.values()), len(mons))
    return [OperatorPolynomial(q.nvars, {mons[j]: c for j, c in v.items()}) for v in kern]


def _piece_basis(polys, level_mons, n) -> list[OperatorPolynomial]:
    """Basis of the span of polys (all supported on level_mons)."""
    index = {m: j for j, m in enumerate(level_mons)}
    red = rref([p.to_vector(index) for p in polys if p])
    return [OperatorPolynomial(n, {level_mons[j]: c for j, c in r.items()}) for r in red]


def _initial_positive(q: QuotientAlgebra, w) -> list[OperatorPolynomial]:
    n, d = q.nvars, q.dim
    wmax = max(w)
    # all monomials grouped by weight, enough to reach full rank
    gens: list[OperatorPolynomial] = []
    deg_bound = 0
    k = 0
    filt: list[Monomial] = []
    seen = set()
    while True:
        # make sure every monomial of weight <= k is listed
        while deg_bound <= k // min(w):
            for m in monomials_of_degree(n, deg_bound):
                seen.add(m)
            deg_bound += 1
        level = sorted((m for m in seen if _weight(w, m) == k), key=degrevlex_key, reverse=True)
        filt.extend(level)
        if level:
            kern = _kernel_polys(q, filt)
            tops = [OperatorPolynomial(n, {m: c for m, c in p.terms.items() if _weight(w, m) == k}) for p in kern]
            gens.extend(_piece_basis(tops, level, n))
            rank = len(filt) - len(kern)
            if rank == d:
                break
        k += 1
    # everything of weight in (k, k + wmax] is in in_w(I)
    for j in range(1, wmax + 1):
        while deg_bound <= (k + j) // min(w):
            for m in monomials_of_degree(n, deg_bound):
                seen.add(m)
            deg_bound += 1
        gens.extend(OperatorPolynomial.monomial(m) for m in seen if _weight(w, m) == k + j)
    return gens


def _initial_negative(q: QuotientAlgebra, u) -> list[OperatorPolynomial]:
    if not q.is_local():
        raise NotLocalError("lowest-form initial ideals need an ideal supported at the origin")
    n = q.nvars
    r = q.loewy_length()
    low = [m for m in monomials_up_to(n, r - 1)]
    gens: list[OperatorPolynomial] = []
    top = max(_weight(u, m) for m in low) if low else 0
    for k in range(top + 1):
        tail = [m for m in low if _weight(u, m) >= k]
        level = [m for m in tail if _weight(u, m) == k]
        if not level:
            continue
        kern = _kernel_polys(q, tail)
        lows = [OperatorPolynomial(n, {m: c for m, c in p.terms.items() if _weight(u, m) == k}) for p in kern]
        gens.extend(_piece_basis(lows, sorted(level, key=degrevlex_key, reverse=True), n))
    gens.extend(OperatorPolynomial.monomial(m) for m in monomials_of_degree(n, r))
    return gens


def local_hilbert_function(I: FiniteIdeal) -> GradedProfile:
    """Hilbert function of R/in(I) for the lowest-degree-form initial ideal."""
    q = I.quotient
    if not q.is_local():
        raise NotLocalError("local Hilbert function needs an ideal supported at the origin")
    n = q.nvars
    r = q.loewy_length()
    low = monomials_up_to(n, r - 1)
    out = []
    for k in range(r):
        tail = [m for m in low if sum(m) >= k]
        level = [m for m in tail if sum(m) == k]
        kern = _kernel_polys(q, tail)
        lows = [p.homogeneous_part(k) for p in kern]
        out.append(len(level) - len(_piece_basis(lows, sorted(level, key=degrevlex_key, reverse=True), n)))
    return GradedProfile(out)
