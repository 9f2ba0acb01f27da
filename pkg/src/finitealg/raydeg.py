"""Ray decompositions and their fibers.

For an ideal I supported at the origin and a coordinate a_i, let p_i be the
ideal generated by the other variables.  The ray order nu is the dimension
of R/(I + p_i); then I contains a_i^nu - q for some q in p_i, and

    I = J + (a_i^nu - q),   J = I cap p_i.

Replacing the last generator gives two families over the line,

    upper:  J + (a_i^nu - t a_i^(nu-1) - q)
    lower:  J + (a_i^nu - t a_i - q),

both equal to I at t = 0.  A flat family keeps the colength constant.

For a standard form F = x1^(s) + g, W (a_1^c kills g and W, deg g <= c+1)
the upper fiber at t != 0 is predicted to be the union of the point t*e_1
with the annihilator of (x1 + 1/t)^(s-1) - t g, W.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .apolarity import GradedProfile, InverseSystem, diff_closure, hilbert_function
from .errors import DimensionMismatch, NotFoundError, NotLocalError
from .exactalg import Matrix, as_fraction, rref, sparse_kernel
from .ideals import FiniteIdeal, colength, intersect
from .poly import (DualPolynomial, OperatorPolynomial, contract_monomial, degrevlex_key,
                   divided_power, mono_divides, monomials_of_degree, monomials_up_to, unit_monomial)
from .quotient import Reducer

DEFAULT_SAMPLES = (Fraction(0), Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 2))


# ---------------------------------------------------------------- ray order

def _other_image_columns(q, i):
    """Monomials a_j * b (j != i, b standard) and their classes, deduplicated."""
    n = q.nvars
    mons = []
    seen = set()
    for b in q.basis:
        for j in range(n):
            if j == i:
                continue
            m = tuple(e + (k == j) for k, e in enumerate(b))
            if m not in seen:
                seen.add(m)
                mons.append(m)
    mons.sort(key=degrevlex_key)
    return mons


def ray_order(I: FiniteIdeal, i: int = 0) -> int:
    """nu = dim R/(I + p_i) for an ideal supported at the origin (0-based i)."""
    q = I.quotient
    if not q.is_local():
        raise NotLocalError("ray order is defined here for ideals supported at the origin")
    if not 0 <= i < I.nvars:
        raise DimensionMismatch("direction index out of range")
    mons = _other_image_columns(q, i)
    vecs = [{t: c for t, c in enumerate(q.monomial_vector(m)) if c} for m in mons]
    red = rref(vecs)
    return q.dim - len(red)


def _ray_witness(I: FiniteIdeal, i: int, nu: int) -> OperatorPolynomial:
    """Canonical q in p_i with a_i^nu - q in I (free coefficients set to 0)."""
    q = I.quotient
    n = I.nvars
    mons = _other_image_columns(q, i)
    target = q.monomial_vector(unit_monomial(n, i, nu))
    # solve sum_k c_k [mons_k] = [a_i^nu]
    rows = []
    for t in range(q.dim):
        row = {k: q.monomial_vector(m)[t] for k, m in enumerate(mons) if q.monomial_vector(m)[t]}
        if target[t]:
            row[len(mons)] = target[t]
        if row:
            rows.append(row)
    sol = {}
    for r in rref(rows):
        pc = min(r)
        if pc == len(mons):
            raise NotFoundError("a_i^nu is not congruent to an element of p_i")
        rhs = r.get(len(mons), Fraction(0))
        if rhs:
            sol[mons[pc]] = rhs
    return OperatorPolynomial(n, sol)


@dataclass
class RayDecomposition:
    ideal: FiniteIdeal
    direction: int
    nu: int
    q: OperatorPolynomial
    J: list  # generators of I cap p_i (not of finite colength)

    def last_generator(self, lam=0, lower: bool = False) -> OperatorPolynomial:
        n = self.ideal.nvars
        a = OperatorPolynomial.var(n, self.direction)
        lam = as_fraction(lam)
        if lower:
            return a ** self.nu - a * lam - self.q
        return a ** self.nu - (a ** (self.nu - 1)) * lam - self.q

    def recompose(self) -> FiniteIdeal:
        return FiniteIdeal(self.ideal.nvars, list(self.J) + [self.last_generator(0)])

    def to_json(self) -> dict:
        return {"direction": self.direction + 1, "nu": self.nu, "q": str(self.q),
                "J": [str(g) for g in self.J]}


def ray_decompose(I: FiniteIdeal, i: int = 0) -> RayDecomposition:
    """Split I = J + (a_i^nu - q) with J = I cap p_i."""
    nu = ray_order(I, i)
    qpoly = _ray_witness(I, i, nu)
    return RayDecomposition(I, i, nu, qpoly, _cap_with_coordinate_ideal(I, i))


def _cap_with_coordinate_ideal(I: FiniteIdeal, i: int) -> list[OperatorPolynomial]:
    """Generators of I cap p_i for I supported at the origin.

    With m^r inside I, the ideal is (I cap p_i cap R_{<r}) + (p_i cap m^r);
    modulo the monomial part, products can be truncated below degree r, so a
    generating set can be picked greedily by degree.
    """
    q = I.quotient
    n = I.nvars
    r = q.loewy_length()
    pure = {unit_monomial(n, i, k) for k in range(r + 1)}
    W = [m for m in monomials_up_to(n, r - 1) if m not in pure]
    index = {m: j for j, m in enumerate(W)}
    gens: list[OperatorPolynomial] = []
    span = Reducer()
    for k in range(1, r):
        level = [m for m in W if sum(m) <= k]
        rows: dict = {}
        for j, m in enumerate(level):
            for t, c in enumerate(q.monomial_vector(m)):
                if c:
                    rows.setdefault(t, {})[j] = c
        for v in sparse_kernel(list(rows.values()), len(level)):
            f = OperatorPolynomial(n, {level[j]: c for j, c in v.items()})
            if span.express(f.to_vector(index)) is not None:
                continue
            gens.append(f)
            # multiples of f, truncated below degree r
            for u in monomials_up_to(n, r - 1 - f.order):
                g = (f * OperatorPolynomial.monomial(u)).truncate_below(r)
                if g:
                    span.add(g.to_vector(index))
    mono = [g.leading_monomial() for g in gens if g.is_monomial()]
    for m in monomials_of_degree(n, r):
        if m not in pure and not any(mono_divides(u, m) for u in mono):
            gens.append(OperatorPolynomial.monomial(m))
    return gens


def upper_ray_fiber(rd: RayDecomposition, lam) -> FiniteIdeal:
    return FiniteIdeal(rd.ideal.nvars, list(rd.J) + [rd.last_generator(lam)])


def lower_ray_fiber(rd: RayDecomposition, lam) -> FiniteIdeal:
    return FiniteIdeal(rd.ideal.nvars, list(rd.J) + [rd.last_generator(lam, lower=True)])


# ---------------------------------------------------------------- standard forms

@dataclass
class StandardForm:
    """Inverse system x1^(s) + g, W with a_1^c -| g = 0 and a_1^c -| W = 0."""

    nvars: int
    s: int
    c: int
    g: DualPolynomial
    W: tuple = ()
    change_of_variables: Matrix | None = field(default=None, compare=False)

    def generators(self) -> list[DualPolynomial]:
        top = divided_power(DualPolynomial.var(self.nvars, 0), self.s)
        return [top + self.g] + list(self.W)

    def inverse_system(self) -> InverseSystem:
        return InverseSystem(self.nvars, self.generators())

    def ideal(self) -> FiniteIdeal:
        return FiniteIdeal.annihilator(self.inverse_system())

    def problems(self) -> list[str]:
        """Reasons the data is not a valid standard form (empty when valid)."""
        out = []
        a1c = unit_monomial(self.nvars, 0, self.c)
        if contract_monomial(a1c, self.g):
            out.append("a_1^c does not kill g")
        if self.g.degree > self.c + 1:
            out.append("deg g exceeds c + 1")
        for h in self.W:
            if contract_monomial(a1c, h):
                out.append(f"a_1^c does not kill {h}")
            if h.degree > self.c:
                out.append(f"deg {h} exceeds c")
        if self.s < 2 * self.c:
            out.append("s < 2c")
        H = hilbert_function(self.inverse_system())
        if len(H) != self.s + 1 or any(v != 1 for v in H[self.c + 1:]):
            out.append(f"Hilbert function {H} does not have the shape (1, H_1..H_c, 1, ..., 1)")
        return out

    def validate(self) -> "StandardForm":
        bad = self.problems()
        if bad:
            raise ValueError("; ".join(bad))
        return self

    def to_json(self) -> dict:
        return {"vars": self.nvars, "s": self.s, "c": self.c, "g": str(self.g),
                "W": [str(h) for h in self.W]}

    @classmethod
    def from_json(cls, data: dict) -> "StandardForm":
        n = data["vars"]
        g = DualPolynomial.parse(data.get("g", "0") or "0", n)
        W = tuple(DualPolynomial.parse(h, n) for h in data.get("W", []))
        return cls(n, data["s"], data["c"], g, W)


def rayflat_predicted_fiber(sf: StandardForm, lam) -> FiniteIdeal:
    """(a_1 - lam, a_2, ..., a_n) cap Ann((x1 + 1/lam)^(s-1) - lam g, W)."""
    lam = as_fraction(lam)
    if lam == 0:
        raise ValueError("the predicted fiber is for nonzero lambda")
    n = sf.nvars
    x1 = DualPolynomial.var(n, 0)
    F = divided_power(x1 + 1 / lam, sf.s - 1) - sf.g * lam
    E = InverseSystem(n, [F] + list(sf.W))
    pt = [lam] + [0] * (n - 1)
    return intersect(FiniteIdeal.point(pt), FiniteIdeal.annihilator(E))


def shifted_hilbert_function(sf: StandardForm, lam=1) -> GradedProfile:
    """Hilbert function of the shifted system (x1 + 1/lam)^(s-1) - lam g, W."""
    lam = as_fraction(lam)
    n = sf.nvars
    F = divided_power(DualPolynomial.var(n, 0) + 1 / lam, sf.s - 1) - sf.g * lam
    return hilbert_function(InverseSystem(n, [F] + list(sf.W)))


@dataclass
class FlatnessReport:
    reference: int
    rows: list  # (lambda, colength)

    @property
    def passed(self) -> bool:
        return all(c == self.reference for _, c in self.rows)

    @property
    def offending(self) -> list:
        return [lam for lam, c in self.rows if c != self.reference]

    def to_json(self) -> dict:
        return {"reference_colength": self.reference, "passed": self.passed,
                "rows": [{"lambda": str(lam), "colength": c} for lam, c in self.rows]}


def verify_flatness_by_colength(rd: RayDecomposition, samples: Sequence = DEFAULT_SAMPLES,
                                lower: bool = False) -> FlatnessReport:
    ref = colength(rd.ideal)
    rows = []
    for lam in samples:
        lam = as_fraction(lam)
        fib = lower_ray_fiber(rd, lam) if lower else upper_ray_fiber(rd, lam)
        rows.append((lam, colength(fib)))
    return FlatnessReport(ref, rows)


# ---------------------------------------------------------------- to standard form

def _shape(H) -> int | None:
    """c with H = (1, H_1..H_c, 1, ..., 1) and s >= 2c, or None."""
    s = len(H) - 1
    c = s
    while c > 0 and H[c] == 1:
        c -= 1
    # c is now the last index with H != 1 (or 0); the tail after it is all ones
    if s < 2 * c:
        return None
    return c


def _coordinate_change(n: int, ell: Sequence[Fraction], pivot: int, shifts: Sequence[Fraction]):
    """Linear forms y with y_1 = ell and the rest built from the other coordinates.

    Returns the images of x_1..x_n as linear forms in the new variables, and
    the matrix P with x = P y.
    """
    # new variable order: ell first, then the remaining coordinates
    others = [j for j in range(n) if j != pivot]
    # y_1 = ell; y_{k+1} = x_{others[k]} + shifts[k] * ell  ->  x_{others[k]} = y_{k+1} - shifts[k] y_1
    P = [[Fraction(0)] * n for _ in range(n)]
    for k, j in enumerate(others):
        P[j][k + 1] = Fraction(1)
        P[j][0] = -shifts[k]
    # x_pivot = (y_1 - sum_{j != pivot} ell_j x_j) / ell_pivot
    lp = ell[pivot]
    P[pivot][0] = 1 / lp
    for j in others:
        for col in range(n):
            P[pivot][col] -= ell[j] * P[j][col] / lp
    images = [DualPolynomial(n, {tuple(int(t == col) for t in range(n)): P[j][col] for col in range(n)})
              for j in range(n)]
    return images, Matrix(P)


def to_standard_form(E, nvars: int | None = None, seed: int = 0, tries: int = 32) -> StandardForm:
    """Bring an inverse system with H = (1, H_1..H_c, 1..1), s >= 2c, to standard form.

    The top form of a top-degree generator is a power of a linear form ell;
    ell becomes the first coordinate.  Complements of ell are tried in a fixed
    order (plain coordinates, then seeded random shears), and in each chart the
    generator is replaced by any element x1^(s) + g of Diff(E) with g of the
    required kind; W is the part of Diff(E) killed by a_1^c in degree <= c.
    The choice is accepted when these elements still generate Diff(E).
    """
    from .apolarity import _as_system
    E = _as_system(E, nvars)
    n = E.nvars
    H = hilbert_function(E)
    c = _shape(H)
    if c is None:
        raise ValueError(f"Hilbert function {H} is not of the form (1, H_1..H_c, 1, ..., 1) with s >= 2c")
    s = len(H) - 1
    tops = [F for F in E if F.degree == s]
    F = tops[0]
    top = F.homogeneous_part(s)
    # first partials of order s-1 of the top form span the line of ell
    ell = None
    for u in monomials_of_degree(n, s - 1):
        h = contract_monomial(u, top)
        if h:
            ell = [h.coefficient(unit_monomial(n, j)) for j in range(n)]
            break
    if ell is None:
        raise ValueError("top-degree generator has no linear derivative")
    pivots = [j for j in range(n) if ell[j]]
    rng = random.Random(seed)
    charts = [(p, [Fraction(0)] * (n - 1)) for p in pivots]
    for _ in range(tries):
        charts.append((pivots[0], [Fraction(rng.randint(-3, 3)) for _ in range(n - 1)]))
    for pivot, shifts in charts:
        images, P = _coordinate_change(n, ell, pivot, shifts)
        E2 = InverseSystem(n, [G.substitute_linear(images) for G in E])
        sf = _fit_standard_form(E2, s, c)
        if sf is not None:
            sf.change_of_variables = P
            return sf
    raise NotFoundError("no suitable direction found")


def _fit_standard_form(E: InverseSystem, s: int, c: int) -> StandardForm | None:
    n = E.nvars
    clo = diff_closure(E)
    mons = clo.monomials
    basis = clo.basis()
    x1s = unit_monomial(n, 0, s)

    def allowed_g(m):
        return sum(m) <= c + 1 and m[0] < c

    # find t with sum t_k basis_k = kappa * x1^s + g
    # unknowns t_k; constraints: coefficients outside allowed_g and x1^s vanish
    rows = []
    for m in mons:
        if m == x1s or allowed_g(m):
            continue
        row = {k: b.coefficient(m) for k, b in enumerate(basis) if b.coefficient(m)}
        if row:
            rows.append(row)
    # plus the normalization: coefficient of x1^s equals 1/s!
    from math import factorial
    norm = {k: b.coefficient(x1s) for k, b in enumerate(basis) if b.coefficient(x1s)}
    if not norm:
        return None
    norm[len(basis)] = Fraction(1, factorial(s))
    sol = [Fraction(0)] * len(basis)
    for r in rref(rows + [norm]):
        pc = min(r)
        if pc == len(basis):
            return None
        sol[pc] = r.get(len(basis), Fraction(0))
    Fnew = DualPolynomial(n, {})
    for t, b in zip(sol, basis):
        if t:
            Fnew = Fnew + b * t
    g = Fnew - divided_power(DualPolynomial.var(n, 0), s)
    # W: elements of Diff(E) of degree <= c killed by a_1^c, reduced to a small generating set
    a1c = unit_monomial(n, 0, c)
    low = [b for b in basis if b.degree <= c]
    Wspace = []
    if low:
        kill_rows: dict = {}
        for k, b in enumerate(low):
            for m, v in contract_monomial(a1c, b).terms.items():
                kill_rows.setdefault(m, {})[k] = v
        for v in sparse_kernel(list(kill_rows.values()), len(low)):
            h = DualPolynomial(n, {})
            for k, x in v.items():
                h = h + low[k] * x
            if h:
                Wspace.append(h)
    target = clo.dim
    gens = [Fnew]
    if diff_closure(InverseSystem(n, gens)).dim != target:
        for h in sorted(Wspace, key=lambda p: -p.degree):
            if diff_closure(InverseSystem(n, gens + [h])).dim > diff_closure(InverseSystem(n, gens)).dim:
                gens.append(h)
            if diff_closure(InverseSystem(n, gens)).dim == target:
                break
    if diff_closure(InverseSystem(n, gens)).space != clo.space:
        return None
    sf = StandardForm(n, s, c, g, tuple(gens[1:]))
    if sf.problems():
        return None
    return sf
