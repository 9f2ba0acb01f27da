"""Fixture loading and the verification runner.

A fixture is a JSON object with an ``id``, a ``kind``, a ``payload`` the
subject is built from, and a list of ``checks``.  Each check names a
computation from ``CHECKS`` and the value it should produce; a check with
``expected: null`` is informational and always passes.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from ..apolarity import (InverseSystem, apolar_ideal_piece, hilbert_function,
                         minimal_generators_in_degree, socle_type)
from ..commuting import (CommutingTuple, check_commute, hilb_tangent_dim, kernel_profile,
                         principal_component_dim, socle_dim, tangent_space_dim)
from ..errors import FiniteAlgError
from ..exactalg import Matrix, as_fraction, char_poly, is_squarefree, power_kernel_dim
from ..ideals import (FiniteIdeal, colength, equals, initial_ideal, intersect,
                      local_hilbert_function, translate)
from ..poly import (DualPolynomial, OperatorPolynomial, PolySpace, contract_monomial,
                    essential_variable_count, unit_monomial)
from ..raydeg import (StandardForm, lower_ray_fiber, ray_decompose, rayflat_predicted_fiber,
                      shifted_hilbert_function, upper_ray_fiber)
from . import builders

KINDS = ("inverse_system", "ideal", "matrix_tuple", "standard_form", "deformation")


def fixture_dir():
    return resources.files("finitealg.catalog") / "fixtures"


def fixture_path(name: str) -> Path:
    """Resolve a fixture by id, file name or ``fixtures/<file>`` path."""
    p = Path(name)
    if p.exists():
        return p
    base = p.name if p.suffix else p.name + ".json"
    cand = fixture_dir() / base
    if cand.is_file():
        return Path(str(cand))
    raise FileNotFoundError(f"no such fixture or file: {name}")


@dataclass
class Fixture:
    id: str
    kind: str
    payload: dict
    checks: list
    description: str = ""
    table1: dict | None = None
    reading: str | None = None
    discrepancy: bool = False
    note: str | None = None

    @classmethod
    def from_json(cls, data: dict) -> "Fixture":
        if data.get("kind") not in KINDS:
            raise ValueError(f"unknown fixture kind {data.get('kind')!r}")
        checks = data.get("checks") or []
        if not checks:
            raise ValueError(f"fixture {data.get('id')} has no checks")
        for c in checks:
            if not c.get("anchor"):
                raise ValueError(f"check {c.get('name')} in {data.get('id')} has no anchor")
        return cls(data["id"], data["kind"], data["payload"], checks, data.get("description", ""),
                   data.get("table1"), data.get("reading"), bool(data.get("discrepancy")), data.get("note"))

    @classmethod
    def load(cls, name: str) -> "Fixture":
        with open(fixture_path(name)) as fh:
            return cls.from_json(json.load(fh))


def load_fixtures() -> list[Fixture]:
    out = []
    for entry in sorted(fixture_dir().iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            out.append(Fixture.from_json(json.loads(entry.read_text())))
    return out


# ---------------------------------------------------------------- subjects

def _ideal_from_spec(spec: dict, named: dict) -> FiniteIdeal:
    if "intersect" in spec:
        parts = [named[k] for k in spec["intersect"]]
        out = parts[0]
        for p in parts[1:]:
            out = intersect(out, p)
        return out
    if "annihilator_of" in spec:
        n = spec["vars"]
        return FiniteIdeal.annihilator(InverseSystem(n, [DualPolynomial.parse(g, n) for g in spec["annihilator_of"]]))
    return FiniteIdeal.from_json(spec)


def _tuple_from_blocks(spec: dict) -> list[Matrix]:
    return [builders.block_matrix(spec["sizes"], m) for m in spec["matrices"]]


class Subject:
    """Lazily built objects for one fixture payload."""

    def __init__(self, fx: Fixture):
        self.fx = fx
        self.p = fx.payload

    # inverse systems and ideals
    @cached_property
    def system(self) -> InverseSystem:
        if self.fx.kind == "standard_form":
            return self.standard_form.inverse_system()
        n = self.p["vars"]
        return InverseSystem(n, [DualPolynomial.parse(g, n) for g in self.p["generators"]])

    @cached_property
    def ideals(self) -> dict:
        named: dict = {}
        for key, spec in self.p.get("ideals", {}).items():
            named[key] = _ideal_from_spec(spec, named)
        return named

    def ideal(self, name: str | None = None) -> FiniteIdeal:
        if name is not None:
            return self.ideals[name]
        return self.main_ideal

    @cached_property
    def main_ideal(self) -> FiniteIdeal:
        if self.fx.kind == "ideal":
            return next(iter(self.ideals.values()))
        I = FiniteIdeal.annihilator(self.system)
        for pt in self.p.get("intersect_points", []):
            I = intersect(I, FiniteIdeal.point(pt))
        return I

    # matrices
    def tuple_at(self, lam=None) -> CommutingTuple:
        p = self.p
        if "recipe" in p:
            return builders.tuple_at(p["recipe"], lam if lam is not None else p.get("lambda", "0"))
        return self.tuple

    @cached_property
    def tuple(self) -> CommutingTuple:
        p = self.p
        if self.fx.kind in ("inverse_system", "ideal", "standard_form"):
            return self.main_ideal.quotient.to_tuple()
        if "recipe" in p:
            return builders.tuple_at(p["recipe"], p.get("lambda", "0"))
        if "socle_example" in p:
            return builders.socle_example(*p["socle_example"])
        if "blocks" in p:
            return CommutingTuple(_tuple_from_blocks(p["blocks"]), check=False)
        return CommutingTuple([Matrix(m) for m in p["matrices"]], check=False)

    @cached_property
    def directions(self) -> list[Matrix]:
        spec = self.p["deformation"]
        d = self.tuple.d
        if "units" in spec:
            return [builders.unit_matrix(d, [tuple(x) for x in pairs]) for pairs in spec["units"]]
        return _tuple_from_blocks(spec["blocks"])

    def deformed(self, lam) -> list[Matrix]:
        lam = as_fraction(lam)
        return [a + x.scale(lam) for a, x in zip(self.tuple, self.directions)]

    # ray data
    @cached_property
    def standard_form(self) -> StandardForm:
        return StandardForm.from_json(self.p)

    @cached_property
    def ray(self):
        return ray_decompose(self.main_ideal, 0)


# ---------------------------------------------------------------- checks

def _polys(texts, n, cls=OperatorPolynomial):
    return [cls.parse(t, n) for t in texts]


def _c_hilbert_function(s: Subject, ideal=None):
    if ideal is not None:
        return list(local_hilbert_function(s.ideal(ideal)))
    return list(hilbert_function(s.system))


def _c_hf_at_support(s: Subject, ideal=None):
    I = s.ideal(ideal)
    q = I.quotient
    # move the support to the origin first: the quotient of a point is one-dimensional
    shift = [-q.matrices[i][0, 0] for i in range(I.nvars)] if q.dim == 1 else None
    if shift is None:
        raise ValueError("support is not a single reduced point")
    return list(local_hilbert_function(translate(I, shift)))


def _c_colength(s: Subject, ideal=None):
    return colength(s.ideal(ideal))


def _c_local_hf(s: Subject, ideal=None):
    return list(local_hilbert_function(s.ideal(ideal)))


def _c_socle_type(s: Subject):
    return {str(k): v for k, v in socle_type(s.system).items()}


def _c_socle_dim(s: Subject, ideal=None):
    if ideal is not None:
        return socle_dim(s.ideal(ideal).quotient.to_tuple())
    return socle_dim(s.tuple)


def _c_initial_equals(s: Subject, ideal, weight, other):
    return equals(initial_ideal(s.ideal(ideal), weight), s.ideal(other))


def _c_hilb_tangent(s: Subject, ideal=None):
    t = s.ideal(ideal).quotient.to_tuple() if ideal is not None else s.tuple
    return hilb_tangent_dim(t)


def _c_constraint_rank(s: Subject, quadrics, tails):
    n = s.system.nvars
    return builders.syzygy_constraint_rank(s.main_ideal, _polys(quadrics, n), _polys(tails, n))


def _c_apolar_piece_equals(s: Subject, degree, polys):
    piece = apolar_ideal_piece(s.system, degree)
    other = PolySpace(OperatorPolynomial, s.system.nvars, piece.monomials, _polys(polys, s.system.nvars))
    return piece == other


def _c_apolar_piece_dim(s: Subject, degree):
    return apolar_ideal_piece(s.system, degree).dim


def _c_apolar_ideal_equals(s: Subject, generators):
    n = s.system.nvars
    return equals(FiniteIdeal(n, _polys(generators, n)), s.main_ideal)


def _c_min_gens(s: Subject, degree):
    return minimal_generators_in_degree(s.system, degree)


def _c_essential(s: Subject):
    return essential_variable_count(s.system.generators[0])


def _c_commutes(s: Subject):
    return check_commute(s.tuple.matrices)


def _c_kernel_profile(s: Subject):
    return list(kernel_profile(s.tuple))


def _c_tangent_dim(s: Subject, shape=None):
    sh = builders.block_shape(s.p["sizes"], shape) if shape else None
    return tangent_space_dim(s.tuple, sh)


def _c_principal(s: Subject, d, n):
    return principal_component_dim(d, n)


def _c_limit_poly(s: Subject):
    return builders.limit_is_polynomial(s.p["recipe"])


def _c_char_squarefree(s: Subject, index, **kw):
    m = s.tuple_at(kw.get("lambda"))[index - 1]
    return is_squarefree(char_poly(m))


def _c_char_degree(s: Subject, index, **kw):
    return char_poly(s.tuple_at(kw.get("lambda"))[index - 1]).degree


def _c_blocks_vanish(s: Subject, blocks):
    return builders.blocks_vanish(s.tuple, s.p["sizes"], blocks)


def _c_projected_rank(s: Subject, shape, target):
    sizes = s.p["sizes"]
    return builders.projected_tangent_rank(s.tuple, builders.block_shape(sizes, shape),
                                           builders.block_shape(sizes, target))


def _projected(s: Subject, target):
    sh = builders.block_shape(s.p["sizes"], target)
    return builders.project_tuple(s.tuple, sh), sh


def _c_projected_dim(s: Subject, target):
    t, sh = _projected(s, target)
    return tangent_space_dim(t, sh)


def _c_projected_profile(s: Subject, target):
    t, _ = _projected(s, target)
    return list(kernel_profile(t))


def _c_deform_commutes(s: Subject, **kw):
    return check_commute(s.deformed(kw["lambda"]))


def _c_deform_kernel(s: Subject, index, power, **kw):
    return power_kernel_dim(s.deformed(kw["lambda"])[index - 1], power)


def _c_ray_order(s: Subject):
    return s.ray.nu


def _c_ray_witness(s: Subject):
    return str(s.ray.q)


def _c_ray_bound(s: Subject):
    sf = s.standard_form
    return sf.c + 1 <= s.ray.nu <= sf.s


def _c_alpha_kills_g(s: Subject):
    sf = s.standard_form
    return not contract_monomial(unit_monomial(sf.nvars, 0, s.ray.nu - 1), sf.g)


def _c_fiber_identity(s: Subject, lambdas):
    return all(equals(upper_ray_fiber(s.ray, lam), rayflat_predicted_fiber(s.standard_form, lam))
               for lam in map(Fraction, lambdas))


def _c_flat(s: Subject, lambdas):
    return [colength(upper_ray_fiber(s.ray, Fraction(lam))) for lam in lambdas]


def _c_lower(s: Subject, lambdas):
    return [colength(lower_ray_fiber(s.ray, Fraction(lam))) for lam in lambdas]


def _c_shifted(s: Subject):
    return list(shifted_hilbert_function(s.standard_form))


CHECKS: dict[str, Callable[..., Any]] = {
    "hilbert_function": _c_hilbert_function,
    "hilbert_function_at_support": _c_hf_at_support,
    "colength": _c_colength,
    "local_hilbert_function": _c_local_hf,
    "socle_type": _c_socle_type,
    "socle_dim": _c_socle_dim,
    "initial_ideal_equals": _c_initial_equals,
    "hilb_tangent_dim": _c_hilb_tangent,
    "constraint_rank": _c_constraint_rank,
    "apolar_piece_equals": _c_apolar_piece_equals,
    "apolar_piece_dim": _c_apolar_piece_dim,
    "apolar_ideal_equals": _c_apolar_ideal_equals,
    "minimal_generators": _c_min_gens,
    "essential_variables": _c_essential,
    "commutes": _c_commutes,
    "kernel_profile": _c_kernel_profile,
    "tangent_dim": _c_tangent_dim,
    "principal_component_dim": _c_principal,
    "limit_is_polynomial": _c_limit_poly,
    "char_poly_squarefree": _c_char_squarefree,
    "char_poly_degree": _c_char_degree,
    "blocks_vanish": _c_blocks_vanish,
    "projected_tangent_rank": _c_projected_rank,
    "projected_tangent_dim": _c_projected_dim,
    "informational_kernel_profile_projected": _c_projected_profile,
    "deformation_commutes": _c_deform_commutes,
    "deformed_power_kernel_dim": _c_deform_kernel,
    "ray_order": _c_ray_order,
    "ray_witness": _c_ray_witness,
    "ray_order_bound": _c_ray_bound,
    "alpha_kills_g": _c_alpha_kills_g,
    "fiber_identity": _c_fiber_identity,
    "flat_colengths": _c_flat,
    "lower_colengths": _c_lower,
    "shifted_hilbert_function": _c_shifted,
}


# ---------------------------------------------------------------- running

@dataclass
class CheckResult:
    fixture: str
    check: str
    expected: Any
    computed: Any
    status: str  # PASS, FAIL, INFO, ERROR
    anchor: str
    seconds: float = 0.0
    error: str | None = None

    def to_json(self, timing: bool = True) -> dict:
        d = {"fixture": self.fixture, "check": self.check, "expected": self.expected,
             "computed": self.computed, "status": self.status, "anchor": self.anchor}
        if self.error:
            d["error"] = self.error
        if timing:
            d["seconds"] = round(self.seconds, 4)
        return d


@dataclass
class FixtureReport:
    fixture: Fixture
    results: list = field(default_factory=list)
    error: str | None = None

    @property
    def status(self) -> str:
        if self.error or any(r.status == "ERROR" for r in self.results):
            return "ERROR"
        if any(r.status == "FAIL" for r in self.results):
            return "DISCREPANCY" if self.fixture.discrepancy else "FAIL"
        return "PASS"

    @property
    def seconds(self) -> float:
        return sum(r.seconds for r in self.results)


def _normalize(v):
    if isinstance(v, tuple):
        return [_normalize(x) for x in v]
    if isinstance(v, list):
        return [_normalize(x) for x in v]
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v)
    return v


def run_fixture(fx: Fixture) -> FixtureReport:
    rep = FixtureReport(fx)
    subject = Subject(fx)
    for c in fx.checks:
        name, expected, args = c["name"], c.get("expected"), c.get("args", {})
        t0 = time.perf_counter()
        fn = CHECKS.get(name)
        try:
            if fn is None:
                raise ValueError(f"unknown check {name!r}")
            computed = _normalize(fn(subject, **args))
            if expected is None:
                status = "INFO"
            else:
                status = "PASS" if computed == expected else "FAIL"
            err = None
        except (FiniteAlgError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
            computed, status, err = None, "ERROR", f"{type(exc).__name__}: {exc}"
        rep.results.append(CheckResult(fx.id, name, expected, computed, status, c["anchor"],
                                       time.perf_counter() - t0, err))
    return rep


@dataclass
class VerificationReport:
    fixtures: list  # FixtureReport, ordered by fixture id

    @property
    def passed(self) -> bool:
        return all(f.status == "PASS" for f in self.fixtures)

    def counts(self) -> dict:
        out: dict = {}
        for f in self.fixtures:
            out[f.status] = out.get(f.status, 0) + 1
        return out

    def to_json(self, timing: bool = True) -> dict:
        return {"passed": self.passed, "counts": self.counts(),
                "fixtures": [{"id": f.fixture.id, "status": f.status, "description": f.fixture.description,
                              **({"note": f.fixture.note} if f.fixture.note else {}),
                              **({"error": f.error} if f.error else {}),
                              **({"seconds": round(f.seconds, 4)} if timing else {}),
                              "checks": [r.to_json(timing) for r in f.results]}
                             for f in self.fixtures]}

    def to_tsv(self) -> str:
        lines = ["fixture\tcheck\tstatus\texpected\tcomputed\tseconds\tanchor"]
        for f in self.fixtures:
            for r in f.results:
                lines.append("\t".join([r.fixture, r.check, r.status, json.dumps(r.expected),
                                        json.dumps(r.computed), f"{r.seconds:.4f}", r.anchor]))
        return "\n".join(lines) + "\n"

    def table1_text(self) -> str:
        """Fixtures per cell of the components grid (n = 4, 5, 6+ by d = 8, 9, 10) with status."""
        cells: dict = {}
        for f in self.fixtures:
            t = f.fixture.table1
            if t:
                cells.setdefault((min(t["n"], 6), t["d"]), []).append(f)
        header = f"{'':8}" + "".join(f"{'d = ' + str(d):<44}" for d in (8, 9, 10))
        lines = [header]
        for n in (4, 5, 6):
            label = f"n = {n}" if n < 6 else "n >= 6"
            rows = [sorted(cells.get((n, d), []), key=lambda f: f.fixture.id) for d in (8, 9, 10)]
            height = max(len(r) for r in rows) or 1
            for k in range(height):
                parts = []
                for r in rows:
                    if k < len(r):
                        f = r[k]
                        parts.append(f"{f.fixture.table1['component'][:22]:<23}{f.status:<12}"[:43].ljust(44))
                    else:
                        parts.append(" " * 44)
                lines.append(f"{label if k == 0 else '':8}" + "".join(parts))
        return "\n".join(lines) + "\n"

    def summary_text(self) -> str:
        lines = []
        for f in self.fixtures:
            lines.append(f"{f.status:<12}{f.fixture.id:<26}{f.seconds:8.3f}s")
            for r in f.results:
                if r.status != "PASS":
                    extra = f" ({r.error})" if r.error else ""
                    lines.append(f"    {r.status:<6}{r.check}: expected {json.dumps(r.expected)}, "
                                 f"computed {json.dumps(r.computed)}{extra}")
            if f.status == "DISCREPANCY" and f.fixture.note:
                lines.append(f"    note: {f.fixture.note}")
        c = self.counts()
        lines.append("total: " + ", ".join(f"{k} {v}" for k, v in sorted(c.items())))
        return "\n".join(lines) + "\n"


def run_all(fixtures: list[Fixture] | None = None) -> VerificationReport:
    fixtures = load_fixtures() if fixtures is None else fixtures
    reports = []
    for fx in sorted(fixtures, key=lambda f: f.id):
        try:
            reports.append(run_fixture(fx))
        except Exception as exc:  # a broken fixture must not stop the run
            reports.append(FixtureReport(fx, [], f"{type(exc).__name__}: {exc}"))
    return VerificationReport(reports)
