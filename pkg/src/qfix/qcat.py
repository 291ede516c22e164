"""Q-categories, Q-functors and distributors.

A :class:`QCategory` is either finite (an object list with a hom matrix) or
rule-based (a hom function on an arbitrary object type, for continuum
examples such as the real line).  Rule-based categories carry ``probes``, a
finite set used for sampled axiom checks, and optionally a ``search_hint``,
the finite candidate set over which presheaves are tabulated and
representing objects are searched.

Distributors are always stored as finite tables over the carriers of their
source and target; for a rule-based category that carrier is its search
hint.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

from .quantale import Quantale, UnsupportedError
from .report import Report

__all__ = [
    "QCategory",
    "QFunctor",
    "Distributor",
    "unit_category",
    "identity_distributor",
    "check_category",
    "check_functor",
    "check_distributor",
    "compose_distributors",
    "distributor_leq",
    "check_adjunction",
    "lower_star",
    "upper_star",
    "functor_leq",
    "functor_iso",
    "object_leq",
    "object_iso",
    "is_representable",
    "representing_object",
    "is_symmetric",
    "homs_nonbottom",
]


class QCategory:
    """Objects with a Q-valued hom.  Use :meth:`finite` or :meth:`from_rule`."""

    def __init__(
        self,
        quantale: Quantale,
        hom: Callable[[Any, Any], Any],
        *,
        objects: Optional[Sequence] = None,
        probes: Optional[Sequence] = None,
        search_hint: Optional[Sequence] = None,
        name: str = "",
    ):
        self.quantale = quantale
        self._hom = hom
        self.objects = None if objects is None else tuple(objects)
        self.probes = tuple(probes) if probes is not None else self.objects
        self.search_hint = tuple(search_hint) if search_hint is not None else None
        self.name = name

    @classmethod
    def finite(cls, quantale: Quantale, objects: Sequence, matrix: Sequence[Sequence], name: str = "") -> "QCategory":
        objects = tuple(objects)
        if len(set(objects)) != len(objects):
            raise ValueError("object labels must be distinct")
        if len(matrix) != len(objects) or any(len(row) != len(objects) for row in matrix):
            raise ValueError("hom matrix must be square and match the object list")
        table = tuple(tuple(quantale.validate(v) for v in row) for row in matrix)
        index = {x: i for i, x in enumerate(objects)}

        def hom(x, y):
            return table[index[x]][index[y]]

        cat = cls(quantale, hom, objects=objects, name=name)
        cat._matrix = table
        cat._index = index
        return cat

    @classmethod
    def from_rule(
        cls,
        quantale: Quantale,
        hom: Callable[[Any, Any], Any],
        probes: Sequence = (),
        search_hint: Optional[Sequence] = None,
        name: str = "",
    ) -> "QCategory":
        return cls(quantale, hom, probes=probes, search_hint=search_hint, name=name)

    @property
    def is_finite(self) -> bool:
        return self.objects is not None

    @property
    def matrix(self) -> tuple:
        if not self.is_finite:
            raise UnsupportedError("rule-based category has no hom matrix")
        return self._matrix

    def index(self, x) -> int:
        return self._index[x]

    def hom(self, x, y):
        return self._hom(x, y)

    def __contains__(self, x) -> bool:
        if self.is_finite:
            try:
                return x in self._index
            except TypeError:
                return False
        return True

    def carrier(self) -> tuple:
        """The finite object set quantified over: all objects, or the search hint."""
        if self.is_finite:
            return self.objects
        if self.search_hint is None:
            raise UnsupportedError(f"category {self.name or '<rule>'} has no finite carrier or search hint")
        return self.search_hint

    def sample(self) -> tuple:
        """Objects used for axiom checks: the carrier if finite, else the probes."""
        return self.objects if self.is_finite else (self.probes or ())

    def __repr__(self):
        kind = f"{len(self.objects)} objects" if self.is_finite else "rule-based"
        return f"QCategory({self.name or '?'}, {self.quantale.name}, {kind})"

    def with_search_hint(self, hint: Sequence) -> "QCategory":
        return QCategory(
            self.quantale, self._hom, objects=self.objects, probes=self.probes, search_hint=hint, name=self.name
        )


_UNIT_OBJECT = "*"


def unit_category(q: Quantale) -> QCategory:
    """The one-object category with ``hom(*, *) = 1``."""
    return QCategory.finite(q, (_UNIT_OBJECT,), [[q.unit]], name="1")


@dataclass(frozen=True)
class QFunctor:
    source: QCategory
    target: QCategory
    fmap: Any  # callable or mapping

    def __post_init__(self):
        if self.source.quantale is not self.target.quantale:
            raise ValueError("functor between categories over different quantales")

    def __call__(self, x):
        if isinstance(self.fmap, Mapping):
            return self.fmap[x]
        return self.fmap(x)

    @classmethod
    def identity(cls, c: QCategory) -> "QFunctor":
        return cls(c, c, lambda x: x)

    @classmethod
    def constant(cls, source: QCategory, target: QCategory, u) -> "QFunctor":
        return cls(source, target, lambda x: u)


def as_map(f) -> Callable:
    if isinstance(f, Mapping):
        return f.__getitem__
    return f


@dataclass(frozen=True)
class Distributor:
    """``Phi: source -|-> target`` tabulated as ``Phi(y, x)``, ``y`` in target, ``x`` in source."""

    source: QCategory
    target: QCategory
    rows: tuple
    cols: tuple
    matrix: tuple

    @classmethod
    def tabulate(cls, source: QCategory, target: QCategory, entry: Callable[[Any, Any], Any]) -> "Distributor":
        q = source.quantale
        rows, cols = target.carrier(), source.carrier()
        m = tuple(tuple(q.validate(entry(y, x)) for x in cols) for y in rows)
        return cls(source, target, rows, cols, m)

    @property
    def quantale(self) -> Quantale:
        return self.source.quantale

    def __call__(self, y, x):
        return self.matrix[self.rows.index(y)][self.cols.index(x)]

    @property
    def is_presheaf(self) -> bool:
        return len(self.cols) == 1 and self.source.name == "1"

    @property
    def is_copresheaf(self) -> bool:
        return len(self.rows) == 1 and self.target.name == "1"

    def column(self) -> tuple:
        """Values of a presheaf in carrier order."""
        return tuple(r[0] for r in self.matrix)


def identity_distributor(c: QCategory) -> Distributor:
    """The hom predicate of ``c`` as a distributor ``c -|-> c``."""
    return Distributor.tabulate(c, c, c.hom)


# ---------------------------------------------------------------------------
# axiom checks


def check_category(c: QCategory, sample: Optional[Sequence] = None) -> Report:
    """Composition ``C(x,y)*C(y,z) <= C(x,z)`` and identity ``1 <= C(x,x)``."""
    q = c.quantale
    objs = tuple(sample) if sample is not None else c.sample()
    rep = Report(f"category axioms ({c.name or q.name})")
    if not c.is_finite or sample is not None:
        rep.note(f"checked on {len(objs)} sampled objects only")
    else:
        rep.note("exhaustive over the finite carrier")
    for x in objs:
        if not q.leq(q.unit, c.hom(x, x)):
            rep.fail("identity", x, detail=f"hom(x,x) = {c.hom(x, x)!r}")
    for x, y, z in product(objs, repeat=3):
        lhs = q.tensor(c.hom(x, y), c.hom(y, z))
        if not q.leq(lhs, c.hom(x, z)):
            rep.fail("composition", x, y, z, detail=f"C(x,y)*C(y,z) = {lhs!r} not below C(x,z) = {c.hom(x, z)!r}")
    return rep


def check_functor(f: QFunctor, sample: Optional[Sequence] = None) -> Report:
    """Functoriality ``A(x', x) <= B(Fx', Fx)`` on all sampled pairs."""
    q = f.source.quantale
    objs = tuple(sample) if sample is not None else f.source.sample()
    rep = Report("functor axioms")
    if not f.source.is_finite or sample is not None:
        rep.note(f"checked on {len(objs)} sampled objects only")
    for x2, x in product(objs, repeat=2):
        a, b = f.source.hom(x2, x), f.target.hom(f(x2), f(x))
        if not q.leq(a, b):
            rep.fail("functoriality", x2, x, detail=f"A(x',x) = {a!r} not below B(fx',fx) = {b!r}")
    return rep


def check_distributor(phi: Distributor) -> Report:
    """Action condition ``D(y', y) * Phi(y, x) * C(x, x') <= Phi(y', x')``."""
    q = phi.quantale
    D, C = phi.target, phi.source
    rep = Report("distributor action")
    idx_r = {y: i for i, y in enumerate(phi.rows)}
    idx_c = {x: i for i, x in enumerate(phi.cols)}
    for y2, y, x, x2 in product(phi.rows, phi.rows, phi.cols, phi.cols):
        lhs = q.tensor(q.tensor(D.hom(y2, y), phi.matrix[idx_r[y]][idx_c[x]]), C.hom(x, x2))
        if not q.leq(lhs, phi.matrix[idx_r[y2]][idx_c[x2]]):
            rep.fail("action", y2, y, x, x2)
    return rep


# ---------------------------------------------------------------------------
# distributor algebra


def compose_distributors(psi: Distributor, phi: Distributor) -> Distributor:
    """``(psi o phi)(z, x) = join_y psi(z, y) * phi(y, x)`` for ``phi: A -|-> B``, ``psi: B -|-> C``."""
    q = phi.quantale
    if psi.quantale is not q:
        raise ValueError("distributors over different quantales")
    if tuple(psi.cols) != tuple(phi.rows):
        raise ValueError("middle carriers do not match")
    m = tuple(
        tuple(
            q.join([q.tensor(psi.matrix[k][j], phi.matrix[j][i]) for j in range(len(phi.rows))])
            for i in range(len(phi.cols))
        )
        for k in range(len(psi.rows))
    )
    return Distributor(phi.source, psi.target, psi.rows, phi.cols, m)


def _inclusion(q: Quantale, lower: Sequence[Sequence], upper: Sequence[Sequence], rows, cols):
    """Entrywise ``lower <= upper``: violations plus the enriched inclusion degree."""
    bad = []
    degree = q.top
    for i, j in product(range(len(rows)), range(len(cols))):
        a, b = lower[i][j], upper[i][j]
        if not q.leq(a, b):
            bad.append((rows[i], cols[j], a, b))
        degree = q.meet([degree, q.residuate(a, b)])
    return bad, degree


def distributor_leq(phi: Distributor, psi: Distributor) -> bool:
    bad, _ = _inclusion(phi.quantale, phi.matrix, psi.matrix, phi.rows, phi.cols)
    return not bad


def check_adjunction(phi: Distributor, psi: Distributor) -> Report:
    """``phi -| psi`` for ``phi: A -|-> B``, ``psi: B -|-> A``.

    The unit inequality is ``A <= psi o phi`` and the counit ``phi o psi <= B``.
    ``data`` holds each side's inclusion degree ``meet (lhs -> rhs)``, which is
    above the quantale unit exactly when that side holds; failing entries are
    the violations.
    """
    q = phi.quantale
    A, B = phi.source, phi.target
    rep = Report("adjunction")
    unit_side = compose_distributors(psi, phi)
    a_hom = [[A.hom(x, y) for y in unit_side.cols] for x in unit_side.rows]
    bad, deg = _inclusion(q, a_hom, unit_side.matrix, unit_side.rows, unit_side.cols)
    for w in bad:
        rep.fail("unit", *w)
    rep.data["unit_defect"] = deg
    counit_side = compose_distributors(phi, psi)
    b_hom = [[B.hom(x, y) for y in counit_side.cols] for x in counit_side.rows]
    bad, deg = _inclusion(q, counit_side.matrix, b_hom, counit_side.rows, counit_side.cols)
    for w in bad:
        rep.fail("counit", *w)
    rep.data["counit_defect"] = deg
    return rep


def lower_star(f: QFunctor) -> Distributor:
    """``F_*(b, a) = B(b, Fa)``, a distributor ``A -|-> B``."""
    return Distributor.tabulate(f.source, f.target, lambda b, a: f.target.hom(b, f(a)))


def upper_star(f: QFunctor) -> Distributor:
    """``F^*(a, b) = B(Fa, b)``, a distributor ``B -|-> A``."""
    return Distributor.tabulate(f.target, f.source, lambda a, b: f.target.hom(f(a), b))


# ---------------------------------------------------------------------------
# orders


def functor_leq(f: QFunctor, g: QFunctor) -> bool:
    """``F <= G`` iff ``1 <= B(Fa, Ga)`` for every object ``a``."""
    q = f.target.quantale
    return all(q.leq(q.unit, f.target.hom(f(a), g(a))) for a in f.source.carrier())


def functor_iso(f: QFunctor, g: QFunctor) -> bool:
    return functor_leq(f, g) and functor_leq(g, f)


def object_leq(c: QCategory, x, y) -> bool:
    q = c.quantale
    return q.leq(q.unit, c.hom(x, y))


def object_iso(c: QCategory, x, y) -> bool:
    return object_leq(c, x, y) and object_leq(c, y, x)


def is_symmetric(c: QCategory, sample: Optional[Iterable] = None) -> bool:
    q = c.quantale
    objs = tuple(sample) if sample is not None else c.sample()
    return all(q.eq(c.hom(x, y), c.hom(y, x)) for x, y in product(objs, repeat=2))


def homs_nonbottom(c: QCategory, sample: Optional[Iterable] = None) -> bool:
    q = c.quantale
    objs = tuple(sample) if sample is not None else c.sample()
    return not any(q.is_bottom(c.hom(x, y)) for x, y in product(objs, repeat=2))


# ---------------------------------------------------------------------------
# representability


def _matches(q, values, reference) -> bool:
    return all(q.eq(a, b) for a, b in zip(values, reference))


def is_representable(c: QCategory, phi: Distributor):
    """Return ``u`` with ``phi = C(-, u)`` (presheaf) or ``phi = C(u, -)``
    (copresheaf) entrywise within tolerance, else ``None``.

    Ties go to the first match in carrier order.
    """
    q = c.quantale
    carrier = c.carrier()
    if phi.is_presheaf:
        values = phi.column()
        points = phi.rows
        for u in carrier:
            if _matches(q, values, [c.hom(y, u) for y in points]):
                return u
        return None
    if phi.is_copresheaf:
        values = phi.matrix[0]
        points = phi.cols
        for u in carrier:
            if _matches(q, values, [c.hom(u, y) for y in points]):
                return u
        return None
    raise ValueError("expected a presheaf 1 -|-> C or a copresheaf C -|-> 1")


def representing_object(c: QCategory, phi: Distributor, psi: Distributor):
    """First ``u`` representing both ``phi = C(-, u)`` and ``psi = C(u, -)``."""
    q = c.quantale
    col, row = phi.column(), psi.matrix[0]
    for u in c.carrier():
        if _matches(q, col, [c.hom(y, u) for y in phi.rows]) and _matches(
            q, row, [c.hom(u, y) for y in psi.cols]
        ):
            return u
    return None
