"""Spaces built from catalog atoms by products and powers.

An atom carries its declared homological and homotopical mixed Hodge
polynomials. Products multiply the homological polynomials and add the
homotopical ones; powers do the same n times. Nothing here computes a mixed
Hodge structure from geometry; atom data is taken as given.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from . import poly
from .parsing import ParseError, parse_space_ast
from .poly import MHPolynomial, UniPoly

__all__ = [
    "CatalogError",
    "UnknownAtomError",
    "SpaceAtom",
    "Space",
    "Atom",
    "Product",
    "Power",
    "Catalog",
    "CatalogFile",
    "point",
    "projective_space",
    "sphere",
    "product",
    "power",
    "mh",
    "mh_pi",
    "poincare",
    "poincare_pi",
    "euler",
    "euler_pi",
    "parse_space_expr",
    "load_catalog",
]

EXTRAPOLATED_NOTE = "homotopical Hodge exponents extrapolated from the P1 case"
SPHERE_NOTE = "Hodge exponents are placeholders (0, 0); only the t-specialization is meaningful"


class CatalogError(ValueError):
    """Atom data violates an invariant, or a catalog file is malformed."""


class UnknownAtomError(CatalogError):
    def __init__(self, name: str, available: Iterable[str], offset: int | None = None):
        self.name = name
        self.available = list(available)
        self.offset = offset
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"unknown atom {name!r}{where}; available: {', '.join(self.available)}")


@dataclass(frozen=True)
class SpaceAtom:
    name: str
    mh: MHPolynomial
    mh_pi: MHPolynomial
    hodge_graded: bool = True
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        stray = [e for e, _ in self.mh.items() if e[0] == 0 and e != (0, 0, 0)]
        if self.mh.coeff(0, 0, 0) != 1 or stray:
            raise CatalogError(f"atom {self.name!r}: mh must have constant term exactly 1")
        bad = [e for e, _ in self.mh_pi.items() if e[0] < 2]
        if bad:
            raise CatalogError(
                f"atom {self.name!r}: mh_pi has terms in degree < 2 {bad}; only simply connected "
                "spaces are supported")

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "hodge_graded": self.hodge_graded,
            "mh": self.mh.to_records(),
            "mh_pi": self.mh_pi.to_records(),
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


class Space:
    """Expression tree node. Polynomials are computed lazily and cached per node."""

    def atoms(self) -> Iterator[SpaceAtom]:
        raise NotImplementedError

    @cached_property
    def hodge_graded(self) -> bool:
        """False when some atom only has trustworthy t-specialized data."""
        return all(a.hodge_graded for a in self.atoms())

    @cached_property
    def notes(self) -> tuple[str, ...]:
        seen = []
        for a in self.atoms():
            for n in a.notes:
                note = f"{a.name}: {n}"
                if note not in seen:
                    seen.append(note)
        return tuple(seen)


@dataclass(frozen=True)
class Atom(Space):
    atom: SpaceAtom

    def atoms(self):
        yield self.atom

    @cached_property
    def mh(self) -> MHPolynomial:
        return self.atom.mh

    @cached_property
    def mh_pi(self) -> MHPolynomial:
        return self.atom.mh_pi

    def __str__(self) -> str:
        return self.atom.name


@dataclass(frozen=True)
class Product(Space):
    left: Space
    right: Space

    def atoms(self):
        yield from self.left.atoms()
        yield from self.right.atoms()

    @cached_property
    def mh(self) -> MHPolynomial:
        return poly.mul(self.left.mh, self.right.mh)

    @cached_property
    def mh_pi(self) -> MHPolynomial:
        return poly.add(self.left.mh_pi, self.right.mh_pi)

    def __str__(self) -> str:
        right = f"({self.right})" if isinstance(self.right, Product) else str(self.right)
        return f"{self.left} x {right}"


@dataclass(frozen=True)
class Power(Space):
    base: Space
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise CatalogError(f"power exponent must be >= 1, got {self.n!r}")

    def atoms(self):
        yield from self.base.atoms()

    @cached_property
    def mh(self) -> MHPolynomial:
        return poly.pow(self.base.mh, self.n)

    @cached_property
    def mh_pi(self) -> MHPolynomial:
        return poly.scale(self.base.mh_pi, self.n)

    def __str__(self) -> str:
        base = str(self.base) if isinstance(self.base, Atom) else f"({self.base})"
        return f"{base}^{self.n}"


# constructors


def point() -> Space:
    return Atom(SpaceAtom("pt", poly.ONE, poly.ZERO))


def projective_space(n: int) -> Space:
    """Complex projective n-space.

    Homology in degree 2j has Hodge type (j, j); the homotopy generators sit
    in degrees 2 and 2n + 1 with types (1, 1) and (n + 1, n + 1).
    """
    if not isinstance(n, int) or n < 1:
        raise CatalogError(f"projective space needs n >= 1, got {n!r}")
    mh_ = MHPolynomial({(2 * j, j, j): 1 for j in range(n + 1)})
    mh_pi_ = MHPolynomial({(2, 1, 1): 1, (2 * n + 1, n + 1, n + 1): 1})
    notes = (EXTRAPOLATED_NOTE,) if n > 1 else ()
    return Atom(SpaceAtom(f"P{n}", mh_, mh_pi_, True, notes))


def sphere(n: int) -> Space:
    if not isinstance(n, int) or n < 2:
        raise CatalogError(f"only simply connected spheres S<n> with n >= 2 are supported, got {n!r}")
    mh_ = MHPolynomial({(0, 0, 0): 1, (n, 0, 0): 1})
    pi = {(n, 0, 0): 1}
    if n % 2 == 0:
        pi[(2 * n - 1, 0, 0)] = 1
    return Atom(SpaceAtom(f"S{n}", mh_, MHPolynomial(pi), False, (SPHERE_NOTE,)))


def product(X: Space, Y: Space) -> Space:
    return Product(X, Y)


def power(X: Space, n: int) -> Space:
    return Power(X, n)


def mh(X: Space) -> MHPolynomial:
    return X.mh


def mh_pi(X: Space) -> MHPolynomial:
    return X.mh_pi


def poincare(X: Space) -> UniPoly:
    return poly.specialize_t(X.mh)


def poincare_pi(X: Space) -> UniPoly:
    return poly.specialize_t(X.mh_pi)


def euler(X: Space) -> int:
    return int(poincare(X)(-1))


def euler_pi(X: Space) -> int:
    return int(poincare_pi(X)(-1))


# catalog files and name resolution

_BUILTIN_NAME = re.compile(r"pt|P[0-9]+|S[0-9]+")


@dataclass
class CatalogFile:
    atoms: dict[str, SpaceAtom] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"spaces": [self.atoms[n].to_json() for n in sorted(self.atoms)]}


def load_catalog(data: bytes | str) -> CatalogFile:
    """Parse and validate a catalog JSON document."""
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CatalogError(f"malformed catalog JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("spaces"), list):
        raise CatalogError('catalog must be an object with a "spaces" list')
    out = CatalogFile()
    for i, entry in enumerate(doc["spaces"]):
        if not isinstance(entry, dict):
            raise CatalogError(f"entry {i} is not an object")
        name = entry.get("name")
        if not isinstance(name, str) or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise CatalogError(f"entry {i}: name must be an identifier, got {name!r}")
        if name in out.atoms:
            raise CatalogError(f"duplicate catalog name {name!r}")
        graded = entry.get("hodge_graded", True)
        if not isinstance(graded, bool):
            raise CatalogError(f"entry {name!r}: hodge_graded must be a boolean")
        try:
            mh_ = MHPolynomial.from_records(entry.get("mh", []))
            mh_pi_ = MHPolynomial.from_records(entry.get("mh_pi", []))
        except (ValueError, TypeError) as exc:
            raise CatalogError(f"entry {name!r}: {exc}") from exc
        notes = tuple(str(n) for n in entry.get("notes", ()))
        out.atoms[name] = SpaceAtom(name, mh_, mh_pi_, graded, notes)
    return out


class Catalog:
    """Name resolution: builtin families plus atoms registered from files."""

    def __init__(self, files: Iterable[CatalogFile] = ()):
        self._extra: dict[str, SpaceAtom] = {}
        for f in files:
            self.register(f)

    def register(self, cat: CatalogFile) -> None:
        for name, atom in cat.atoms.items():
            if _BUILTIN_NAME.fullmatch(name):
                raise CatalogError(f"catalog name {name!r} collides with a builtin atom")
            if name in self._extra:
                raise CatalogError(f"duplicate catalog name {name!r}")
            self._extra[name] = atom

    @property
    def names(self) -> list[str]:
        return ["pt", "P<n> (n >= 1)", "S<n> (n >= 2)"] + sorted(self._extra)

    def resolve(self, name: str, offset: int | None = None) -> Space:
        if name == "pt":
            return point()
        m = re.fullmatch(r"([PS])([0-9]+)", name)
        if m:
            n = int(m.group(2))
            try:
                return projective_space(n) if m.group(1) == "P" else sphere(n)
            except CatalogError as exc:
                where = f" at offset {offset}" if offset is not None else ""
                raise CatalogError(f"{exc}{where}") from exc
        if name in self._extra:
            return Atom(self._extra[name])
        raise UnknownAtomError(name, self.names, offset)

    def parse(self, text: str) -> Space:
        return parse_space_expr(text, self)


def parse_space_expr(text: str, catalog: Catalog | None = None) -> Space:
    """Parse e.g. ``"P1 x S3^2"`` into a Space.

    Raises ParseError for malformed text and CatalogError for unknown or
    invalid atoms.
    """
    catalog = catalog or Catalog()
    tree = parse_space_ast(text, catalog._extra.keys())

    def build(node) -> Space:
        kind = node[0]
        if kind == "atom":
            return catalog.resolve(node[1], node[2])
        if kind == "product":
            return Product(build(node[1]), build(node[2]))
        return Power(build(node[1]), node[2])

    return build(tree)


__all__ += ["ParseError"]
