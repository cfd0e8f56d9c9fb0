"""Finite vocabularies, interpretations, specifications and evaluations.

Every semantics in the package is decided by enumerating the objects defined
here, so all of them are finite and carry a fixed canonical order.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import NamedTuple

DEFAULT_STATE_CAP = 50_000_000

_state_cap = DEFAULT_STATE_CAP

REGULAR = "regular"
CONSTRAINT = "constraint"

Interpretation = frozenset  # frozenset[str] of the atoms assigned true


class StateCapExceeded(RuntimeError):
    """Raised when an enumeration would visit more states than allowed."""

    def __init__(self, size: int, cap: int):
        super().__init__(f"state space of {size} exceeds the cap of {cap}")
        self.size = size
        self.cap = cap


def get_state_cap() -> int:
    return _state_cap


def set_state_cap(cap: int) -> None:
    global _state_cap
    if cap < 1:
        raise ValueError("state cap must be positive")
    _state_cap = cap


def check_cap(size: int, cap: int | None = None) -> int:
    cap = _state_cap if cap is None else cap
    if size > cap:
        raise StateCapExceeded(size, cap)
    return size


@dataclass(frozen=True)
class Vocabulary:
    """Ordered finite set of atoms, each either regular or a constraint atom."""

    atoms: tuple[str, ...] = ()
    constraint_atoms: frozenset[str] = frozenset()
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "constraint_atoms", frozenset(self.constraint_atoms))
        index = {}
        for i, a in enumerate(self.atoms):
            if a in index:
                raise ValueError(f"duplicate atom {a!r} in vocabulary")
            index[a] = i
        unknown = self.constraint_atoms - index.keys()
        if unknown:
            raise ValueError(f"constraint atoms not in vocabulary: {sorted(unknown)}")
        object.__setattr__(self, "_index", index)

    @classmethod
    def of(cls, regular: Iterable[str] = (), constraint: Iterable[str] = ()) -> Vocabulary:
        regular, constraint = list(regular), list(constraint)
        return cls(tuple(regular + constraint), frozenset(constraint))

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __contains__(self, atom):
        return atom in self._index

    def index(self, atom: str) -> int:
        return self._index[atom]

    def kind(self, atom: str) -> str:
        return CONSTRAINT if atom in self.constraint_atoms else REGULAR

    @property
    def regular(self) -> frozenset[str]:
        return frozenset(self.atoms) - self.constraint_atoms

    @property
    def atom_set(self) -> frozenset[str]:
        return frozenset(self.atoms)

    def issubset(self, other: Vocabulary) -> bool:
        return all(a in other for a in self.atoms)

    def restrict(self, atoms: Iterable[str]) -> Vocabulary:
        keep = set(atoms)
        return Vocabulary(
            tuple(a for a in self.atoms if a in keep),
            self.constraint_atoms & keep,
        )

    def union(self, other: Vocabulary) -> Vocabulary:
        """Atoms of ``self`` followed by new atoms of ``other``.

        A kind clash (regular in one, constraint in the other) raises.
        """
        for a in other.atoms:
            if a in self and self.kind(a) != other.kind(a):
                raise ValueError(f"atom {a!r} is regular in one vocabulary and a constraint atom in another")
        extra = tuple(a for a in other.atoms if a not in self)
        return Vocabulary(self.atoms + extra, self.constraint_atoms | other.constraint_atoms)

    def mask(self, interp: Iterable[str]) -> int:
        """Bit mask of an interpretation: atom ``i`` is bit ``i``."""
        m = 0
        for a in interp:
            m |= 1 << self._index[a]
        return m

    def sorted_atoms(self, interp: Iterable[str]) -> list[str]:
        return sorted(interp, key=self._index.__getitem__)


class Evaluation(Mapping):
    """Immutable total assignment of integers to variables.

    Items keep the order in which they were given, which is the variable
    order of the owning specification when produced by enumeration.
    """

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, items: Iterable[tuple[str, int]] | Mapping[str, int] = ()):
        if isinstance(items, Mapping):
            items = items.items()
        self._items = tuple((str(k), int(v)) for k, v in items)
        self._map = dict(self._items)
        if len(self._map) != len(self._items):
            raise ValueError("duplicate variable in evaluation")
        self._hash = hash(frozenset(self._items))

    def __getitem__(self, var):
        return self._map[var]

    def __iter__(self):
        return (k for k, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Evaluation):
            return self._hash == other._hash and self._map == other._map
        if isinstance(other, Mapping):
            return self._map == dict(other)
        return NotImplemented

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in self._items)
        return f"Evaluation({inner})"

    def restrict(self, variables: Iterable[str]) -> Evaluation:
        return Evaluation((v, self._map[v]) for v in variables)


EMPTY_EVALUATION = Evaluation()


@dataclass(frozen=True)
class Specification:
    """Variables with explicit finite integer domains (sorted tuples)."""

    variables: tuple[str, ...] = ()
    domains: tuple[tuple[int, ...], ...] = ()
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        doms = tuple(tuple(sorted(set(int(x) for x in d))) for d in self.domains)
        object.__setattr__(self, "domains", doms)
        if len(self.variables) != len(doms):
            raise ValueError("one domain per variable is required")
        index = {}
        for i, v in enumerate(self.variables):
            if v in index:
                raise ValueError(f"duplicate variable {v!r}")
            if not doms[i]:
                raise ValueError(f"variable {v!r} has an empty domain")
            index[v] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def of(cls, domains: Mapping[str, Iterable[int]]) -> Specification:
        return cls(tuple(domains), tuple(tuple(d) for d in domains.values()))

    @classmethod
    def ranges(cls, **bounds: tuple[int, int]) -> Specification:
        """``Specification.ranges(x=(0, 2))`` gives x the domain {0, 1, 2}."""
        return cls.of({v: range(lo, hi + 1) for v, (lo, hi) in bounds.items()})

    def __len__(self):
        return len(self.variables)

    def __iter__(self):
        return iter(self.variables)

    def __contains__(self, var):
        return var in self._index

    def domain(self, var: str) -> tuple[int, ...]:
        return self.domains[self._index[var]]

    def domain_map(self) -> dict[str, tuple[int, ...]]:
        return dict(zip(self.variables, self.domains))

    def size(self) -> int:
        n = 1
        for d in self.domains:
            n *= len(d)
        return n

    def restrict(self, variables: Iterable[str]) -> Specification:
        keep = set(variables)
        unknown = keep - self._index.keys()
        if unknown:
            raise KeyError(f"unknown variables: {sorted(unknown)}")
        pairs = [(v, d) for v, d in zip(self.variables, self.domains) if v in keep]
        return Specification(tuple(v for v, _ in pairs), tuple(d for _, d in pairs))

    def union(self, other: Specification) -> Specification:
        """Variables of ``self`` then new ones of ``other``; shared domains must agree."""
        for v in other.variables:
            if v in self and self.domain(v) != other.domain(v):
                raise ValueError(f"variable {v!r} has different domains")
        extra = [(v, d) for v, d in zip(other.variables, other.domains) if v not in self]
        return Specification(
            self.variables + tuple(v for v, _ in extra),
            self.domains + tuple(d for _, d in extra),
        )

    def valid(self, nu: Mapping[str, int]) -> bool:
        return set(nu) == set(self.variables) and all(nu[v] in self.domain(v) for v in self.variables)

    def order_key(self, nu: Mapping[str, int]) -> tuple[int, ...]:
        """Position of ``nu`` in :func:`enumerate_evaluations` order, as a tuple."""
        return tuple(d.index(nu[v]) for v, d in zip(self.variables, self.domains))


class ExtendedInterpretation(NamedTuple):
    interpretation: frozenset
    evaluation: Evaluation


def enumerate_interpretations(vocab: Vocabulary, cap: int | None = None) -> Iterator[frozenset]:
    """All subsets of ``vocab``; atom ``i`` is bit ``i`` of an ascending counter."""
    n = len(vocab)
    check_cap(1 << n, cap)
    atoms = vocab.atoms
    for m in range(1 << n):
        yield frozenset(atoms[i] for i in range(n) if m >> i & 1)


def enumerate_evaluations(spec: Specification, cap: int | None = None) -> Iterator[Evaluation]:
    """Cartesian product of the domains, first variable varying slowest."""
    check_cap(spec.size(), cap)
    names = spec.variables
    for values in itertools.product(*spec.domains):
        yield Evaluation(zip(names, values))


def project_interpretation(interp: Iterable[str], sub: Vocabulary, vocab: Vocabulary | None = None) -> frozenset:
    """Drop the members of ``interp`` outside ``sub``.

    When the interpretation's own vocabulary is given, ``sub`` must be a
    sub-vocabulary of it.
    """
    if vocab is not None and not sub.issubset(vocab):
        raise ValueError("target is not a sub-vocabulary")
    return frozenset(interp) & sub.atom_set


def project_evaluation(nu: Mapping[str, int], variables: Iterable[str]) -> Evaluation:
    variables = list(variables)
    missing = [v for v in variables if v not in nu]
    if missing:
        raise KeyError(f"evaluation does not define {missing}")
    return Evaluation((v, nu[v]) for v in variables)
