"""Integer multiplicity vectors over one of the ordered bases."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from .catalog import AlgebraParams, ModuleLabel, _basis, basis_index


@dataclass(frozen=True)
class IntVector:
    """Sparse integer vector over ``enumerate_basis(params, which)``.

    ``coords`` holds ``(index, multiplicity)`` pairs in basis order with
    zeros dropped, so equal vectors compare equal.
    """

    params: AlgebraParams
    which: str
    coords: tuple[tuple[int, int], ...]

    @classmethod
    def from_indices(cls, params: AlgebraParams, which: str, data: Mapping[int, int]) -> IntVector:
        return cls(params, which, tuple(sorted((int(i), int(v)) for i, v in data.items() if v)))

    @classmethod
    def from_labels(cls, params: AlgebraParams, which: str, data: Mapping[ModuleLabel, int]) -> IntVector:
        index = basis_index(params, which)
        acc: dict[int, int] = {}
        for label, mult in data.items():
            i = index[label]
            acc[i] = acc.get(i, 0) + mult
        return cls.from_indices(params, which, acc)

    @classmethod
    def unit(cls, params: AlgebraParams, which: str, label: ModuleLabel) -> IntVector:
        return cls.from_labels(params, which, {label: 1})

    @property
    def basis(self) -> tuple:
        return _basis(self.params, self.which)

    def as_index_dict(self) -> dict[int, int]:
        return dict(self.coords)

    def items(self) -> Iterator[tuple[ModuleLabel, int]]:
        basis = self.basis
        for i, mult in self.coords:
            yield basis[i], mult

    def __getitem__(self, label: ModuleLabel) -> int:
        i = basis_index(self.params, self.which).get(label)
        return dict(self.coords).get(i, 0) if i is not None else 0

    def __len__(self):
        return len(self.coords)

    def __bool__(self):
        return bool(self.coords)

    def __add__(self, other: IntVector) -> IntVector:
        acc = self.as_index_dict()
        for i, v in other.coords:
            acc[i] = acc.get(i, 0) + v
        return IntVector.from_indices(self.params, self.which, acc)

    def __sub__(self, other: IntVector) -> IntVector:
        return self + other.scale(-1)

    def scale(self, k: int) -> IntVector:
        return IntVector.from_indices(self.params, self.which, {i: k * v for i, v in self.coords})

    @property
    def total(self) -> int:
        return sum(v for _, v in self.coords)

    def is_nonnegative(self) -> bool:
        return all(v > 0 for _, v in self.coords)

    def __str__(self):
        return format_terms((str(label), mult) for label, mult in self.items())

    def to_json(self) -> dict[str, int]:
        return {str(label): mult for label, mult in self.items()}


def format_terms(terms) -> str:
    parts = []
    for text, mult in terms:
        if mult == 1:
            parts.append(text)
        else:
            parts.append(f"{mult}*{text}")
    if not parts:
        return "0"
    out = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            out += " - " + part[1:]
        else:
            out += " + " + part
    return out
