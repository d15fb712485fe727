"""The shipped SKT examples, loaded through the public file parser."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .bismut import is_skt, torsion_three_form
from .errors import SKTError
from .fileio import parse_algebra
from .forms import AlternatingForm, parse_form
from .hermitian import HermitianTriple

NAMES = (
    "n4_abelian",
    "n6_abelian",
    "n8_nonabelian",
    "n6_nonabelian",
    "n10_nonabelian",
    "n12_nonabelian",
)


class UnknownEntry(SKTError, KeyError):
    def __str__(self):
        return self.args[0]


@dataclass
class CatalogEntry:
    name: str
    triple: HermitianTriple
    expected_c: AlternatingForm
    printed_c: AlternatingForm
    tags: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.triple.dim


def entry_text(name: str) -> str:
    if name not in NAMES:
        raise UnknownEntry(f"unknown catalog entry {name!r}; available: {', '.join(NAMES)}")
    return resources.files("sktnil").joinpath("data").joinpath(f"{name}.json").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def _load(name: str) -> CatalogEntry:
    T = parse_algebra(entry_text(name))
    prov = T.provenance
    expected = parse_form(T.dim, 3, prov["expected_c"])
    printed = parse_form(T.dim, 3, prov["printed_c"])
    tags = {
        "abelian_J": bool(prov["abelian_J"]),
        "irreducible": bool(prov.get("irreducible", False)),
        "dim": T.dim,
        "source": prov.get("source", ""),
    }
    entry = CatalogEntry(name, T, expected, printed, tags)
    _self_test(entry)
    return entry


def _self_test(entry: CatalogEntry) -> None:
    c = torsion_three_form(entry.triple)
    if c != entry.expected_c:
        raise SKTError(f"catalog entry {entry.name}: computed c {c} != stored {entry.expected_c}")
    if not is_skt(entry.triple).is_skt:  # both dc routes run inside
        raise SKTError(f"catalog entry {entry.name} is not SKT")
    if entry.triple.is_abelian_J() != entry.tags["abelian_J"]:
        raise SKTError(f"catalog entry {entry.name}: abelian_J tag is wrong")


def get(name: str) -> CatalogEntry:
    return _load(name)


def all_entries() -> list[CatalogEntry]:
    return [get(n) for n in NAMES]


def list_entries() -> list[dict]:
    """One row per entry: name, dim, step, abelian_J, is_skt."""
    rows = []
    for e in all_entries():
        T = e.triple
        rows.append(
            {
                "name": e.name,
                "dim": T.dim,
                "step": T.L.nilpotency_step(),
                "abelian_J": e.tags["abelian_J"],
                "is_skt": is_skt(T).is_skt,
            }
        )
    return rows
