"""Interned indeterminates.

Every symbol lives in a process-wide, append-only table.  A symbol is
identified by its descriptor (kind plus kind-specific fields); interning the
same descriptor twice returns the same id.  The monomial order does not use
the raw id but ``order_key`` which is derived from the descriptor, so the
order is reproducible whatever the registration sequence was.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass


class SymbolKind(enum.IntEnum):
    # values double as the primary rank in the monomial order
    PHI = 0
    JET = 1
    COEFF = 2
    VAR = 3


@dataclass(frozen=True)
class Symbol:
    id: int
    kind: SymbolKind
    name: str
    i: int = 0
    j: int = 0
    composed: bool = False

    @property
    def order_key(self) -> tuple:
        if self.kind is SymbolKind.PHI:
            return (0, self.name, self.i, self.j)
        if self.kind is SymbolKind.JET:
            # i = derivative order, j = 1 for tilde coordinates
            return (1, self.j, self.i)
        if self.kind is SymbolKind.COEFF:
            return (2, self.name, self.composed)
        return (3, self.name)

    @property
    def text(self) -> str:
        """ASCII spelling used by the printer and the parser."""
        if self.kind is SymbolKind.PHI:
            return f"{self.name}{self.i}{self.j}"
        if self.kind is SymbolKind.JET:
            return f"yt{self.i}" if self.j else f"y{self.i}"
        if self.kind is SymbolKind.COEFF:
            return f"{self.name}_o" if self.composed else self.name
        return self.name

    def __str__(self) -> str:
        return self.text


_lock = threading.Lock()
_table: list[Symbol] = []
_index: dict[tuple, int] = {}
_rank: list[tuple] = []


def _intern(kind: SymbolKind, name: str, i: int = 0, j: int = 0,
            composed: bool = False) -> int:
    desc = (kind, name, i, j, composed)
    sid = _index.get(desc)
    if sid is not None:
        return sid
    with _lock:
        sid = _index.get(desc)
        if sid is None:
            sid = len(_table)
            sym = Symbol(sid, kind, name, i, j, composed)
            _table.append(sym)
            _rank.append(sym.order_key)
            _index[desc] = sid
    return sid


def symbol(sid: int) -> Symbol:
    return _table[sid]


def rank(sid: int) -> tuple:
    return _rank[sid]


def table_size() -> int:
    return len(_table)


def phi(name: str, i: int, j: int) -> int:
    """Partial derivative ``name_{i.j}`` of an inverse-map component."""
    if name not in ("x", "y"):
        raise ValueError(f"map component must be 'x' or 'y', got {name!r}")
    if i < 0 or j < 0 or i + j < 1:
        raise ValueError(f"invalid multi-index ({i}, {j})")
    return _intern(SymbolKind.PHI, name, i, j)


def jet(order: int, tilde: bool = True) -> int:
    if order < 1:
        raise ValueError("jet order starts at 1")
    return _intern(SymbolKind.JET, "y", order, int(tilde))


def coeff(name: str, composed: bool = False) -> int:
    """Opaque coefficient function; ``composed`` marks F(x(xt,yt), y(xt,yt))."""
    return _intern(SymbolKind.COEFF, name, composed=composed)


def var(name: str) -> int:
    return _intern(SymbolKind.VAR, name)


def composed_of(sid: int) -> int:
    """The composed counterpart of an opaque coefficient symbol."""
    s = _table[sid]
    if s.kind is not SymbolKind.COEFF or s.composed:
        raise ValueError(f"{s.text} is not a plain opaque coefficient")
    return coeff(s.name, composed=True)


CLASS_COEFF_NAMES = ("B", "P", "Q", "R", "S", "L", "K", "M", "N", "T", "X", "Y")


def _preregister() -> None:
    for name in ("x", "y"):
        for order in range(1, 4):
            for i in range(order, -1, -1):
                phi(name, i, order - i)
    for tilde in (False, True):
        for k in range(1, 4):
            jet(k, tilde)
    for name in sorted(CLASS_COEFF_NAMES):
        coeff(name)
        coeff(name, composed=True)
    for name in ("x", "y"):
        coeff(name, composed=True)
    for name in ("x", "y", "xt", "yt"):
        var(name)


_preregister()
