"""Global, append-only symbol registry.

Symbols carry a scaling weight under the one-dimensional structure group:
a scalar with ``dX = -k X rho0 + ...`` has weight ``k``.  Derivative symbols
use underscore-separated indices (``A0_1_1`` is the omega^1 derivative of
``A0_1``) and inherit ``weight(X) + 1`` for indices 1, 2 and ``weight(X) + 2``
for index 0 (the theta direction).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum


class Origin(str, Enum):
    INVARIANT = "invariant"
    FRESH = "fresh-derivative"
    DEFORMATION = "deformation"
    COORDINATE = "coordinate"


#: weight increment for a derivative in the direction of each coframe index
DERIVATIVE_WEIGHT = {"1": 1, "2": 1, "0": 2}


@dataclass(frozen=True)
class Symbol:
    name: str
    weight: int | None
    origin: Origin
    index: int

    @property
    def base(self) -> str:
        return self.name.split("_", 1)[0]

    @property
    def order(self) -> int:
        """Number of derivative indices carried by the name."""
        return self.name.count("_")


class SymbolError(ValueError):
    pass


class Registry:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._by_name: dict[str, Symbol] = {}
        self._by_index: list[Symbol] = []

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self._by_index)

    def get(self, name: str) -> Symbol:
        try:
            return self._by_name[name]
        except KeyError:
            raise SymbolError(f"unregistered symbol {name!r}") from None

    def by_index(self, index: int) -> Symbol:
        return self._by_index[index]

    def register(self, name: str, weight: int | None = None,
                 origin: Origin = Origin.INVARIANT) -> Symbol:
        """Register ``name``; re-registering with a consistent weight is a no-op.

        A missing weight is inferred from the derivative naming convention when
        the parent symbol is known.
        """
        if not name.isidentifier():
            raise SymbolError(f"symbol names must be identifiers: {name!r}")
        with self._lock:
            sym = self._by_name.get(name)
            if weight is None:
                weight = self._inferred_weight(name)
            if sym is not None:
                if weight is not None and sym.weight is not None and sym.weight != weight:
                    raise SymbolError(
                        f"weight conflict for {name}: registered {sym.weight}, got {weight}")
                if sym.weight is None and weight is not None:
                    sym = Symbol(name, weight, sym.origin, sym.index)
                    self._by_name[name] = sym
                    self._by_index[sym.index] = sym
                return sym
            sym = Symbol(name, weight, origin, len(self._by_index))
            self._by_name[name] = sym
            self._by_index.append(sym)
            return sym

    def _inferred_weight(self, name: str) -> int | None:
        parent, sep, idx = name.rpartition("_")
        if not sep or idx not in DERIVATIVE_WEIGHT:
            return None
        psym = self._by_name.get(parent)
        if psym is None:
            pw = self._inferred_weight(parent)
        else:
            pw = psym.weight
        if pw is None:
            return None
        return pw + DERIVATIVE_WEIGHT[idx]

    def infer_missing(self) -> list[str]:
        """Fill in derivative weights that became inferable; returns names updated."""
        done = []
        changed = True
        while changed:
            changed = False
            for sym in list(self._by_index):
                if sym.weight is None and self._inferred_weight(sym.name) is not None:
                    self.register(sym.name)
                    done.append(sym.name)
                    changed = True
        return done

    def names(self) -> list[str]:
        return [s.name for s in self._by_index]


REGISTRY = Registry()


def symbol(name: str, weight: int | None = None,
           origin: Origin = Origin.INVARIANT) -> Symbol:
    return REGISTRY.register(name, weight, origin)


def derivative_name(name: str, direction: str) -> str:
    return f"{name}_{direction}"
