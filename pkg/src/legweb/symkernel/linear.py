"""Linear elimination with exact constant pivots."""
from __future__ import annotations

from collections.abc import Iterable, Mapping

from .poly import Poly, substitute


class LinearityError(ValueError):
    pass


def solve_linear(eqs: Iterable[Poly], unknowns: Iterable[str],
                 known: Mapping[str, Poly] | None = None) -> tuple[dict[str, Poly], list[Poly]]:
    """Solve ``eqs = 0`` for ``unknowns`` using only nonzero rational pivots.

    Returns the solved unknowns (as polynomials free of every solved unknown)
    and the equations left over after substitution.  Leftovers are either
    identities (dropped) or equations whose unknown coefficients are not
    constants.
    """
    unknowns = list(unknowns)
    sol: dict[str, Poly] = dict(known or {})
    pending = [substitute(e, sol, check=False) if sol else e for e in eqs]
    for e in pending:
        if e.degree_in(unknowns) > 1:
            raise LinearityError(f"equation is not linear in the unknowns: {e.to_text()}")
    progress = True
    while progress:
        progress = False
        pending = [e for e in pending if not e.is_zero()]
        for e in pending:
            for u in unknowns:
                if u in sol:
                    continue
                c = e.diff(u)
                if c.is_zero() or not c.is_constant():
                    continue
                val = (e - Poly.var(u) * c.constant_value()) / (-c.constant_value())
                sol = {k: substitute(v, {u: val}, check=False) for k, v in sol.items()}
                sol[u] = val
                pending = [substitute(x, {u: val}, check=False) for x in pending]
                progress = True
                break
            if progress:
                break
    known_keys = set(known or {})
    return {k: v for k, v in sol.items() if k not in known_keys}, [e for e in pending if not e.is_zero()]
