"""Named example modules shipped with the package (and mirrored under ``fixtures/``)."""
from __future__ import annotations

from .intervals import Staircase, interval_rep
from .linalg import FieldSpec, Matrix
from .quiver import equioriented, make_grid
from .rep import Rep, direct_sum

Q = FieldSpec.rational()


def _thin(q, field, ones, maps) -> Rep:
    dims = {v: 1 for v in ones}
    return Rep(q, field, dims, {name: Matrix(field, [[c]]) for name, c in maps.items()})


def m_lambda(lam, field: FieldSpec = Q) -> Rep:
    """Thin module on the 2x2x2 cube, zero at the two extreme corners.

    Five arrows carry 1 and the arrow ``2,1,1 -> 2,2,1`` carries ``lam``.
    It is indecomposable for every ``lam``, pre-interval iff ``lam != 0`` and
    an interval module iff ``lam == 1``.
    """
    q = equioriented(2, 2, 2)
    ones = [(2, 1, 1), (1, 2, 1), (2, 2, 1), (1, 1, 2), (2, 1, 2), (1, 2, 2)]
    maps = {
        "1,1,2->1,2,2": 1, "1,1,2->2,1,2": 1, "1,2,1->2,2,1": 1,
        "1,2,1->1,2,2": 1, "2,1,1->2,1,2": 1, "2,1,1->2,2,1": lam,
    }
    return _thin(q, field, ones, maps)


def non_equioriented(lam, field: FieldSpec = Q) -> Rep:
    """Thin module on the 3x3 grid with both factors oriented backward then forward.

    Everything but the centre is one-dimensional. All eight boundary arrows
    are nonzero; seven carry 1 and ``1,2 -> 1,3`` carries ``lam``.
    """
    q = make_grid([(3, "bf"), (3, "bf")])
    ones = [v for v in q.vertices if v != (2, 2)]
    maps = {
        "3,2->3,1": 1, "3,2->3,3": 1, "2,1->3,1": 1, "2,1->1,1": 1,
        "2,3->3,3": 1, "2,3->1,3": 1, "1,2->1,1": 1, "1,2->1,3": lam,
    }
    return _thin(q, field, ones, maps)


CORRESPONDENCE = (
    Staircase(1, 4, ((5, 6), (3, 5), (3, 4), (2, 4))),
    Staircase(2, 3, ((3, 5), (2, 4))),
)


def correspondence(k: int, field: FieldSpec = Q) -> Rep:
    return interval_rep(equioriented(4, 6), CORRESPONDENCE[k], field)


def a3_interval(b: int, d: int, field: FieldSpec = Q) -> Rep:
    """``I[b,d]`` on the equioriented ``A_3``, realized as the 1x3 grid."""
    return interval_rep(equioriented(1, 3), Staircase(1, 1, ((b, d),)), field)


def i12_plus_i11_a3(field: FieldSpec = Q) -> Rep:
    return direct_sum(a3_interval(1, 2, field), a3_interval(1, 1, field))


def thin_2x2(field: FieldSpec = FieldSpec.prime(5)) -> Rep:
    """All four vertices one-dimensional; only the bottom and top arrows are nonzero."""
    q = equioriented(2, 2)
    maps = {"1,1->1,2": 1, "1,2->2,2": 0, "1,1->2,1": 0, "2,1->2,2": 1}
    return _thin(q, field, q.vertices, maps)


def catalogue() -> dict[str, Rep]:
    """Every bundled fixture by file stem."""
    f2 = FieldSpec.prime(2)
    return {
        "m_lambda_0": m_lambda(0, f2),
        "m_lambda_1": m_lambda(1),
        "m_lambda_2": m_lambda(2),
        "non_equioriented_0": non_equioriented(0),
        "non_equioriented_2": non_equioriented(2),
        "correspondence_a": correspondence(0),
        "correspondence_b": correspondence(1),
        "i12_a3": a3_interval(1, 2),
        "i22_a3": a3_interval(2, 2),
        "i23_a3": a3_interval(2, 3),
        "i12_plus_i11_a3": i12_plus_i11_a3(),
        "thin_2x2": thin_2x2(),
    }


def write_all(directory) -> list:
    """Write every fixture as ``<stem>.json`` into ``directory``."""
    from pathlib import Path

    from .io import write_module

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for stem, rep in catalogue().items():
        path = out / f"{stem}.json"
        write_module(rep, path)
        paths.append(path)
    return paths


if __name__ == "__main__":
    import sys

    for p in write_all(sys.argv[1] if len(sys.argv) > 1 else "fixtures"):
        print(p)
