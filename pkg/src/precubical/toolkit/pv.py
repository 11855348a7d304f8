"""PV-program parsing and compilation to Euclidean cubical state spaces.

A PV program is a parallel composition of sequential processes whose
actions lock (``P``) and release (``V``) binary semaphores.  Process i
with k actions runs along axis i of the grid ``prod [0, k_i]``; a
semaphore locked at step j and released at step j' is held on the open
interval ``(j-1, j')``.  An elementary cube of the grid is forbidden when
its relative interior lies inside the joint hold region of one semaphore
for two distinct processes, and the state space is the complex of all
remaining elementary cubes.  The hold-interval convention is fixed here
so that the computed schedule counts are stable.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from ..cubeset import BoxSpec, CubeSet, euclidean
from ..errors import FormatError, PrecubicalError

__all__ = ["PVProgram", "parse_pv", "pv_to_euclidean"]

_ACTION = re.compile(r"^(P|V)\(([A-Za-z_][A-Za-z_0-9]*)\)$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


@dataclass(frozen=True)
class PVProgram:
    """Binary-semaphore processes: per process, a list of (op, semaphore)."""

    semaphores: dict[str, int]
    processes: tuple[tuple[tuple[str, str], ...], ...]
    names: tuple[str, ...]

    def __post_init__(self):
        for name, capacity in self.semaphores.items():
            if capacity != 1:
                raise PrecubicalError(f"semaphore {name!r}: only capacity 1 is supported")


def parse_pv(text: str) -> PVProgram:
    """Parse a PV program such as ``"A = P(a).V(a); B = P(a).V(a)"``.

    Statements are separated by ``;`` or newlines; the process name with
    ``=`` is optional.  Per process, P and V on each semaphore must
    alternate starting with P, and every P needs a matching later V.
    """
    processes: list[tuple[tuple[str, str], ...]] = []
    names: list[str] = []
    semaphores: set[str] = set()
    statements = [s.strip() for part in text.split("\n") for s in part.split(";")]
    for stmt in statements:
        if not stmt or stmt.startswith("#"):
            continue
        name = None
        body = stmt
        if "=" in stmt:
            name, body = (s.strip() for s in stmt.split("=", 1))
            if not _NAME.match(name):
                raise FormatError(f"bad process name {name!r}")
        actions = []
        for token in (a.strip() for a in body.split(".")):
            m = _ACTION.match(token)
            if not m:
                raise FormatError(f"bad action {token!r} (expected P(name) or V(name))")
            actions.append((m.group(1), m.group(2)))
            semaphores.add(m.group(2))
        _check_alternation(name or f"proc{len(processes)}", actions)
        processes.append(tuple(actions))
        names.append(name or f"proc{len(processes) - 1}")
    return PVProgram({s: 1 for s in sorted(semaphores)}, tuple(processes), tuple(names))


def _check_alternation(name: str, actions: list[tuple[str, str]]) -> None:
    held: set[str] = set()
    for op, sem in actions:
        if op == "P":
            if sem in held:
                raise FormatError(f"process {name!r}: P({sem}) while already held")
            held.add(sem)
        else:
            if sem not in held:
                raise FormatError(f"process {name!r}: V({sem}) without matching P")
            held.remove(sem)
    if held:
        raise FormatError(f"process {name!r}: unreleased semaphores {sorted(held)}")


def _hold_intervals(prog: PVProgram) -> dict[str, list[list[tuple[int, int]]]]:
    """Per semaphore, per process, the open hold intervals (as int pairs)."""
    out: dict[str, list[list[tuple[int, int]]]] = {
        sem: [[] for _ in prog.processes] for sem in prog.semaphores
    }
    for pi, actions in enumerate(prog.processes):
        pending: dict[str, int] = {}
        for pos, (op, sem) in enumerate(actions, start=1):
            if op == "P":
                pending[sem] = pos
            else:
                out[sem][pi].append((pending.pop(sem) - 1, pos))
    return out


def _side_inside(z: int, extent: int, lo: int, hi: int) -> bool:
    # relative interior of [z, z+extent] inside the open interval (lo, hi)
    if extent:
        return lo <= z and z + 1 <= hi
    return lo < z < hi


def pv_to_euclidean(prog: PVProgram) -> tuple[CubeSet, str, str]:
    """Compile a PV program to its cubical state space plus start/end vertices.

    The grid has one axis per process; an elementary cube survives unless
    two distinct processes jointly hold a semaphore across its whole
    relative interior.  The result is always a valid, proper,
    non-self-linked complex, and the extremal vertices are never
    forbidden.
    """
    lengths = [len(actions) for actions in prog.processes]
    holds = _hold_intervals(prog)
    boxes: list[BoxSpec] = []
    for bottom in itertools.product(*(range(k + 1) for k in lengths)):
        for extents in itertools.product(*((0, 1) if z < k else (0,) for z, k in zip(bottom, lengths))):
            forbidden = False
            for sem, per_process in holds.items():
                inside = [
                    pi
                    for pi in range(len(lengths))
                    if any(
                        _side_inside(bottom[pi], extents[pi], lo, hi) for lo, hi in per_process[pi]
                    )
                ]
                if len(inside) >= 2:
                    forbidden = True
                    break
            if not forbidden:
                top = tuple(z + e for z, e in zip(bottom, extents))
                boxes.append(BoxSpec(bottom, top))
    if not boxes:
        raise PrecubicalError("the whole grid is forbidden")
    X = euclidean(boxes)
    start = ",".join("0" for _ in lengths) + "|" + ",".join("0" for _ in lengths)
    end = ",".join(str(k) for k in lengths) + "|" + ",".join(str(k) for k in lengths)
    if lengths == []:
        start = end = "|"
    return X, start, end
