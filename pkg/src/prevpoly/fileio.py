"""Text file formats for gamble sets, previsions, and polytope descriptions.

All numbers serialize as exact rationals (``p/q``, or ``p`` when integral);
no decimal output exists anywhere.  Lines starting with ``#`` are comments.
Every writer's output reads back to an equal value.
"""

from __future__ import annotations

from ._rat import Rat, rat, rat_str
from .errors import PrevpolyError
from .gambles import GambleSet, PossibilitySpace
from .polytope import AdjacencyGraph, HRep, VRep

__all__ = [
    "write_gamble_set",
    "read_gamble_set",
    "write_prevision_values",
    "read_prevision_values",
    "write_hrep",
    "read_hrep",
    "write_vrep",
    "read_vrep",
    "write_adjacency",
    "read_adjacency",
]


def _check_token(name: str) -> str:
    if not name or any(ch.isspace() for ch in name) or name.startswith("#"):
        raise PrevpolyError(f"name {name!r} cannot be serialized (whitespace or '#')")
    return name


def _data_lines(text: str) -> list[list[str]]:
    out = []
    for line in text.splitlines():
        body = line.split("#", 1)[0].strip()
        if body:
            out.append(body.split())
    return out


def write_gamble_set(k: GambleSet) -> str:
    lines = ["space " + " ".join(_check_token(w) for w in k.space.elements)]
    for name, g in k:
        lines.append(
            "gamble " + _check_token(name) + " " + " ".join(rat_str(v) for v in g.payoffs)
        )
    return "\n".join(lines) + "\n"


def read_gamble_set(text: str) -> GambleSet:
    space = None
    pairs = []
    for tokens in _data_lines(text):
        kind, rest = tokens[0], tokens[1:]
        if kind == "space":
            if space is not None:
                raise PrevpolyError("duplicate space line")
            space = PossibilitySpace(tuple(rest))
        elif kind == "gamble":
            if space is None:
                raise PrevpolyError("gamble line before the space line")
            if len(rest) != len(space) + 1:
                raise PrevpolyError(f"gamble line has {len(rest) - 1} payoffs, expected {len(space)}")
            pairs.append((rest[0], tuple(rat(v) for v in rest[1:])))
        else:
            raise PrevpolyError(f"unknown line kind {kind!r} in gamble-set file")
    if space is None:
        raise PrevpolyError("missing space line")
    return GambleSet.of(space, pairs)


def write_prevision_values(values: dict[str, Rat]) -> str:
    return "".join(f"{_check_token(n)} {rat_str(v)}\n" for n, v in values.items())


def read_prevision_values(text: str) -> dict[str, Rat]:
    out: dict[str, Rat] = {}
    for tokens in _data_lines(text):
        if len(tokens) != 2:
            raise PrevpolyError(f"prevision line needs 'name value', got {tokens!r}")
        name, value = tokens
        if name in out:
            raise PrevpolyError(f"duplicate prevision value for {name!r}")
        out[name] = rat(value)
    return out


def write_hrep(h: HRep) -> str:
    lines = ["# coords " + " ".join(_check_token(n) for n in h.names)]
    lines.append(f"H {len(h.constraints)} {h.dim}")
    for coeffs, rhs in h.constraints:
        lines.append(" ".join([rat_str(rat(rhs))] + [rat_str(rat(c)) for c in coeffs]))
    return "\n".join(lines) + "\n"


def _read_coords_comment(text: str) -> tuple[str, ...] | None:
    for line in text.splitlines():
        body = line.strip()
        if body.startswith("# coords "):
            return tuple(body[len("# coords "):].split())
    return None


def read_hrep(text: str) -> HRep:
    names = _read_coords_comment(text)
    lines = _data_lines(text)
    if not lines or lines[0][0] != "H":
        raise PrevpolyError("missing 'H <m> <d>' header")
    m, d = int(lines[0][1]), int(lines[0][2])
    rows = []
    for tokens in lines[1 : 1 + m]:
        if len(tokens) != d + 1:
            raise PrevpolyError("constraint row width does not match the header")
        rhs = rat(tokens[0])
        coeffs = tuple(rat(v) for v in tokens[1:])
        rows.append((coeffs, rhs))
    if len(rows) != m:
        raise PrevpolyError("fewer constraint rows than the header declares")
    return HRep(d, tuple(rows), names or ())


def write_vrep(v: VRep) -> str:
    lines = ["# coords " + " ".join(_check_token(n) for n in v.names)]
    lines.append(f"V {len(v.vertices)} {v.dim}")
    for vertex in v.vertices:
        lines.append(" ".join(rat_str(x) for x in vertex))
    return "\n".join(lines) + "\n"


def read_vrep(text: str) -> VRep:
    names = _read_coords_comment(text)
    lines = _data_lines(text)
    if not lines or lines[0][0] != "V":
        raise PrevpolyError("missing 'V <n> <d>' header")
    n, d = int(lines[0][1]), int(lines[0][2])
    vertices = []
    for tokens in lines[1 : 1 + n]:
        if len(tokens) != d:
            raise PrevpolyError("vertex row width does not match the header")
        vertices.append(tuple(rat(v) for v in tokens))
    if len(vertices) != n:
        raise PrevpolyError("fewer vertex rows than the header declares")
    return VRep(d, tuple(vertices), names or ())


def write_adjacency(graph: AdjacencyGraph) -> str:
    lines = [f"# adjacency of {graph.n_vertices} vertices"]
    lines += [f"{u} {v}" for u, v in graph.edges]
    return "\n".join(lines) + "\n"


def read_adjacency(text: str) -> list[tuple[int, int]]:
    pairs = []
    for tokens in _data_lines(text):
        if len(tokens) != 2:
            raise PrevpolyError(f"adjacency line needs 'u v', got {tokens!r}")
        u, v = int(tokens[0]), int(tokens[1])
        if not u < v:
            raise PrevpolyError("adjacency pairs must satisfy u < v")
        pairs.append((u, v))
    return pairs
